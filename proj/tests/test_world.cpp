#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hybnav/world.hpp"

using namespace hybnav;

namespace {

WorldModel single_disc_world() {
    return WorldModel({ConvexShape::disc({5, 0}, 1)}, 0.3, 0.1);
}

}  // namespace

TEST_CASE("validate_world accepts the reference single-disc setup") {
    const auto report = validate_world(single_disc_world(), 0.35);
    CHECK(report.valid());
}

TEST_CASE("validate_world rejects insufficient separation") {
    // Center gap 2.5 with unit radii leaves a 0.5 gap; the robot diameter
    // is 0.6, so the corridor between them is infeasible.
    const WorldModel w({ConvexShape::disc({0, 0}, 1), ConvexShape::disc({2.5, 0}, 1)},
                       0.3, 0.1);
    const auto report = validate_world(w, 0.35);
    CHECK_FALSE(report.valid());
}

TEST_CASE("validate_world treats the empty world as valid") {
    const WorldModel w({}, 0.3, 0.1);
    CHECK(w.min_pairwise_separation() == kInfinity);
    CHECK(validate_world(w, 0.35).valid());
}

TEST_CASE("validate_world is monotone in r_s and eps_d") {
    const std::vector<ConvexShape> obstacles{ConvexShape::disc({5, 0}, 1),
                                             ConvexShape::disc({-4, 3}, 0.8)};
    const WorldModel base(obstacles, 0.3, 0.1);
    REQUIRE(validate_world(base, 0.35).valid());
    CHECK(validate_world(base, 0.2).valid());
    CHECK(validate_world(WorldModel(obstacles, 0.3, 0.05), 0.35).valid());
}

TEST_CASE("min_pairwise_separation") {
    const WorldModel w({ConvexShape::disc({0, 0}, 1), ConvexShape::disc({5, 0}, 1)},
                       0.0, 0.1);
    CHECK(w.min_pairwise_separation() == Catch::Approx(3.0));

    const WorldModel touching(
        {ConvexShape::disc({0, 0}, 1), ConvexShape::disc({2, 0}, 1)}, 0.0, 0.1);
    CHECK(touching.min_pairwise_separation() == Catch::Approx(0.0).margin(1e-12));

    const WorldModel mixed(
        {ConvexShape::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
         ConvexShape::disc({3, 0.5}, 1)},
        0.0, 0.1);
    CHECK(mixed.min_pairwise_separation() == Catch::Approx(1.0));
}

TEST_CASE("nearest_obstacle") {
    const auto w = single_disc_world();
    const auto n = w.nearest_obstacle({3.5, 0});
    CHECK(n.index == 0);
    CHECK(n.distance == Catch::Approx(0.5));
    CHECK(n.projection.x == Catch::Approx(4.0));
    CHECK(n.projection.y == Catch::Approx(0.0).margin(1e-12));

    const WorldModel two({ConvexShape::disc({5, 0}, 1), ConvexShape::disc({0, 6}, 1)},
                         0.3, 0.1);
    const auto n2 = two.nearest_obstacle({0, 0});
    CHECK(n2.index == 0);
    CHECK(n2.distance == Catch::Approx(4.0));

    // Exact ties resolve to the smallest index.
    const WorldModel tie({ConvexShape::disc({-5, 0}, 1), ConvexShape::disc({5, 0}, 1)},
                         0.3, 0.1);
    CHECK(tie.nearest_obstacle({0, 0}).index == 0);
}

TEST_CASE("band uniqueness: at most one obstacle within the switching band") {
    const std::vector<ConvexShape> obstacles{
        ConvexShape::disc({5, 0}, 1),
        ConvexShape::polygon({{-3, -3}, {-1, -3}, {-1, -1}, {-3, -1}}),
        ConvexShape::disc({0, 5}, 0.7)};
    const WorldModel w(obstacles, 0.3, 0.1);
    const double eps_d = 0.35;
    REQUIRE(validate_world(w, eps_d).valid());
    const double band = w.r_a() + eps_d;

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ad(0.0, 2 * kPi);
    std::uniform_real_distribution<double> rd(0.0, band + 0.2);
    for (const auto& o : obstacles) {
        const Vec2 c = o.interior_point();
        for (int i = 0; i < 2000; ++i) {
            const double a = ad(rng);
            const Vec2 x = c + Vec2{std::cos(a), std::sin(a)} *
                                   (o.bounding_radius() + rd(rng));
            if (w.distance_to_obstacles(x) < w.r_a()) continue;
            int in_band = 0;
            for (const auto& other : obstacles)
                if (distance_to(x, other) <= band) ++in_band;
            CHECK(in_band <= 1);
        }
    }
}

TEST_CASE("r_s_bar follows the separation and clearance bounds") {
    const auto w = single_disc_world();
    // One obstacle: separation term is vacuous, clearance term is 4 - 0.3.
    CHECK(w.r_s_bar() == Catch::Approx(3.7));
    CHECK(w.target_clearance() == Catch::Approx(4.0));
    CHECK(w.r_a() == Catch::Approx(0.4));
}
