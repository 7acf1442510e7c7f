#include <doctest.h>

#include <cmath>

#include "ricci/errors.hpp"
#include "ricci/grid.hpp"

using namespace ricci;

TEST_CASE("uniform radii for clustering 1") {
    auto g = build_grid(1.0, 9, 8, 1.0, 0.1);
    const auto r = g->radii();
    REQUIRE(r.size() == 9);
    for (int i = 0; i < 9; ++i)
        CHECK(r[i] == doctest::Approx(0.9 * i / 8.0).epsilon(1e-14));
    CHECK(r[0] == 0.0);
    CHECK(r[8] == 0.9);
}

TEST_CASE("clustering 2 halves the spacing toward the rim") {
    auto g = build_grid(1.0, 9, 8, 2.0, 0.1);
    const auto r = g->radii();
    CHECK(r[8] == 0.9);
    // last interval vs first interval: (1 - (1-xi)^2) map shrinks spacing
    const double first = r[1] - r[0];
    const double last = r[8] - r[7];
    CHECK(last < 0.3 * first);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
}

TEST_CASE("max radius is a (1 - collar) exactly") {
    auto g = build_grid(0.5, 65, 64, 3.0, 0.05);
    CHECK(g->max_radius() == 0.5 * 0.95);
    CHECK(g->radii().back() == 0.475);
}

TEST_CASE("node layout and counts") {
    auto g = build_grid(1.0, 16, 12, 2.0, 0.02);
    CHECK(g->node_count() == 1 + 15 * 12);
    CHECK(g->interior_count() == 1 + 14 * 12);
    CHECK(g->index(1, 0) == 1);
    CHECK(g->index(2, 0) == 13);
    CHECK(g->ring_of(0) == 0);
    CHECK(g->ring_of(g->index(5, 7)) == 5);
    CHECK(g->angle_of(g->index(5, 7)) == 7);
    CHECK(g->is_interior(g->index(14, 3)));
    CHECK(!g->is_interior(g->index(15, 3)));
}

TEST_CASE("radial fast path layout") {
    auto g = build_grid(1.0, 32, 1, 2.0, 0.02);
    CHECK(g->radial());
    CHECK(g->node_count() == 32);
    CHECK(g->index(5, 0) == 5);
    CHECK(g->line_ca().size() == 30);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(build_grid(0.0, 16, 16, 1.0, 0.1), ConfigError);
    CHECK_THROWS_AS(build_grid(1.5, 16, 16, 1.0, 0.1), ConfigError);
    CHECK_THROWS_AS(build_grid(1.0, 7, 16, 1.0, 0.1), ConfigError);
    CHECK_THROWS_AS(build_grid(1.0, 16, 4, 1.0, 0.1), ConfigError);
    CHECK_THROWS_AS(build_grid(1.0, 16, 16, 0.5, 0.1), ConfigError);
    CHECK_THROWS_AS(build_grid(1.0, 16, 16, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(build_grid(1.0, 16, 16, 1.0, 0.6), ConfigError);
    CHECK_NOTHROW(build_grid(1.0, 16, 1, 1.0, 0.1)); // radial fast path
}
