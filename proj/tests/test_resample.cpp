#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "ricci/errors.hpp"
#include "ricci/resample.hpp"

using namespace ricci;

TEST_CASE("constants survive any resampling exactly") {
    auto src = build_grid(1.0, 17, 12, 2.0, 0.05);
    auto dst = build_grid(0.8, 23, 20, 1.3, 0.1);
    const ScalarField c(src, 2.75);
    const ScalarField out = resample(c, dst);
    for (std::size_t n = 0; n < out.size(); ++n)
        CHECK(out[n] == doctest::Approx(2.75).epsilon(1e-14));
}

TEST_CASE("identical grid resampling is bitwise identity") {
    auto g = build_grid(1.0, 17, 12, 2.0, 0.05);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ScalarField f(g);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = d(rng);
    auto g2 = build_grid(1.0, 17, 12, 2.0, 0.05);
    const ScalarField out = resample(f, g2);
    CHECK(std::memcmp(out.values().data(), f.values().data(),
                      f.size() * sizeof(double)) == 0);
}

TEST_CASE("quadratic monomials to a finer grid: cubic-order error") {
    // property: exact on polynomials of degree <= 2 in (x, y) up to O(h^3)
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        const double c20 = d(rng), c02 = d(rng), c11 = d(rng), c10 = d(rng),
                     c01 = d(rng), c00 = d(rng);
        auto poly = [&](double r, double th) {
            const double x = r * std::cos(th), y = r * std::sin(th);
            return c20 * x * x + c02 * y * y + c11 * x * y + c10 * x + c01 * y + c00;
        };
        auto src = build_grid(1.0, 33, 24, 1.7, 0.05);
        auto dst = build_grid(0.9, 47, 40, 1.2, 0.08);
        const ScalarField f = ScalarField::from_function(src, poly);
        const ScalarField out = resample(f, dst);
        const ScalarField exact = ScalarField::from_function(dst, poly);
        const double h = 2.0 * 0.95 / 32; // coarsest source spacing
        CHECK(sup_diff(out, exact) < h * h * h);
    }
}

TEST_CASE("radial source to 2-d target and back") {
    auto src = build_grid(1.0, 65, 1, 2.0, 0.05);
    auto dst = build_grid(0.7, 17, 16, 1.0, 0.1);
    const ScalarField f =
        ScalarField::from_function(src, [](double r, double) { return std::cos(3.0 * r); });
    const ScalarField out = resample(f, dst);
    const ScalarField exact =
        ScalarField::from_function(dst, [](double r, double) { return std::cos(3.0 * r); });
    CHECK(sup_diff(out, exact) < 1e-5);
}

TEST_CASE("target outside the source domain is rejected") {
    auto src = build_grid(0.5, 17, 12, 1.0, 0.1);
    auto dst = build_grid(0.6, 17, 12, 1.0, 0.1);
    const ScalarField f(src, 1.0);
    CHECK_THROWS_AS(resample(f, dst), DomainError);
    CHECK_THROWS_AS(sample_at(f, 0.46, 0.0), DomainError);
    CHECK_NOTHROW(sample_at(f, 0.45, 1.0));
}
