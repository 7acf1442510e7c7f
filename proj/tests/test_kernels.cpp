// Equivalence tests between the scalar reference kernels and the SIMD
// lane: bit-exact for the pure-arithmetic kernels, a few ulp for the
// vector exp.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <iostream>
#include <random>
#include <vector>

#include "ricci/kernels.hpp"

using namespace ricci;

namespace {

std::vector<double> random_row(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("simd lane matches the scalar reference") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (!simd) {
        MESSAGE("AVX2 unavailable; equivalence suite skipped");
        return;
    }
    const kernels::Ops& ref = kernels::scalar_ops();
    std::mt19937_64 rng(20240517);

    for (std::size_t n : {1ul, 2ul, 3ul, 5ul, 8ul, 13ul, 64ul, 127ul, 256ul}) {
        auto below = random_row(n, rng, -3.0, 3.0);
        auto self = random_row(n, rng, -3.0, 3.0);
        auto above = random_row(n, rng, -3.0, 3.0);
        std::vector<double> out_a(n), out_b(n);

        ref.lap_ring(below.data(), self.data(), above.data(), out_a.data(), n,
                     1.7, -4.2, 2.5, 0.35);
        simd->lap_ring(below.data(), self.data(), above.data(), out_b.data(), n,
                       1.7, -4.2, 2.5, 0.35);
        CHECK(bitwise_equal(out_a, out_b));

        if (n >= 3) {
            auto ca = random_row(n - 2, rng, -2.0, 2.0);
            auto cb = random_row(n - 2, rng, -2.0, 2.0);
            auto cc = random_row(n - 2, rng, -2.0, 2.0);
            std::vector<double> la(n - 2), lb(n - 2);
            ref.lap_line(self.data() + 1, la.data(), n - 2, ca.data(), cb.data(), cc.data());
            simd->lap_line(self.data() + 1, lb.data(), n - 2, ca.data(), cb.data(), cc.data());
            CHECK(bitwise_equal(la, lb));
        }

        ref.mul_add(below.data(), self.data(), above.data(), 0.037, out_a.data(), n);
        simd->mul_add(below.data(), self.data(), above.data(), 0.037, out_b.data(), n);
        CHECK(bitwise_equal(out_a, out_b));

        ref.neg_mul(self.data(), above.data(), out_a.data(), n);
        simd->neg_mul(self.data(), above.data(), out_b.data(), n);
        CHECK(bitwise_equal(out_a, out_b));

        CHECK(ref.reduce_min(self.data(), n) == simd->reduce_min(self.data(), n));
        CHECK(ref.reduce_max(self.data(), n) == simd->reduce_max(self.data(), n));
        CHECK(ref.reduce_abs_max(self.data(), n) == simd->reduce_abs_max(self.data(), n));
    }
}

TEST_CASE("vector exp agrees with libm to a few ulp") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (!simd) {
        MESSAGE("AVX2 unavailable; vector exp test skipped");
        return;
    }
    std::mt19937_64 rng(987123);
    std::vector<double> u = random_row(4093, rng, -50.0, 50.0);
    // edge values the solver guard permits
    u.insert(u.end(), {-50.0, 50.0, 0.0, 1e-300, -1e-300, 0.6931471805599453});

    std::vector<double> a(u.size()), b(u.size());
    kernels::scalar_ops().exp_neg2(u.data(), a.data(), u.size());
    simd->exp_neg2(u.data(), b.data(), u.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        worst = std::max(worst, std::fabs(a[i] - b[i]) / a[i]);
    CHECK(worst < 5e-15);
}

TEST_CASE("lane override and dispatch report a name") {
    CHECK(kernels::active_name() != nullptr);
    kernels::force_lane(kernels::Lane::Scalar);
    CHECK(std::string(kernels::active_name()) == "scalar");
    kernels::force_lane(kernels::Lane::Auto);
}
