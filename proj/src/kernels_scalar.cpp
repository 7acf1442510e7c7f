#include <cmath>
#include <cstddef>

#include "ricci/kernels.hpp"

// Scalar reference kernels. The SIMD variants must match these
// bit-for-bit on the pure-arithmetic kernels, so keep the operation
// order here in sync with kernels_avx2.cpp (sums of products, no fma).

namespace ricci::kernels {
namespace {

void lap_ring_scalar(const double* below, const double* self, const double* above,
                     double* out, std::size_t n,
                     double ca, double cb, double cc, double cang) {
    if (n == 1) {
        out[0] = ca * below[0] + cb * self[0] + cc * above[0];
        return;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jl = (j == 0) ? n - 1 : j - 1;
        const std::size_t jr = (j == n - 1) ? 0 : j + 1;
        out[j] = ca * below[j] + cb * self[j] + cc * above[j] +
                 cang * (self[jl] + self[jr]);
    }
}

void lap_line_scalar(const double* f, double* out, std::size_t n,
                     const double* ca, const double* cb, const double* cc) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = ca[i] * f[i - 1] + cb[i] * f[i] + cc[i] * f[i + 1];
}

void exp_neg2_scalar(const double* u, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(-2.0 * u[i]);
}

void mul_add_scalar(const double* base, const double* e, const double* lap,
                    double s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = base[i] + s * (e[i] * lap[i]);
}

void neg_mul_scalar(const double* e, const double* lap, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = -(e[i] * lap[i]);
}

double reduce_min_scalar(const double* x, std::size_t n) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i)
        if (x[i] < m) m = x[i];
    return m;
}

double reduce_max_scalar(const double* x, std::size_t n) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

double reduce_abs_max_scalar(const double* x, std::size_t n) {
    double m = std::fabs(x[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        "scalar",
        lap_ring_scalar,
        lap_line_scalar,
        exp_neg2_scalar,
        mul_add_scalar,
        neg_mul_scalar,
        reduce_min_scalar,
        reduce_max_scalar,
        reduce_abs_max_scalar,
    };
    return table;
}

} // namespace ricci::kernels
