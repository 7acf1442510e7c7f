// AVX2 kernel variants. Arithmetic kernels replicate the scalar reference
// operation-for-operation (mul/add, no fma) and match it bit-for-bit.
// exp_neg2 uses a Cephes-style vector exp, accurate to ~2 ulp; its row
// tail uses a scalar replica of the same algorithm so a value's result
// does not depend on its position in the row.

#ifdef __AVX2__

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "ricci/kernels.hpp"

namespace ricci::kernels {
namespace {

constexpr double kExpC1 = 6.93145751953125e-1;
constexpr double kExpC2 = 1.42860682030941723212e-6;
constexpr double kLog2e = 1.4426950408889634073599;
constexpr double kExpP0 = 1.26177193074810590878e-4;
constexpr double kExpP1 = 3.02994407707441961300e-2;
constexpr double kExpP2 = 9.99999999999999999910e-1;
constexpr double kExpQ0 = 3.00198505138664455042e-6;
constexpr double kExpQ1 = 2.52448340349684104192e-3;
constexpr double kExpQ2 = 2.27265548208155028766e-1;
constexpr double kExpQ3 = 2.00000000000000000005e0;
constexpr double kExpClamp = 708.0;

inline double exp_cephes(double x) {
    x = std::fmin(std::fmax(x, -kExpClamp), kExpClamp);
    const double nd = std::nearbyint(x * kLog2e);
    x -= nd * kExpC1;
    x -= nd * kExpC2;
    const double xx = x * x;
    double p = ((kExpP0 * xx + kExpP1) * xx + kExpP2) * x;
    double q = ((kExpQ0 * xx + kExpQ1) * xx + kExpQ2) * xx + kExpQ3;
    double e = 1.0 + 2.0 * (p / (q - p));
    return e * std::ldexp(1.0, int(nd));
}

inline __m256d exp_pd(__m256d x) {
    x = _mm256_min_pd(x, _mm256_set1_pd(kExpClamp));
    x = _mm256_max_pd(x, _mm256_set1_pd(-kExpClamp));

    const __m256d n =
        _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2e)),
                        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(kExpC1)));
    x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(kExpC2)));

    const __m256d xx = _mm256_mul_pd(x, x);
    __m256d p = _mm256_set1_pd(kExpP0);
    p = _mm256_add_pd(_mm256_mul_pd(p, xx), _mm256_set1_pd(kExpP1));
    p = _mm256_add_pd(_mm256_mul_pd(p, xx), _mm256_set1_pd(kExpP2));
    p = _mm256_mul_pd(p, x);
    __m256d q = _mm256_set1_pd(kExpQ0);
    q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(kExpQ1));
    q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(kExpQ2));
    q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(kExpQ3));
    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_add_pd(e, e));

    // scale by 2^n through the exponent bits
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i bits =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
}

void lap_ring_avx2(const double* below, const double* self, const double* above,
                   double* out, std::size_t n,
                   double ca, double cb, double cc, double cang) {
    if (n == 1) {
        out[0] = ca * below[0] + cb * self[0] + cc * above[0];
        return;
    }
    auto scalar_at = [&](std::size_t j) {
        const std::size_t jl = (j == 0) ? n - 1 : j - 1;
        const std::size_t jr = (j == n - 1) ? 0 : j + 1;
        out[j] = ca * below[j] + cb * self[j] + cc * above[j] +
                 cang * (self[jl] + self[jr]);
    };
    scalar_at(0);
    const __m256d vca = _mm256_set1_pd(ca);
    const __m256d vcb = _mm256_set1_pd(cb);
    const __m256d vcc = _mm256_set1_pd(cc);
    const __m256d vcg = _mm256_set1_pd(cang);
    std::size_t j = 1;
    for (; j + 4 <= n - 1; j += 4) {
        const __m256d b = _mm256_loadu_pd(below + j);
        const __m256d s = _mm256_loadu_pd(self + j);
        const __m256d a = _mm256_loadu_pd(above + j);
        const __m256d sl = _mm256_loadu_pd(self + j - 1);
        const __m256d sr = _mm256_loadu_pd(self + j + 1);
        __m256d acc = _mm256_add_pd(_mm256_mul_pd(vca, b), _mm256_mul_pd(vcb, s));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(vcc, a));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(vcg, _mm256_add_pd(sl, sr)));
        _mm256_storeu_pd(out + j, acc);
    }
    for (; j < n; ++j) scalar_at(j);
}

void lap_line_avx2(const double* f, double* out, std::size_t n,
                   const double* ca, const double* cb, const double* cc) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d fm = _mm256_loadu_pd(f + i - 1);
        const __m256d f0 = _mm256_loadu_pd(f + i);
        const __m256d fp = _mm256_loadu_pd(f + i + 1);
        __m256d acc = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(ca + i), fm),
                                    _mm256_mul_pd(_mm256_loadu_pd(cb + i), f0));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(cc + i), fp));
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i)
        out[i] = ca[i] * f[i - 1] + cb[i] * f[i] + cc[i] * f[i + 1];
}

void exp_neg2_avx2(const double* u, double* out, std::size_t n) {
    const __m256d m2 = _mm256_set1_pd(-2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, exp_pd(_mm256_mul_pd(m2, _mm256_loadu_pd(u + i))));
    for (; i < n; ++i)
        out[i] = exp_cephes(-2.0 * u[i]);
}

void mul_add_avx2(const double* base, const double* e, const double* lap,
                  double s, double* out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(e + i), _mm256_loadu_pd(lap + i));
        _mm256_storeu_pd(out + i,
                         _mm256_add_pd(_mm256_loadu_pd(base + i), _mm256_mul_pd(vs, prod)));
    }
    for (; i < n; ++i)
        out[i] = base[i] + s * (e[i] * lap[i]);
}

void neg_mul_avx2(const double* e, const double* lap, double* out, std::size_t n) {
    const __m256d signbit = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(e + i), _mm256_loadu_pd(lap + i));
        _mm256_storeu_pd(out + i, _mm256_xor_pd(prod, signbit));
    }
    for (; i < n; ++i)
        out[i] = -(e[i] * lap[i]);
}

inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_min_pd(lo, hi);
    return std::fmin(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return std::fmax(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

double reduce_min_avx2(const double* x, std::size_t n) {
    if (n < 8) {
        double m = x[0];
        for (std::size_t i = 1; i < n; ++i)
            if (x[i] < m) m = x[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(x);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    double m = hmin(acc);
    for (; i < n; ++i)
        if (x[i] < m) m = x[i];
    return m;
}

double reduce_max_avx2(const double* x, std::size_t n) {
    if (n < 8) {
        double m = x[0];
        for (std::size_t i = 1; i < n; ++i)
            if (x[i] > m) m = x[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(x);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    double m = hmax(acc);
    for (; i < n; ++i)
        if (x[i] > m) m = x[i];
    return m;
}

double reduce_abs_max_avx2(const double* x, std::size_t n) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    if (n < 8) {
        double m = std::fabs(x[0]);
        for (std::size_t i = 1; i < n; ++i) {
            const double a = std::fabs(x[i]);
            if (a > m) m = a;
        }
        return m;
    }
    __m256d acc = _mm256_and_pd(_mm256_loadu_pd(x), absmask);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), absmask));
    double m = hmax(acc);
    for (; i < n; ++i) {
        const double a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

} // namespace

namespace detail {

const Ops* avx2_table() {
    static const Ops table = {
        "avx2",
        lap_ring_avx2,
        lap_line_avx2,
        exp_neg2_avx2,
        mul_add_avx2,
        neg_mul_avx2,
        reduce_min_avx2,
        reduce_max_avx2,
        reduce_abs_max_avx2,
    };
    return &table;
}

} // namespace detail
} // namespace ricci::kernels

#endif // __AVX2__
