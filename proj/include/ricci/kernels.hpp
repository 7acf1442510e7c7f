#pragma once

#include <cstddef>

namespace ricci::kernels {

/// Inner-loop kernel table. One scalar reference implementation plus SIMD
/// variants with identical semantics; the active table is chosen once at
/// startup from CPU capabilities (override with RICCI_DISC_KERNELS=scalar
/// or =avx2).
///
/// Arithmetic kernels (lap_*, mul_add, neg_mul, reductions) perform the
/// same operations in the same per-node order in every variant and must
/// agree bit-for-bit with the scalar reference. exp_neg2 uses a vector
/// exp in the SIMD variants and agrees to a few ulp.
struct Ops {
    const char* name;

    /// Ring row with constant coefficients, periodic in j:
    ///   out[j] = ca*below[j] + cb*self[j] + cc*above[j]
    ///          + cang*(self[j-1] + self[j+1])
    void (*lap_ring)(const double* below, const double* self, const double* above,
                     double* out, std::size_t n,
                     double ca, double cb, double cc, double cang);

    /// Radial line with per-node coefficients (no wrap):
    ///   out[i] = ca[i]*f[i-1] + cb[i]*f[i] + cc[i]*f[i+1],  i = 0..n-1
    /// where f points at the first node being updated (f[-1] must be valid).
    void (*lap_line)(const double* f, double* out, std::size_t n,
                     const double* ca, const double* cb, const double* cc);

    /// out[i] = exp(-2 u[i])
    void (*exp_neg2)(const double* u, double* out, std::size_t n);

    /// out[i] = base[i] + s * (e[i] * lap[i])
    void (*mul_add)(const double* base, const double* e, const double* lap,
                    double s, double* out, std::size_t n);

    /// out[i] = -(e[i] * lap[i])
    void (*neg_mul)(const double* e, const double* lap, double* out, std::size_t n);

    double (*reduce_min)(const double* x, std::size_t n);
    double (*reduce_max)(const double* x, std::size_t n);
    double (*reduce_abs_max)(const double* x, std::size_t n);
};

enum class Lane { Auto, Scalar, Avx2 };

/// Active kernel table (selected on first call).
const Ops& ops();

/// Scalar reference table, always available.
const Ops& scalar_ops();

/// AVX2 table, or nullptr when not compiled in / not supported by the CPU.
const Ops* avx2_ops();

/// Force a lane (tests); throws ConfigError if the lane is unavailable.
void force_lane(Lane lane);

const char* active_name();

} // namespace ricci::kernels
