#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ricci/field.hpp"

namespace ricci {

// ---------------------------------------------------------------------------
// Closed-form conformal factors (pointwise)
// ---------------------------------------------------------------------------

/// u(r) = ln( 2a / (sqrt(c) (a^2 - r^2)) ): the metric e^{2u}|dz|^2 is the
/// complete metric of constant curvature -c on the disc of radius a.
double hyperbolic_factor_at(double r, double a, double c);

/// Big-bang flow: u(t, r) = ln(2/(1-r^2)) + (1/2) ln(2t), curvature -1/(2t).
double bigbang_at(double r, double t);

/// Expanding hyperbolic flow on the disc of radius a:
/// u(t, r) = ln(2a/(a^2-r^2)) + (1/2) ln(2t+1), curvature -1/(2t+1).
/// This is an exact Ricci flow and the solver's primary oracle.
double expanding_at(double r, double a, double t);

// ---------------------------------------------------------------------------
// Field-level factories
// ---------------------------------------------------------------------------

ScalarField hyperbolic_factor(GridPtr grid, double a, double c);
ScalarField bigbang_factor(GridPtr grid, double t); // t > 0, else DomainError
ScalarField expanding_hyperbolic(GridPtr grid, double a, double t); // t >= 0

/// Exhausting disc radius a_k = k/(k+1) and the factor h_k of the complete
/// metric of curvature -k^2 on that disc.
double exhaustion_radius(int k);
ScalarField exhaustion_factor(GridPtr grid, int k);
double exhaustion_factor_at(double r, int k);

/// Gauss curvature K = -e^{-2u} lap(u) at interior nodes. Truncation-ring
/// entries carry the one-sided-stencil value, which is boundary-quality
/// (lower order); verifier checks exclude the ring by default.
ScalarField gauss_curvature(const ScalarField& u);

// ---------------------------------------------------------------------------
// Cutoff and smoothed maximum
// ---------------------------------------------------------------------------

struct CutoffSpec {
    double eta = 0.1; // smoothing width, > 0
};

/// Piecewise cutoff: 0 for s <= -eta, (s+eta)^2/(4 eta) for |s| < eta,
/// s for s >= eta. C^1, convex, 0 <= psi' <= 1, psi(s) >= max(s, 0).
double psi(double s, CutoffSpec spec);
double psi_prime(double s, CutoffSpec spec);

/// Tolerance for the K[u0] <= -1 precondition: the discrete curvature of a
/// smooth metric carries an e^{-2u} O(h^2) error.
double curvature_precondition_tol(double h, double u);

/// Throws PreconditionError naming the worst node if K[u0] > -1 + tol
/// anywhere in the interior.
void require_curvature_at_most_minus_one(const ScalarField& u0);

/// ubar_k = u0 + psi(h_k - u0) on u0's grid (a D_k grid): a C^1 blend that
/// equals h_k where h_k - u0 >= eta and u0 where h_k - u0 <= -eta.
/// Precondition: K[u0] <= -1 (checked numerically).
ScalarField smoothed_max_initial(const ScalarField& u0, int k, CutoffSpec spec);

// ---------------------------------------------------------------------------
// Sample initial metrics (test corpus, all with K <= -1)
// ---------------------------------------------------------------------------

struct SampleMetric {
    ScalarField u;
    bool complete = false;
    std::string descriptor;
    /// Closed form when available; lets other grids evaluate the same
    /// metric without resampling error.
    std::function<double(double r, double theta)> analytic;

    /// Evaluate on another grid: analytic when available, resampled
    /// otherwise.
    ScalarField on_grid(GridPtr grid) const;
};

/// Descriptors:
///   "restricted-hyperbolic:R=2.0"        hyperbolic disc of radius R > 1
///                                        restricted to the unit disc
///                                        (incomplete, K = -1)
///   "scaled-flat-like:R=1.5,amp=0.3"     hyperbolic factor of a larger
///                                        disc plus a smooth negative
///                                        perturbation (K < -1, incomplete)
///   "complete-hyperbolic"                the complete hyperbolic metric
/// Throws ConfigError on an unknown name or bad parameters, and
/// PreconditionError if the generated metric violates K <= -1.
SampleMetric sample_initial(const std::string& descriptor, GridPtr grid);

} // namespace ricci
