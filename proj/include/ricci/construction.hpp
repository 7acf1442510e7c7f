#pragma once

#include <vector>

#include "ricci/metrics.hpp"
#include "ricci/report.hpp"
#include "ricci/solver.hpp"

namespace ricci {

/// Exhaustion schedule: indices k with discs of radius k/(k+1), per-k grid
/// family, cutoff width, horizon and stopping tolerance.
struct ExhaustionPlan {
    std::vector<int> k_list = {2, 4, 8, 16, 24};
    double eta = 0.1;
    double T = 1.0;
    std::vector<double> snapshot_times = {0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
    double limit_tol = 5e-3;

    // per-k grid family; n_r grows with k so the rim resolution keeps up
    // with the shrinking collar of D_k
    int base_n_r = 96;
    double n_r_per_k = 6.0;
    int n_theta = 1;
    double clustering = 2.0;
    double collar = 0.02;

    // reference grid for the limit; 0 picks the density of the D_kmax grid
    // restricted to reference_radius
    double reference_radius = 0.8;
    int reference_n_r = 0;

    FlowConfig flow;
    bool parallel = true;

    int n_r_for(int k) const;
    GridPtr grid_for(int k) const;
    GridPtr reference_grid() const;
    void validate() const;
};

/// Per consecutive pair (k_lo, k_hi): sup |u_hi - u_lo| and the worst
/// signed violation of u_hi <= u_lo, per snapshot, on the reference grid.
struct PairReport {
    int k_lo = 0, k_hi = 0;
    std::vector<double> sup_diff;
    std::vector<double> violation;
};

struct ConstructionResult {
    ExhaustionPlan plan;
    std::vector<Trajectory> per_k; //< native D_k grids
    Trajectory limit;              //< on the reference grid
    std::vector<PairReport> pairs;
    std::vector<char> converged_per_snapshot;
    bool all_converged = false;
    GridPtr ref_grid;
};

/// One approximating flow: ubar_k = u0 + psi(h_k - u0) on the D_k grid,
/// integrated with the constant-curvature ring policy (c0 = k^2, matching
/// the h_k branch the initial data follows near the rim).
Trajectory approximate_flow(const SampleMetric& u0, int k, double eta, double T,
                            const ExhaustionPlan& plan);

/// The full exhaustion: runs every k, resamples to the reference grid,
/// verifies that the family decreases in k (up to discretization
/// tolerance) and that consecutive members agree to limit_tol at every
/// snapshot. Throws ConstructionError on a monotonicity violation and
/// ConvergenceError (with history) if the family has not settled.
ConstructionResult construct_limit(const SampleMetric& u0, const ExhaustionPlan& plan);

/// Worst violation of candidate <= limit over matching snapshots
/// (the limit dominates every flow out of the same initial data). The
/// candidate is resampled onto the limit's grid when needed.
VerifierReport maximality_check(const Trajectory& candidate, const Trajectory& limit,
                                CheckDomain domain = {});

} // namespace ricci
