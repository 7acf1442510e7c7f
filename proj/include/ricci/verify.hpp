#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "ricci/construction.hpp"
#include "ricci/report.hpp"
#include "ricci/solver.hpp"

namespace ricci {

/// Measured admissibility data of a trajectory: global upper curvature
/// bound C and, per requested epsilon, the lower bound C_eps valid on
/// [eps, T].
struct AdmissibilityParams {
    double C = 0.0;
    std::vector<std::pair<double, double>> C_eps;
};

/// Measures C = max K over all snapshots and C_eps = -min K over
/// snapshots with t >= eps. Completeness of the continuum flow is not
/// decidable from samples; the report carries the proxy instead: values
/// near the truncation ring dominate the big-bang factor at every t > 0.
std::pair<AdmissibilityParams, VerifierReport>
admissibility_report(const Trajectory& traj, std::span<const double> eps_list,
                     CheckDomain domain = {});

/// The four a-priori barriers for an admissible flow out of K[u0] <= -1:
///   [0] K >= -1/(2t)                   (t > 0)
///   [1] u >= ln 2/(1-r^2) + ln(2t)/2   (t > 0)
///   [2] u <= ln 2/(1-r^2) + ln(2t+1)/2 (t >= 0)
///   [3] u >= u0 - C t                  (t >= 0), C the measured upper bound
std::array<VerifierReport, 4> barrier_report(const Trajectory& traj, const ScalarField& u0,
                                             double C_upper, CheckDomain domain = {});

/// -1/(2t) <= K <= -1/(2t+1) at every snapshot t > 0.
VerifierReport curvature_sandwich(const Trajectory& traj, CheckDomain domain = {});

/// Schwarz-lemma oracle with f = id: if g1 is complete with K[g1] >= -a1
/// and K[g2] <= -a2 < 0, then u2 <= u1 + ln(a1/a2)/2. Hypotheses are
/// verified numerically first; their failure raises HypothesisError
/// (distinct from a failed conclusion).
VerifierReport schwarz_check(const ScalarField& u1, double a1, const ScalarField& u2,
                             double a2, bool g1_complete, CheckDomain domain = {});

/// Order preservation of the flow: if v(0) >= u(0) and v's ring data
/// dominates u's, then v >= u at all later snapshots. Same grid and
/// snapshot times required.
VerifierReport direct_comparison(const Trajectory& trajU, const Trajectory& trajV,
                                 CheckDomain domain = {});

/// Geometric comparison: with (i) |K[g2]| <= C, (ii) K[g1] <= C,
/// (iii) Q = u1 - u2 <= C, g2 complete (ring-dominance proxy) and
/// Q(0) <= 0, conclude Q <= 0 throughout. Hypothesis failures raise
/// HypothesisError naming the failed item.
VerifierReport geometric_comparison(const Trajectory& traj1, const Trajectory& traj2,
                                    double C, CheckDomain domain = {});

/// v~(t, x) = v(e^{-2C delta}(t + delta), x) + C delta on [0, T - delta]:
/// again a flow, with v~(0) >= u0. The transform runs on the
/// trajectory's own clock (times measured from its first snapshot), so it
/// applies to windows that start later than 0 as well.
struct TimeShiftResult {
    Trajectory traj;
    VerifierReport pde_report;         //< residual of the flow equation vs 0
    VerifierReport lower_bound_report; //< v~(start) >= u0
};
TimeShiftResult time_shift_transform(const Trajectory& traj, double C, double delta,
                                     CheckDomain domain = {});

/// v_eps(t, x) = v(ln(eps t + 1)/eps, x) + ln(eps t + 1)/2: a strict
/// supersolution with analytic residual eps/(2(eps t + 1)). The report
/// compares the measured discrete residual against the analytic value.
/// As with the time shift, t is the trajectory's own clock.
struct SupersolutionResult {
    Trajectory traj;
    VerifierReport report;
    std::vector<double> t_mid;     //< triple midpoints
    std::vector<double> measured;  //< sup |(d/dt - e^{-2v} lap) v_eps|
    std::vector<double> analytic;  //< eps/(2 (eps t + 1))
};
SupersolutionResult supersolution_transform(const Trajectory& traj, double eps,
                                            CheckDomain domain = {});

/// Empirical uniqueness: two independent construction paths (different
/// eta, k schedule or grid family) must produce the same limit. Plans
/// must share snapshot times.
VerifierReport uniqueness_experiment(const SampleMetric& u0, const ExhaustionPlan& planA,
                                     const ExhaustionPlan& planB);

} // namespace ricci
