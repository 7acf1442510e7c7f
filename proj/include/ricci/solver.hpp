#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ricci/field.hpp"

namespace ricci {

enum class Scheme { ExplicitRk2, SemiImplicit };

/// Time-integration configuration for one flow run.
struct FlowConfig {
    Scheme scheme = Scheme::ExplicitRk2;
    double cfl_safety = 0.9;                                 // in (0, 1]
    double dt_max = std::numeric_limits<double>::infinity(); // step cap
    std::vector<double> snapshot_times;                      // strictly increasing, >= 0
    double tolerance = 1e-10;                                // semi-implicit linear solve
    int max_linear_iters = 400;

    void validate(double T) const; // throws ConfigError
};

/// Values on the truncation ring for all t >= 0, anchored at the ring
/// values of the initial data.
///
/// ConstantCurvatureEvolution adds the offset (1/2) ln(2 c0 t + 1), the
/// exact evolution of a constant-curvature factor with initial curvature
/// -c0; with initial data that equals a hyperbolic factor near the rim
/// this reproduces the expanding-hyperbolic flow there exactly.
class BoundaryPolicy {
public:
    enum class Kind { Frozen, ConstantCurvatureEvolution, Prescribed };

    static BoundaryPolicy frozen() { return BoundaryPolicy(Kind::Frozen, 0.0, nullptr); }
    static BoundaryPolicy constant_curvature(double c0);
    static BoundaryPolicy prescribed(std::function<double(double t, double r, double theta)> f);

    Kind kind() const { return kind_; }
    double c0() const { return c0_; }

    /// Ring row at time t. `ring0` is the initial ring row of the run.
    void ring_values(double t, const DiscGrid& g, std::span<const double> ring0,
                     std::span<double> out) const;

private:
    BoundaryPolicy(Kind k, double c0, std::function<double(double, double, double)> f)
        : kind_(k), c0_(c0), fn_(std::move(f)) {}
    Kind kind_;
    double c0_;
    std::function<double(double, double, double)> fn_;
};

struct FlowState {
    double t = 0.0;
    ScalarField u;
};

struct StepDiag {
    double t, dt, u_min, u_max, K_min, K_max;
};

/// One recorded flow: ordered snapshots on a single grid plus per-step
/// diagnostics.
struct Trajectory {
    FlowConfig config;
    BoundaryPolicy policy = BoundaryPolicy::frozen();
    std::vector<FlowState> snapshots;
    std::vector<StepDiag> diagnostics;
    std::map<std::string, std::string> metadata;

    const GridPtr& grid() const;
    double t_front() const { return snapshots.front().t; }
    double t_back() const { return snapshots.back().t; }

    /// Snapshot with time within tol of t; UsageError if absent.
    const FlowState& at_time(double t, double tol = 1e-9) const;

    /// Cubic interpolation in time (needs >= 4 snapshots covering t).
    ScalarField interpolate(double t) const;

    /// Snapshot times as a vector (for persistence and matching).
    std::vector<double> times() const;
};

/// e^{-2u} lap(u) at interior nodes, zero on the truncation ring.
ScalarField flow_rhs(const ScalarField& u);

/// Explicit stability bound: safety * min over interior nodes of
/// h_loc^2 / (4 e^{-2u}), h_loc the smallest incident spacing.
double cfl_dt(const ScalarField& u, double safety);

/// One step from `state`. dt == 0 returns the state unchanged. `ring0`
/// anchors the boundary policy (initial ring row of the run).
FlowState step(const FlowState& state, double dt, const BoundaryPolicy& policy,
               Scheme scheme, const FlowConfig& cfg, std::span<const double> ring0);

/// Integrate from t = 0 to T with adaptive dt = min(cfl, dt_max, distance
/// to the next snapshot). Snapshot times are landed on exactly, never
/// interpolated. Throws DivergenceError when |u| exceeds 50 or values go
/// non-finite.
Trajectory run(const ScalarField& u_init, const BoundaryPolicy& policy, double T,
               const FlowConfig& cfg);

/// Sup-norm of d/dt K - e^{-2u} lap(K) - 2 K^2 over interior nodes, one
/// value per interior snapshot triple (centered differencing in time).
std::vector<double> curvature_evolution_residual(const Trajectory& traj);

/// Sup-norm of d/dt u - e^{-2u} lap(u) per interior snapshot triple.
std::vector<double> pde_residual(const Trajectory& traj);

} // namespace ricci
