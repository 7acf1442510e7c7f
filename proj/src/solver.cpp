#include "ricci/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ricci/errors.hpp"
#include "ricci/kernels.hpp"
#include "ricci/metrics.hpp"
#include "ricci/stencil.hpp"

namespace ricci {

void FlowConfig::validate(double T) const {
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw ConfigError(fmt::format("cfl_safety = {} outside (0, 1]", cfl_safety));
    if (!(dt_max > 0.0))
        throw ConfigError(fmt::format("dt_max = {} must be positive", dt_max));
    if (!(tolerance > 0.0))
        throw ConfigError("solver tolerance must be positive");
    double prev = -1.0;
    for (double t : snapshot_times) {
        if (!(t >= 0.0) || t > T * (1.0 + 1e-12))
            throw ConfigError(fmt::format("snapshot time {} outside [0, {}]", t, T));
        if (t <= prev)
            throw ConfigError("snapshot times must be strictly increasing");
        prev = t;
    }
}

BoundaryPolicy BoundaryPolicy::constant_curvature(double c0) {
    if (!(c0 > 0.0))
        throw ConfigError(fmt::format("boundary curvature magnitude c0 = {} must be positive", c0));
    return BoundaryPolicy(Kind::ConstantCurvatureEvolution, c0, nullptr);
}

BoundaryPolicy BoundaryPolicy::prescribed(std::function<double(double, double, double)> f) {
    if (!f) throw ConfigError("prescribed boundary policy needs a function");
    return BoundaryPolicy(Kind::Prescribed, 0.0, std::move(f));
}

void BoundaryPolicy::ring_values(double t, const DiscGrid& g,
                                 std::span<const double> ring0,
                                 std::span<double> out) const {
    switch (kind_) {
    case Kind::Frozen:
        std::copy(ring0.begin(), ring0.end(), out.begin());
        return;
    case Kind::ConstantCurvatureEvolution: {
        const double offset = 0.5 * std::log(2.0 * c0_ * t + 1.0);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = ring0[j] + offset;
        return;
    }
    case Kind::Prescribed: {
        const double r = g.max_radius();
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = fn_(t, r, g.theta(int(j)));
        return;
    }
    }
}

const GridPtr& Trajectory::grid() const {
    if (snapshots.empty()) throw UsageError("trajectory holds no snapshots");
    return snapshots.front().u.grid();
}

const FlowState& Trajectory::at_time(double t, double tol) const {
    for (const auto& s : snapshots)
        if (std::fabs(s.t - t) <= tol * std::max(1.0, std::fabs(t))) return s;
    throw UsageError(fmt::format("no snapshot at t = {}", t));
}

std::vector<double> Trajectory::times() const {
    std::vector<double> out;
    out.reserve(snapshots.size());
    for (const auto& s : snapshots) out.push_back(s.t);
    return out;
}

ScalarField Trajectory::interpolate(double t) const {
    if (snapshots.size() < 4)
        throw UsageError("time interpolation needs at least 4 snapshots");
    const double t0 = snapshots.front().t, t1 = snapshots.back().t;
    if (t < t0 - 1e-12 || t > t1 * (1.0 + 1e-12) + 1e-12)
        throw DomainError(fmt::format("t = {} outside snapshot range [{}, {}]", t, t0, t1));

    // window of 4 snapshots around t
    std::size_t hi = 0;
    while (hi < snapshots.size() && snapshots[hi].t <= t) ++hi;
    const std::size_t iw =
        std::min(std::max<std::size_t>(hi, 2) - 2, snapshots.size() - 4);

    double w[4], ts[4];
    for (int m = 0; m < 4; ++m) ts[m] = snapshots[iw + m].t;
    for (int m = 0; m < 4; ++m) {
        w[m] = 1.0;
        for (int l = 0; l < 4; ++l)
            if (l != m) w[m] *= (t - ts[l]) / (ts[m] - ts[l]);
    }
    ScalarField out(snapshots.front().u.grid());
    auto vo = out.values();
    for (int m = 0; m < 4; ++m) {
        const auto vm = snapshots[iw + m].u.values();
        for (std::size_t n = 0; n < vo.size(); ++n) vo[n] += w[m] * vm[n];
    }
    return out;
}

ScalarField flow_rhs(const ScalarField& u) {
    const DiscGrid& g = *u.grid();
    const auto& k = kernels::ops();
    ScalarField out(u.grid());
    std::vector<double> lap(g.node_count()), e(g.interior_count()), scratch;
    detail::apply_laplacian(g, u.values(), lap, scratch);
    k.exp_neg2(u.values().data(), e.data(), g.interior_count());
    for (std::size_t n = 0; n < g.interior_count(); ++n)
        out[n] = e[n] * lap[n];
    return out;
}

double cfl_dt(const ScalarField& u, double safety) {
    if (!(safety > 0.0) || safety > 1.0)
        throw ConfigError(fmt::format("cfl safety factor = {} outside (0, 1]", safety));
    const DiscGrid& g = *u.grid();
    const auto& k = kernels::ops();
    const auto uv = u.values();

    // h^2 e^{2u} / 4 is monotone in u, so the per-ring minimum only needs
    // the ring's minimum of u.
    double dt = 0.25 * g.center_h2min() * std::exp(2.0 * uv[0]);
    const auto h2 = g.ring_h2min();
    for (int i = 1; i <= g.n_r() - 2; ++i) {
        const double umin = k.reduce_min(uv.data() + g.index(i, 0), g.ring_count());
        dt = std::min(dt, 0.25 * h2[i - 1] * std::exp(2.0 * umin));
    }
    return safety * dt;
}

namespace {

struct Workspace {
    std::vector<double> lap, e, scratch, half;
    std::vector<double> ring;
    // semi-implicit
    std::vector<double> r0, rj, p, v, s, tv, x, b;
};

void set_ring(std::span<double> u, const DiscGrid& g, std::span<const double> vals) {
    std::copy(vals.begin(), vals.end(), u.begin() + g.ring_offset());
}

// One midpoint (RK2) step of u_t = e^{-2u} lap u with ring data driven by
// the policy at the stage times.
void step_rk2(const DiscGrid& g, std::span<const double> u, double t, double dt,
              const BoundaryPolicy& policy, std::span<const double> ring0,
              std::span<double> out, Workspace& ws, StepDiag* diag) {
    const auto& k = kernels::ops();
    const std::size_t ni = g.interior_count();
    ws.lap.resize(g.node_count());
    ws.e.resize(ni);
    ws.half.resize(g.node_count());
    ws.ring.resize(g.ring_count());

    detail::apply_laplacian(g, u, ws.lap, ws.scratch);
    k.exp_neg2(u.data(), ws.e.data(), ni);
    if (diag) {
        // rhs = -K, so the curvature extrema fall out of stage one
        std::vector<double>& rhs = ws.half; // reuse before it holds u_half
        k.neg_mul(ws.e.data(), ws.lap.data(), rhs.data(), ni);
        diag->K_min = k.reduce_min(rhs.data(), ni);
        diag->K_max = k.reduce_max(rhs.data(), ni);
    }
    k.mul_add(u.data(), ws.e.data(), ws.lap.data(), 0.5 * dt, ws.half.data(), ni);
    std::copy(u.begin() + ni, u.end(), ws.half.begin() + ni);
    policy.ring_values(t + 0.5 * dt, g, ring0, ws.ring);
    set_ring(ws.half, g, ws.ring);

    detail::apply_laplacian(g, ws.half, ws.lap, ws.scratch);
    k.exp_neg2(ws.half.data(), ws.e.data(), ni);
    k.mul_add(u.data(), ws.e.data(), ws.lap.data(), dt, out.data(), ni);
    policy.ring_values(t + dt, g, ring0, ws.ring);
    set_ring(out, g, ws.ring);
}

// (I - dt e^{-2u_n} lap) u+ = u_n with lagged diffusivity and Dirichlet
// ring data at t + dt, solved matrix-free with BiCGStab.
void step_semi_implicit(const DiscGrid& g, std::span<const double> u, double t, double dt,
                        const BoundaryPolicy& policy, std::span<const double> ring0,
                        const FlowConfig& cfg, std::span<double> out, Workspace& ws,
                        StepDiag* diag) {
    const auto& k = kernels::ops();
    const std::size_t ni = g.interior_count();
    const std::size_t nn = g.node_count();
    ws.lap.resize(nn);
    ws.e.resize(ni);
    ws.ring.resize(g.ring_count());
    k.exp_neg2(u.data(), ws.e.data(), ni);

    if (diag) {
        detail::apply_laplacian(g, u, ws.lap, ws.scratch);
        std::vector<double> rhs(ni);
        k.neg_mul(ws.e.data(), ws.lap.data(), rhs.data(), ni);
        diag->K_min = k.reduce_min(rhs.data(), ni);
        diag->K_max = k.reduce_max(rhs.data(), ni);
    }

    // operator on interior vectors (ring entries held at zero)
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        detail::apply_laplacian(g, x, ws.lap, ws.scratch);
        for (std::size_t n = 0; n < ni; ++n)
            y[n] = x[n] - dt * ws.e[n] * ws.lap[n];
    };

    // rhs: u_n plus the ring contribution moved to the right-hand side
    policy.ring_values(t + dt, g, ring0, ws.ring);
    ws.b.assign(nn, 0.0);
    set_ring(ws.b, g, ws.ring);
    detail::apply_laplacian(g, ws.b, ws.lap, ws.scratch);
    ws.b.resize(ni);
    for (std::size_t n = 0; n < ni; ++n) ws.b[n] = u[n] + dt * ws.e[n] * ws.lap[n];

    auto dot = [ni](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t n = 0; n < ni; ++n) s += a[n] * b[n];
        return s;
    };

    // BiCGStab, initial guess u_n
    ws.x.assign(u.begin(), u.begin() + ni);
    ws.x.resize(nn, 0.0);
    std::vector<double>&x = ws.x;
    ws.rj.resize(nn, 0.0);
    ws.v.resize(nn, 0.0);
    ws.p.resize(nn, 0.0);
    ws.s.resize(nn, 0.0);
    ws.tv.resize(nn, 0.0);
    apply(x, ws.rj);
    for (std::size_t n = 0; n < ni; ++n) ws.rj[n] = ws.b[n] - ws.rj[n];
    ws.r0.assign(ws.rj.begin(), ws.rj.end());
    const double bnorm = k.reduce_abs_max(ws.b.data(), ni);
    const double target = cfg.tolerance * (1.0 + bnorm);

    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(ws.v.begin(), ws.v.end(), 0.0);
    std::fill(ws.p.begin(), ws.p.end(), 0.0);
    double resid = k.reduce_abs_max(ws.rj.data(), ni);
    int it = 0;
    while (resid > target) {
        if (++it > cfg.max_linear_iters)
            throw SolverError(fmt::format(
                "semi-implicit solve stalled: residual {} after {} iterations (target {})",
                resid, cfg.max_linear_iters, target));
        const double rho1 = dot(ws.r0, ws.rj);
        if (rho1 == 0.0)
            throw SolverError("semi-implicit solve broke down (rho = 0)");
        const double beta = (rho1 / rho) * (alpha / omega);
        rho = rho1;
        for (std::size_t n = 0; n < ni; ++n)
            ws.p[n] = ws.rj[n] + beta * (ws.p[n] - omega * ws.v[n]);
        apply(ws.p, ws.v);
        alpha = rho / dot(ws.r0, ws.v);
        for (std::size_t n = 0; n < ni; ++n) ws.s[n] = ws.rj[n] - alpha * ws.v[n];
        apply(ws.s, ws.tv);
        const double tt = dot(ws.tv, ws.tv);
        omega = tt == 0.0 ? 0.0 : dot(ws.tv, ws.s) / tt;
        for (std::size_t n = 0; n < ni; ++n) {
            x[n] += alpha * ws.p[n] + omega * ws.s[n];
            ws.rj[n] = ws.s[n] - omega * ws.tv[n];
        }
        resid = k.reduce_abs_max(ws.rj.data(), ni);
        if (omega == 0.0 && resid > target)
            throw SolverError("semi-implicit solve broke down (omega = 0)");
    }

    std::copy(x.begin(), x.begin() + ni, out.begin());
    set_ring(out, g, ws.ring);
}

void step_into(const DiscGrid& g, std::span<const double> u, double t, double dt,
               const BoundaryPolicy& policy, Scheme scheme, const FlowConfig& cfg,
               std::span<const double> ring0, std::span<double> out, Workspace& ws,
               StepDiag* diag) {
    if (diag) {
        diag->t = t;
        diag->dt = dt;
    }
    if (scheme == Scheme::ExplicitRk2)
        step_rk2(g, u, t, dt, policy, ring0, out, ws, diag);
    else
        step_semi_implicit(g, u, t, dt, policy, ring0, cfg, out, ws, diag);
    if (diag) {
        const auto& k = kernels::ops();
        diag->u_min = k.reduce_min(out.data(), g.node_count());
        diag->u_max = k.reduce_max(out.data(), g.node_count());
    }
}

} // namespace

FlowState step(const FlowState& state, double dt, const BoundaryPolicy& policy,
               Scheme scheme, const FlowConfig& cfg, std::span<const double> ring0) {
    if (dt < 0.0) throw ConfigError("step: dt must be nonnegative");
    if (dt == 0.0) return state;
    FlowState next{state.t + dt, ScalarField(state.u.grid())};
    Workspace ws;
    step_into(*state.u.grid(), state.u.values(), state.t, dt, policy, scheme, cfg, ring0,
              next.u.values(), ws, nullptr);
    return next;
}

Trajectory run(const ScalarField& u_init, const BoundaryPolicy& policy, double T,
               const FlowConfig& cfg) {
    if (T < 0.0) throw ConfigError(fmt::format("horizon T = {} must be >= 0", T));
    cfg.validate(T);
    if (!u_init.all_finite()) throw PreconditionError("initial data contains non-finite values");

    const DiscGrid& g = *u_init.grid();
    Trajectory traj;
    traj.config = cfg;
    traj.policy = policy;

    std::vector<double> snap_times = cfg.snapshot_times;
    if (snap_times.empty()) {
        snap_times.push_back(0.0);
        if (T > 0.0) snap_times.push_back(T);
    }

    // events: snapshot times plus the horizon
    struct Event {
        double t;
        bool is_snapshot;
    };
    std::vector<Event> events;
    for (double ts : snap_times) events.push_back({ts, true});
    if (events.empty() || events.back().t < T) events.push_back({T, false});

    const std::vector<double> ring0(u_init.values().begin() + g.ring_offset(),
                                    u_init.values().end());

    ScalarField u = u_init;
    ScalarField u_next(u_init.grid());
    Workspace ws;
    double t = 0.0;
    const double guard = 50.0;

    for (const Event& ev : events) {
        if (ev.t == 0.0) {
            if (ev.is_snapshot) traj.snapshots.push_back({0.0, u});
            continue;
        }
        while (t < ev.t) {
            double dt = ev.t - t;
            bool lands = true;
            if (cfg.dt_max < dt) {
                dt = cfg.dt_max;
                lands = false;
            }
            if (cfg.scheme == Scheme::ExplicitRk2) {
                const double stable = cfl_dt(u, cfg.cfl_safety);
                if (stable < dt) {
                    dt = stable;
                    lands = false;
                }
            }
            if (!(dt > 0.0))
                throw SolverError(fmt::format("time step underflow at t = {}", t));

            StepDiag diag{};
            step_into(g, u.values(), t, dt, policy, cfg.scheme, cfg, ring0,
                      u_next.values(), ws, &diag);
            traj.diagnostics.push_back(diag);
            std::swap(u, u_next);
            t = lands ? ev.t : t + dt;

            const double m = kernels::ops().reduce_abs_max(u.values().data(), u.size());
            if (!(m <= guard)) {
                std::size_t bad = 0;
                for (std::size_t n = 0; n < u.size(); ++n)
                    if (!std::isfinite(u[n]) || std::fabs(u[n]) > guard) {
                        bad = n;
                        break;
                    }
                throw DivergenceError(
                    fmt::format("flow diverged at t = {}: |u| = {} at node (r={}, theta={})",
                                t, u[bad], g.node_r(bad), g.node_theta(bad)),
                    t, bad);
            }
        }
        if (ev.is_snapshot) {
            if (!u.all_finite())
                throw DivergenceError(fmt::format("non-finite values at snapshot t = {}", ev.t),
                                      ev.t, 0);
            traj.snapshots.push_back({ev.t, u});
        }
    }

    return traj;
}

namespace {

// Non-uniform centered first difference of scalar fields at t_m.
ScalarField centered_dt(const ScalarField& fm1, double tm1, const ScalarField& f0,
                        double t0, const ScalarField& fp1, double tp1) {
    const double h1 = t0 - tm1, h2 = tp1 - t0;
    const double wm = -h2 / (h1 * (h1 + h2));
    const double w0 = (h2 - h1) / (h1 * h2);
    const double wp = h1 / (h2 * (h1 + h2));
    ScalarField out(f0.grid());
    auto vo = out.values();
    const auto vm = fm1.values(), v0 = f0.values(), vp = fp1.values();
    for (std::size_t n = 0; n < vo.size(); ++n)
        vo[n] = wm * vm[n] + w0 * v0[n] + wp * vp[n];
    return out;
}

} // namespace

std::vector<double> curvature_evolution_residual(const Trajectory& traj) {
    if (traj.snapshots.size() < 3)
        throw UsageError("curvature evolution residual needs at least 3 snapshots");
    const DiscGrid& g = *traj.grid();
    const auto& kr = kernels::ops();

    std::vector<ScalarField> K;
    K.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) K.push_back(gauss_curvature(s.u));

    std::vector<double> out;
    std::vector<double> lap(g.node_count()), e(g.interior_count()), scratch;
    for (std::size_t m = 1; m + 1 < traj.snapshots.size(); ++m) {
        const auto& s = traj.snapshots;
        ScalarField dK = centered_dt(K[m - 1], s[m - 1].t, K[m], s[m].t, K[m + 1], s[m + 1].t);
        detail::apply_laplacian(g, K[m].values(), lap, scratch);
        kr.exp_neg2(s[m].u.values().data(), e.data(), g.interior_count());
        double worst = 0.0;
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            const double res = dK[n] - e[n] * lap[n] - 2.0 * K[m][n] * K[m][n];
            worst = std::max(worst, std::fabs(res));
        }
        out.push_back(worst);
    }
    return out;
}

std::vector<double> pde_residual(const Trajectory& traj) {
    if (traj.snapshots.size() < 3)
        throw UsageError("pde residual needs at least 3 snapshots");
    const DiscGrid& g = *traj.grid();
    const auto& kr = kernels::ops();

    std::vector<double> out;
    std::vector<double> lap(g.node_count()), e(g.interior_count()), scratch;
    for (std::size_t m = 1; m + 1 < traj.snapshots.size(); ++m) {
        const auto& s = traj.snapshots;
        ScalarField du = centered_dt(s[m - 1].u, s[m - 1].t, s[m].u, s[m].t,
                                     s[m + 1].u, s[m + 1].t);
        detail::apply_laplacian(g, s[m].u.values(), lap, scratch);
        kr.exp_neg2(s[m].u.values().data(), e.data(), g.interior_count());
        double worst = 0.0;
        for (std::size_t n = 0; n < g.interior_count(); ++n)
            worst = std::max(worst, std::fabs(du[n] - e[n] * lap[n]));
        out.push_back(worst);
    }
    return out;
}

} // namespace ricci
