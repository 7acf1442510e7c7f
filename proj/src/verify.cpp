#include "ricci/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <optional>

#include "ricci/errors.hpp"
#include "ricci/kernels.hpp"
#include "ricci/metrics.hpp"
#include "ricci/resample.hpp"
#include "ricci/stencil.hpp"

namespace ricci {
namespace {

double ten_h2_for(const DiscGrid& g, double rlim) {
    const double h = g.max_spacing_within(rlim);
    return 10.0 * h * h;
}

std::string domain_string(double rlim) { return fmt::format("r <= {:.6g}", rlim); }

void require_matching(const Trajectory& a, const Trajectory& b, const char* who) {
    if (!a.grid()->same_layout(*b.grid()))
        throw UsageError(fmt::format("{}: trajectories live on different grids", who));
    if (a.snapshots.size() != b.snapshots.size())
        throw UsageError(fmt::format("{}: snapshot counts differ", who));
    for (std::size_t m = 0; m < a.snapshots.size(); ++m)
        if (std::fabs(a.snapshots[m].t - b.snapshots[m].t) >
            1e-9 * std::max(1.0, std::fabs(a.snapshots[m].t)))
            throw UsageError(fmt::format("{}: snapshot times differ at index {}", who, m));
}

// big-bang dominance near the truncation ring: the numerical surrogate
// for completeness of the continuum metric
VerifierReport ring_dominance_proxy(const Trajectory& traj, const std::string& name) {
    const DiscGrid& g = *traj.grid();
    const double rlim = g.max_radius();
    MarginAccum acc(ten_h2_for(g, rlim));
    const double r_inner = 0.9 * g.max_radius();
    for (const auto& s : traj.snapshots) {
        if (!(s.t > 0.0)) continue;
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            const double r = g.node_r(n);
            if (r < r_inner) continue;
            acc.add(s.u[n] - bigbang_at(r, s.t), s.u[n], s.t, r, g.node_theta(n));
        }
    }
    return acc.finish(name, fmt::format("r >= {:.6g} (ring neighborhood)", r_inner));
}

} // namespace

std::pair<AdmissibilityParams, VerifierReport>
admissibility_report(const Trajectory& traj, std::span<const double> eps_list,
                     CheckDomain domain) {
    if (traj.snapshots.empty()) throw UsageError("admissibility_report: empty trajectory");
    bool has_positive = false;
    for (const auto& s : traj.snapshots) has_positive |= s.t > 0.0;
    if (!has_positive)
        throw UsageError("admissibility_report: need at least one snapshot with t > 0");

    const DiscGrid& g = *traj.grid();
    const double rlim = domain.limit_radius(g.max_radius());

    AdmissibilityParams params;
    params.C = -std::numeric_limits<double>::infinity();
    std::vector<double> min_K_per_snapshot(traj.snapshots.size());
    for (std::size_t m = 0; m < traj.snapshots.size(); ++m) {
        const ScalarField K = gauss_curvature(traj.snapshots[m].u);
        double kmax = -std::numeric_limits<double>::infinity();
        double kmin = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            if (g.node_r(n) > rlim) continue;
            kmax = std::max(kmax, K[n]);
            kmin = std::min(kmin, K[n]);
        }
        params.C = std::max(params.C, kmax);
        min_K_per_snapshot[m] = kmin;
    }
    for (double eps : eps_list) {
        double kmin = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < traj.snapshots.size(); ++m)
            if (traj.snapshots[m].t >= eps)
                kmin = std::min(kmin, min_K_per_snapshot[m]);
        params.C_eps.emplace_back(eps, -kmin);
    }

    return {params, ring_dominance_proxy(traj, "completeness-proxy")};
}

std::array<VerifierReport, 4> barrier_report(const Trajectory& traj, const ScalarField& u0,
                                             double C_upper, CheckDomain domain) {
    if (traj.snapshots.empty()) throw UsageError("barrier_report: empty trajectory");
    const DiscGrid& g = *traj.grid();
    const ScalarField u0g = u0.grid()->same_layout(g) ? u0 : resample(u0, traj.grid());
    const double rlim = domain.limit_radius(g.max_radius());
    const double ten_h2 = ten_h2_for(g, rlim);

    MarginAccum a(ten_h2), b(ten_h2), c(ten_h2), d(ten_h2);
    for (const auto& s : traj.snapshots) {
        const double t = s.t;
        const bool positive = t > 0.0;
        std::optional<ScalarField> K;
        if (positive) K = gauss_curvature(s.u);
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            const double r = g.node_r(n);
            if (r > rlim) continue;
            const double th = g.node_theta(n);
            if (positive) {
                a.add((*K)[n] + 1.0 / (2.0 * t), (*K)[n], t, r, th);
                b.add(s.u[n] - bigbang_at(r, t), s.u[n], t, r, th);
            }
            c.add(expanding_at(r, 1.0, t) - s.u[n], s.u[n], t, r, th);
            d.add(s.u[n] - (u0g[n] - C_upper * t), s.u[n], t, r, th);
        }
    }
    const std::string dom = domain_string(rlim);
    return {a.finish("barrier-A-curvature-lower", dom),
            b.finish("barrier-B-bigbang-below", dom),
            c.finish("barrier-C-expanding-above", dom),
            d.finish("barrier-D-initial-drop", dom)};
}

VerifierReport curvature_sandwich(const Trajectory& traj, CheckDomain domain) {
    if (traj.snapshots.empty()) throw UsageError("curvature_sandwich: empty trajectory");
    const DiscGrid& g = *traj.grid();
    const double rlim = domain.limit_radius(g.max_radius());
    MarginAccum acc(ten_h2_for(g, rlim));
    for (const auto& s : traj.snapshots) {
        if (!(s.t > 0.0)) continue;
        const ScalarField K = gauss_curvature(s.u);
        const double lower = -1.0 / (2.0 * s.t);
        const double upper = -1.0 / (2.0 * s.t + 1.0);
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            const double r = g.node_r(n);
            if (r > rlim) continue;
            acc.add(K[n] - lower, K[n], s.t, r, g.node_theta(n));
            acc.add(upper - K[n], K[n], s.t, r, g.node_theta(n));
        }
    }
    return acc.finish("curvature-sandwich", domain_string(rlim));
}

VerifierReport schwarz_check(const ScalarField& u1, double a1, const ScalarField& u2,
                             double a2, bool g1_complete, CheckDomain domain) {
    if (!u1.grid()->same_layout(*u2.grid()))
        throw UsageError("schwarz_check: metrics live on different grids");
    if (!(a2 > 0.0)) throw ConfigError("schwarz_check: a2 must be positive");
    if (a1 < 0.0) throw ConfigError("schwarz_check: a1 must be nonnegative");
    if (!g1_complete)
        throw HypothesisError("schwarz_check: g1 must be complete (caller assertion)");

    const DiscGrid& g = *u1.grid();
    const double rlim = domain.limit_radius(g.max_radius());
    const double ten_h2 = ten_h2_for(g, rlim);

    const ScalarField K1 = gauss_curvature(u1);
    const ScalarField K2 = gauss_curvature(u2);
    MarginAccum h1(ten_h2), h2(ten_h2);
    for (std::size_t n = 0; n < g.interior_count(); ++n) {
        const double r = g.node_r(n);
        if (r > rlim) continue;
        h1.add(K1[n] + a1, K1[n], 0.0, r, g.node_theta(n));
        h2.add(-a2 - K2[n], K2[n], 0.0, r, g.node_theta(n));
    }
    const VerifierReport r1 = h1.finish("hypothesis K[g1] >= -a1", domain_string(rlim));
    if (!r1.pass)
        throw HypothesisError(fmt::format(
            "schwarz_check: K[g1] >= -{} fails by {} at (r={}, theta={})", a1,
            -r1.margin, r1.where.r, r1.where.theta));
    const VerifierReport r2 = h2.finish("hypothesis K[g2] <= -a2", domain_string(rlim));
    if (!r2.pass)
        throw HypothesisError(fmt::format(
            "schwarz_check: K[g2] <= -{} fails by {} at (r={}, theta={})", a2,
            -r2.margin, r2.where.r, r2.where.theta));

    const double shift = 0.5 * std::log(a1 / a2);
    MarginAccum acc(ten_h2);
    for (std::size_t n = 0; n < g.interior_count(); ++n) {
        const double r = g.node_r(n);
        if (r > rlim) continue;
        acc.add(u1[n] + shift - u2[n], u2[n], 0.0, r, g.node_theta(n));
    }
    return acc.finish("schwarz", domain_string(rlim));
}

VerifierReport direct_comparison(const Trajectory& trajU, const Trajectory& trajV,
                                 CheckDomain domain) {
    require_matching(trajU, trajV, "direct_comparison");
    const DiscGrid& g = *trajU.grid();

    // v's ring data must dominate u's: the finite-domain surrogate of
    // "v -> infinity at the boundary"
    for (std::size_t m = 0; m < trajU.snapshots.size(); ++m) {
        const auto& u = trajU.snapshots[m].u;
        const auto& v = trajV.snapshots[m].u;
        for (std::size_t n = g.ring_offset(); n < g.node_count(); ++n)
            if (v[n] - u[n] < -1e-12 * (1.0 + std::fabs(u[n])))
                throw PreconditionError(fmt::format(
                    "direct_comparison: ring data of v drops below u at t = {} "
                    "(v - u = {} at theta = {})",
                    trajU.snapshots[m].t, v[n] - u[n], g.node_theta(n)));
    }
    {
        const auto& u = trajU.snapshots.front().u;
        const auto& v = trajV.snapshots.front().u;
        for (std::size_t n = 0; n < g.node_count(); ++n)
            if (v[n] - u[n] < -1e-12 * (1.0 + std::fabs(u[n])))
                throw PreconditionError(fmt::format(
                    "direct_comparison: initial ordering v(0) >= u(0) fails at "
                    "(r={}, theta={}) by {}",
                    g.node_r(n), g.node_theta(n), u[n] - v[n]));
    }

    const double rlim = domain.limit_radius(g.max_radius());
    // order preservation of the discrete scheme holds up to a truncation
    // wiggle; allow a small absolute slack on top of the h^2 tolerance
    MarginAccum acc(ten_h2_for(g, rlim));
    for (std::size_t m = 1; m < trajU.snapshots.size(); ++m) {
        const auto& u = trajU.snapshots[m].u;
        const auto& v = trajV.snapshots[m].u;
        const double t = trajU.snapshots[m].t;
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            const double r = g.node_r(n);
            if (r > rlim) continue;
            acc.add(v[n] - u[n] + 1e-6, u[n], t, r, g.node_theta(n));
        }
    }
    return acc.finish("direct-comparison", domain_string(rlim));
}

VerifierReport geometric_comparison(const Trajectory& traj1, const Trajectory& traj2,
                                    double C, CheckDomain domain) {
    require_matching(traj1, traj2, "geometric_comparison");
    if (!(C >= 0.0)) throw ConfigError("geometric_comparison: C must be >= 0");
    const DiscGrid& g = *traj1.grid();
    const double rlim = domain.limit_radius(g.max_radius());
    const double ten_h2 = ten_h2_for(g, rlim);

    MarginAccum hyp1(ten_h2), hyp2(ten_h2), hyp3(ten_h2);
    for (std::size_t m = 0; m < traj1.snapshots.size(); ++m) {
        const auto& s1 = traj1.snapshots[m];
        const auto& s2 = traj2.snapshots[m];
        const ScalarField K1 = gauss_curvature(s1.u);
        const ScalarField K2 = gauss_curvature(s2.u);
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            const double r = g.node_r(n);
            if (r > rlim) continue;
            const double th = g.node_theta(n);
            hyp1.add(C - std::fabs(K2[n]), K2[n], s1.t, r, th);
            hyp2.add(C - K1[n], K1[n], s1.t, r, th);
            hyp3.add(C - (s1.u[n] - s2.u[n]), s1.u[n] - s2.u[n], s1.t, r, th);
        }
    }
    const VerifierReport h1 = hyp1.finish("(i) |K[g2]| <= C", domain_string(rlim));
    if (!h1.pass)
        throw HypothesisError(fmt::format(
            "geometric_comparison hypothesis (i) |K[g2]| <= C fails by {} at "
            "(t={}, r={})", -h1.margin, h1.where.t, h1.where.r));
    const VerifierReport h2 = hyp2.finish("(ii) K[g1] <= C", domain_string(rlim));
    if (!h2.pass)
        throw HypothesisError(fmt::format(
            "geometric_comparison hypothesis (ii) K[g1] <= C fails by {} at "
            "(t={}, r={})", -h2.margin, h2.where.t, h2.where.r));
    const VerifierReport h3 = hyp3.finish("(iii) Q <= C", domain_string(rlim));
    if (!h3.pass)
        throw HypothesisError(fmt::format(
            "geometric_comparison hypothesis (iii) Q <= C fails by {} at "
            "(t={}, r={})", -h3.margin, h3.where.t, h3.where.r));

    const VerifierReport proxy = ring_dominance_proxy(traj2, "g2-completeness-proxy");
    if (!proxy.pass)
        throw HypothesisError(fmt::format(
            "geometric_comparison: completeness proxy for g2 fails by {} at "
            "(t={}, r={})", -proxy.margin, proxy.where.t, proxy.where.r));

    {
        const auto& s1 = traj1.snapshots.front();
        const auto& s2 = traj2.snapshots.front();
        for (std::size_t n = 0; n < g.node_count(); ++n)
            if (s1.u[n] - s2.u[n] > 1e-12 * (1.0 + std::fabs(s2.u[n])))
                throw PreconditionError(fmt::format(
                    "geometric_comparison: Q(0) <= 0 fails at (r={}, theta={}): Q = {}",
                    g.node_r(n), g.node_theta(n), s1.u[n] - s2.u[n]));
    }

    MarginAccum acc(ten_h2);
    for (std::size_t m = 1; m < traj1.snapshots.size(); ++m) {
        const auto& s1 = traj1.snapshots[m];
        const auto& s2 = traj2.snapshots[m];
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            const double r = g.node_r(n);
            if (r > rlim) continue;
            acc.add(s2.u[n] - s1.u[n] + 1e-6, s2.u[n], s1.t, r, g.node_theta(n));
        }
    }
    return acc.finish("geometric-comparison", domain_string(rlim));
}

namespace {

// residual of the flow equation over interior triples of a trajectory,
// restricted to r <= rlim; returns per-triple sup and midpoint times
// measured on the local clock (t - t_front)
void residual_profile(const Trajectory& traj, double rlim, std::vector<double>& t_mid,
                      std::vector<double>& sup) {
    const DiscGrid& g = *traj.grid();
    const auto& kr = kernels::ops();
    std::vector<double> lap(g.node_count()), e(g.interior_count()), scratch;
    const double t0 = traj.snapshots.front().t;
    for (std::size_t m = 1; m + 1 < traj.snapshots.size(); ++m) {
        const auto& sm = traj.snapshots[m];
        const auto& sl = traj.snapshots[m - 1];
        const auto& sr = traj.snapshots[m + 1];
        const double h1 = sm.t - sl.t, h2 = sr.t - sm.t;
        const double wm = -h2 / (h1 * (h1 + h2));
        const double w0 = (h2 - h1) / (h1 * h2);
        const double wp = h1 / (h2 * (h1 + h2));
        detail::apply_laplacian(g, sm.u.values(), lap, scratch);
        kr.exp_neg2(sm.u.values().data(), e.data(), g.interior_count());
        double worst = 0.0;
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            if (g.node_r(n) > rlim) continue;
            const double du = wm * sl.u[n] + w0 * sm.u[n] + wp * sr.u[n];
            worst = std::max(worst, std::fabs(du - e[n] * lap[n]));
        }
        t_mid.push_back(sm.t - t0);
        sup.push_back(worst);
    }
}

double max_gap(const Trajectory& traj) {
    double g = 0.0;
    for (std::size_t m = 1; m < traj.snapshots.size(); ++m)
        g = std::max(g, traj.snapshots[m].t - traj.snapshots[m - 1].t);
    return g;
}

} // namespace

TimeShiftResult time_shift_transform(const Trajectory& traj, double C, double delta,
                                     CheckDomain domain) {
    if (traj.snapshots.size() < 4)
        throw UsageError("time_shift_transform: need at least 4 snapshots for cubic "
                         "time interpolation");
    const double t0 = traj.t_front();
    const double T = traj.t_back() - t0; // local-clock horizon
    if (!(delta > 0.0) || !(delta < T))
        throw DomainError(fmt::format("time_shift_transform: delta = {} outside (0, {})",
                                      delta, T));
    if (!(C >= 0.0)) throw ConfigError("time_shift_transform: C must be >= 0");

    // C must dominate the measured upper curvature bound
    {
        const double eps_probe = traj.snapshots[1].t - t0;
        auto [params, proxy] = admissibility_report(traj, std::span<const double>(&eps_probe, 1), domain);
        const DiscGrid& g = *traj.grid();
        const double tol = ten_h2_for(g, domain.limit_radius(g.max_radius()));
        if (C < params.C - tol * (1.0 + std::fabs(params.C)))
            throw PreconditionError(fmt::format(
                "time_shift_transform: C = {} below measured curvature bound {}", C,
                params.C));
    }

    const double squeeze = std::exp(-2.0 * C * delta);
    TimeShiftResult out;
    out.traj.config = traj.config;
    out.traj.policy = traj.policy;
    out.traj.metadata = traj.metadata;
    out.traj.metadata["transform"] = fmt::format("time-shift C={:.17g} delta={:.17g}", C, delta);

    for (const auto& s : traj.snapshots) {
        const double tau = s.t - t0; // output local time
        if (tau > T - delta + 1e-12) break;
        const double source = t0 + squeeze * (tau + delta);
        ScalarField v = traj.interpolate(source);
        v += C * delta;
        out.traj.snapshots.push_back({t0 + tau, std::move(v)});
    }
    if (out.traj.snapshots.size() < 3)
        throw UsageError("time_shift_transform: too few snapshots survive the shift");

    const DiscGrid& g = *traj.grid();
    const double rlim = domain.limit_radius(g.max_radius());

    // the result must still solve the flow equation
    {
        std::vector<double> tm, sup;
        residual_profile(out.traj, rlim, tm, sup);
        const double dt = max_gap(out.traj);
        const double h = g.max_spacing_within(rlim);
        const double allow = 10.0 * (h * h + dt * dt);
        const double worst = *std::max_element(sup.begin(), sup.end());
        out.pde_report.check = "time-shift-pde-residual";
        out.pde_report.domain = domain_string(rlim);
        out.pde_report.margin = allow - worst;
        out.pde_report.tolerance = 0.0;
        out.pde_report.pass = out.pde_report.margin >= 0.0;
        out.pde_report.where.t = tm.empty() ? 0.0 : tm[std::size_t(
            std::max_element(sup.begin(), sup.end()) - sup.begin())];
    }

    // v~(start) >= u0: the shift trades the time advance against the
    // C delta lift, so the transformed flow still starts above u0
    {
        MarginAccum acc(ten_h2_for(g, rlim));
        const auto& u0 = traj.snapshots.front().u;
        const auto& v0 = out.traj.snapshots.front().u;
        for (std::size_t n = 0; n < g.interior_count(); ++n) {
            const double r = g.node_r(n);
            if (r > rlim) continue;
            acc.add(v0[n] - u0[n], u0[n], 0.0, r, g.node_theta(n));
        }
        out.lower_bound_report = acc.finish("time-shift-initial-lower-bound",
                                            domain_string(rlim));
    }
    return out;
}

SupersolutionResult supersolution_transform(const Trajectory& traj, double eps,
                                            CheckDomain domain) {
    if (traj.snapshots.size() < 4)
        throw UsageError("supersolution_transform: need at least 4 snapshots for cubic "
                         "time interpolation");
    if (!(eps > 0.0)) throw DomainError("supersolution_transform: eps must be positive");

    const double t0 = traj.t_front();
    SupersolutionResult out;
    out.traj.config = traj.config;
    out.traj.policy = traj.policy;
    out.traj.metadata = traj.metadata;
    out.traj.metadata["transform"] = fmt::format("supersolution eps={:.17g}", eps);

    for (const auto& s : traj.snapshots) {
        const double tau = s.t - t0;
        const double stretch = std::log(eps * tau + 1.0);
        ScalarField v = traj.interpolate(t0 + stretch / eps);
        v += 0.5 * stretch;
        out.traj.snapshots.push_back({s.t, std::move(v)});
    }

    const DiscGrid& g = *traj.grid();
    const double rlim = domain.limit_radius(g.max_radius());
    residual_profile(out.traj, rlim, out.t_mid, out.measured);
    out.analytic.reserve(out.t_mid.size());
    for (double tau : out.t_mid) out.analytic.push_back(eps / (2.0 * (eps * tau + 1.0)));

    const double dt = max_gap(out.traj);
    const double h = g.max_spacing_within(rlim);
    const double allow = 10.0 * (h * h + dt * dt);
    double worst = 0.0;
    std::size_t worst_m = 0;
    for (std::size_t m = 0; m < out.measured.size(); ++m) {
        const double dev = std::fabs(out.measured[m] - out.analytic[m]);
        if (dev > worst) {
            worst = dev;
            worst_m = m;
        }
    }
    out.report.check = "supersolution-residual";
    out.report.domain = domain_string(rlim);
    out.report.margin = allow - worst;
    out.report.tolerance = 0.0;
    out.report.pass = out.report.margin >= 0.0;
    out.report.where.t = out.t_mid.empty() ? 0.0 : out.t_mid[worst_m];
    return out;
}

VerifierReport uniqueness_experiment(const SampleMetric& u0, const ExhaustionPlan& planA,
                                     const ExhaustionPlan& planB) {
    if (planA.snapshot_times != planB.snapshot_times)
        throw UsageError("uniqueness_experiment: plans must share snapshot times");

    const ConstructionResult A = construct_limit(u0, planA);
    const ConstructionResult B = construct_limit(u0, planB);

    // compare on the coarser reference grid
    const bool a_coarser = A.ref_grid->max_spacing_within(A.ref_grid->max_radius()) >=
                           B.ref_grid->max_spacing_within(B.ref_grid->max_radius());
    const GridPtr& g = a_coarser ? A.ref_grid : B.ref_grid;
    const double h = g->max_spacing_within(g->max_radius());
    const double allow_base = planA.limit_tol + planB.limit_tol;

    MarginAccum acc(0.0); // allowance folded into the slack below
    for (std::size_t m = 0; m < A.limit.snapshots.size(); ++m) {
        const double t = A.limit.snapshots[m].t;
        const ScalarField ua = a_coarser ? A.limit.snapshots[m].u
                                         : resample(A.limit.snapshots[m].u, g);
        const ScalarField ub = a_coarser ? resample(B.limit.snapshots[m].u, g)
                                         : B.limit.snapshots[m].u;
        for (std::size_t n = 0; n < g->interior_count(); ++n) {
            const double allow = allow_base + 10.0 * h * h * (1.0 + std::fabs(ua[n]));
            acc.add(allow - std::fabs(ua[n] - ub[n]), 0.0, t, g->node_r(n),
                    g->node_theta(n));
        }
    }
    return acc.finish("uniqueness-dual-path",
                      fmt::format("r <= {:.6g} (common reference)", g->max_radius()));
}

} // namespace ricci
