#include "ricci/construction.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <future>
#include <limits>
#include <sstream>

#include "ricci/errors.hpp"
#include "ricci/resample.hpp"

namespace ricci {

int ExhaustionPlan::n_r_for(int k) const {
    return base_n_r + int(std::lround(n_r_per_k * k));
}

GridPtr ExhaustionPlan::grid_for(int k) const {
    return build_grid(exhaustion_radius(k), n_r_for(k), n_theta, clustering, collar);
}

GridPtr ExhaustionPlan::reference_grid() const {
    const double ref_collar = 0.01;
    const double a_ref = reference_radius / (1.0 - ref_collar);
    int n_ref = reference_n_r;
    if (n_ref <= 0) {
        // match the node density of the D_kmax grid restricted to the
        // reference radius
        const int kmax = k_list.back();
        const double rmax = exhaustion_radius(kmax) * (1.0 - collar);
        const double xi = 1.0 - std::pow(1.0 - reference_radius / rmax, 1.0 / clustering);
        n_ref = std::max(9, int(std::lround((n_r_for(kmax) - 1) * xi)) + 1);
    }
    return build_grid(a_ref, n_ref, n_theta, 1.0, ref_collar);
}

void ExhaustionPlan::validate() const {
    if (k_list.empty()) throw ConfigError("exhaustion plan: empty k list");
    int prev = 0;
    for (int k : k_list) {
        if (k <= prev) throw ConfigError("exhaustion plan: k list must be strictly increasing");
        prev = k;
    }
    if (!(eta > 0.0)) throw ConfigError("exhaustion plan: eta must be positive");
    if (!(T > 0.0)) throw ConfigError("exhaustion plan: T must be positive");
    if (!(limit_tol > 0.0)) throw ConfigError("exhaustion plan: limit_tol must be positive");
    if (snapshot_times.empty())
        throw ConfigError("exhaustion plan: at least one snapshot time required");
    const double rmax_last = exhaustion_radius(k_list.back()) * (1.0 - collar);
    if (!(reference_radius > 0.0) || reference_radius >= rmax_last)
        throw ConfigError(fmt::format(
            "exhaustion plan: reference radius {} not inside the D_{} grid (radius {})",
            reference_radius, k_list.back(), rmax_last));
    FlowConfig probe = flow;
    probe.snapshot_times = snapshot_times;
    probe.validate(T);
}

Trajectory approximate_flow(const SampleMetric& u0, int k, double eta, double T,
                            const ExhaustionPlan& plan) {
    GridPtr grid = plan.grid_for(k);
    const ScalarField u0_k = u0.on_grid(grid);
    const ScalarField ubar = smoothed_max_initial(u0_k, k, CutoffSpec{eta});

    FlowConfig cfg = plan.flow;
    cfg.snapshot_times = plan.snapshot_times;

    // the initial data follows the h_k branch at the rim, so the ring
    // evolves with the curvature -k^2 of that branch
    Trajectory traj = run(ubar, BoundaryPolicy::constant_curvature(double(k) * k), T, cfg);
    traj.metadata["k"] = std::to_string(k);
    traj.metadata["eta"] = fmt::format("{:.17g}", eta);
    traj.metadata["initial"] = u0.descriptor;
    return traj;
}

namespace {

std::string history_string(const std::vector<PairReport>& pairs) {
    std::ostringstream os;
    for (const auto& p : pairs) {
        os << fmt::format("  ({}, {}): sup diff per snapshot [", p.k_lo, p.k_hi);
        for (std::size_t m = 0; m < p.sup_diff.size(); ++m)
            os << (m ? ", " : "") << fmt::format("{:.3e}", p.sup_diff[m]);
        os << "]\n";
    }
    return os.str();
}

} // namespace

ConstructionResult construct_limit(const SampleMetric& u0, const ExhaustionPlan& plan) {
    plan.validate();

    ConstructionResult res;
    res.plan = plan;

    // the k family is independent; run it concurrently
    res.per_k.reserve(plan.k_list.size());
    if (plan.parallel && plan.k_list.size() > 1) {
        std::vector<std::future<Trajectory>> futs;
        futs.reserve(plan.k_list.size());
        for (int k : plan.k_list)
            futs.push_back(std::async(std::launch::async, [&, k] {
                return approximate_flow(u0, k, plan.eta, plan.T, plan);
            }));
        for (auto& f : futs) res.per_k.push_back(f.get());
    } else {
        for (int k : plan.k_list)
            res.per_k.push_back(approximate_flow(u0, k, plan.eta, plan.T, plan));
    }

    const std::size_t n_snap = res.per_k.front().snapshots.size();

    // pairwise comparison on the common domain (the lower grid)
    for (std::size_t p = 0; p + 1 < plan.k_list.size(); ++p) {
        const Trajectory& lo = res.per_k[p];
        const Trajectory& hi = res.per_k[p + 1];
        const GridPtr& glo = lo.grid();
        const double h = glo->max_spacing_within(glo->max_radius());
        const double ten_h2 = 10.0 * h * h;

        PairReport rep;
        rep.k_lo = plan.k_list[p];
        rep.k_hi = plan.k_list[p + 1];
        for (std::size_t m = 0; m < n_snap; ++m) {
            const ScalarField hi_on_lo = resample(hi.snapshots[m].u, glo);
            const auto& ulo = lo.snapshots[m].u;
            double sup = 0.0, viol = -std::numeric_limits<double>::infinity();
            double viol_norm = viol;
            for (std::size_t n = 0; n < glo->interior_count(); ++n) {
                const double d = hi_on_lo[n] - ulo[n];
                sup = std::max(sup, std::fabs(d));
                viol = std::max(viol, d);
                viol_norm = std::max(viol_norm, d / (1.0 + std::fabs(ulo[n])));
            }
            rep.sup_diff.push_back(sup);
            rep.violation.push_back(viol);
            if (viol_norm > ten_h2)
                throw ConstructionError(fmt::format(
                    "exhaustion not decreasing: u_{} exceeds u_{} by {} at snapshot t = {} "
                    "(tolerance 10 h^2 = {:.3e})",
                    rep.k_hi, rep.k_lo, viol, lo.snapshots[m].t, ten_h2));
        }
        res.pairs.push_back(std::move(rep));
    }

    // convergence of the final pair decides, per snapshot
    res.converged_per_snapshot.assign(n_snap, 0);
    if (plan.k_list.size() == 1) {
        std::fill(res.converged_per_snapshot.begin(), res.converged_per_snapshot.end(), 1);
    } else {
        const auto& last = res.pairs.back();
        for (std::size_t m = 0; m < n_snap; ++m)
            res.converged_per_snapshot[m] = last.sup_diff[m] < plan.limit_tol ? 1 : 0;
    }
    res.all_converged = std::all_of(res.converged_per_snapshot.begin(),
                                    res.converged_per_snapshot.end(),
                                    [](char c) { return c != 0; });

    // the limit estimate: the last member, on the reference grid
    res.ref_grid = plan.reference_grid();
    res.limit.config = res.per_k.back().config;
    res.limit.policy = res.per_k.back().policy;
    res.limit.metadata = res.per_k.back().metadata;
    res.limit.metadata["construction"] = "limit";
    for (const auto& s : res.per_k.back().snapshots)
        res.limit.snapshots.push_back({s.t, resample(s.u, res.ref_grid)});

    if (!res.all_converged)
        throw ConvergenceError(fmt::format(
            "exhaustion not converged to limit_tol = {} within k list; history:\n{}",
            plan.limit_tol, history_string(res.pairs)));

    return res;
}

VerifierReport maximality_check(const Trajectory& candidate, const Trajectory& limit,
                                CheckDomain domain) {
    if (candidate.snapshots.size() != limit.snapshots.size())
        throw UsageError("maximality_check: snapshot counts differ");
    const GridPtr& g = limit.grid();
    const double rlim = domain.limit_radius(g->max_radius());
    const double h = g->max_spacing_within(rlim);
    MarginAccum acc(10.0 * h * h);

    for (std::size_t m = 0; m < limit.snapshots.size(); ++m) {
        const double t = limit.snapshots[m].t;
        if (std::fabs(candidate.snapshots[m].t - t) > 1e-9 * std::max(1.0, t))
            throw UsageError(fmt::format(
                "maximality_check: snapshot times differ at index {} ({} vs {})", m,
                candidate.snapshots[m].t, t));
        const ScalarField cand = candidate.grid()->same_layout(*g)
                                     ? candidate.snapshots[m].u
                                     : resample(candidate.snapshots[m].u, g);
        const auto& ulim = limit.snapshots[m].u;
        for (std::size_t n = 0; n < g->interior_count(); ++n) {
            if (g->node_r(n) > rlim) continue;
            acc.add(ulim[n] - cand[n], ulim[n], t, g->node_r(n), g->node_theta(n));
        }
    }
    return acc.finish("maximality", fmt::format("r <= {:.3g}", rlim));
}

} // namespace ricci
