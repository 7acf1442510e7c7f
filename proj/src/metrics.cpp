#include "ricci/metrics.hpp"

#include <cmath>
#include <fmt/format.h>
#include <map>
#include <vector>

#include "ricci/errors.hpp"
#include "ricci/kernels.hpp"
#include "ricci/resample.hpp"
#include "ricci/stencil.hpp"

namespace ricci {

double hyperbolic_factor_at(double r, double a, double c) {
    return std::log(2.0 * a / (std::sqrt(c) * (a * a - r * r)));
}

double bigbang_at(double r, double t) {
    return std::log(2.0 / (1.0 - r * r)) + 0.5 * std::log(2.0 * t);
}

double expanding_at(double r, double a, double t) {
    return std::log(2.0 * a / (a * a - r * r)) + 0.5 * std::log(2.0 * t + 1.0);
}

ScalarField hyperbolic_factor(GridPtr grid, double a, double c) {
    if (!(a > 0.0) || !(c > 0.0))
        throw DomainError(fmt::format("hyperbolic_factor: need a > 0, c > 0 (got a={}, c={})", a, c));
    if (grid->max_radius() >= a)
        throw DomainError(fmt::format(
            "hyperbolic_factor: grid reaches radius {} but the factor is singular at {}",
            grid->max_radius(), a));
    return ScalarField::from_function(
        grid, [=](double r, double) { return hyperbolic_factor_at(r, a, c); });
}

ScalarField bigbang_factor(GridPtr grid, double t) {
    if (!(t > 0.0))
        throw DomainError(fmt::format("bigbang_factor: t = {} must be positive", t));
    return hyperbolic_factor(grid, 1.0, 1.0 / (2.0 * t));
}

ScalarField expanding_hyperbolic(GridPtr grid, double a, double t) {
    if (!(t >= 0.0))
        throw DomainError(fmt::format("expanding_hyperbolic: t = {} must be >= 0", t));
    return hyperbolic_factor(grid, a, 1.0 / (2.0 * t + 1.0));
}

double exhaustion_radius(int k) { return double(k) / (k + 1); }

double exhaustion_factor_at(double r, int k) {
    return hyperbolic_factor_at(r, exhaustion_radius(k), double(k) * k);
}

ScalarField exhaustion_factor(GridPtr grid, int k) {
    return hyperbolic_factor(grid, exhaustion_radius(k), double(k) * k);
}

ScalarField gauss_curvature(const ScalarField& u) {
    const DiscGrid& g = *u.grid();
    const auto& k = kernels::ops();
    const auto uv = u.values();

    ScalarField out(u.grid());
    std::vector<double> lap(g.node_count()), e(g.node_count()), scratch;
    detail::apply_laplacian(g, uv, lap, scratch);
    k.exp_neg2(uv.data(), e.data(), g.node_count());
    k.neg_mul(e.data(), lap.data(), out.values().data(), g.interior_count());

    // Truncation ring: one-sided radial stencil (boundary-quality).
    const int i = g.n_r() - 1;
    const auto radii = g.radii();
    const double gsp = radii[i - 1] - radii[i - 2];
    const double hsp = radii[i] - radii[i - 1];
    const double r = radii[i];
    const double c2a = 2.0 / (gsp * (gsp + hsp));
    const double c2b = -2.0 / (gsp * hsp);
    const double c2c = 2.0 / (hsp * (gsp + hsp));
    const double c1a = hsp / (gsp * (gsp + hsp));
    const double c1b = -(gsp + hsp) / (gsp * hsp);
    const double c1c = (gsp + 2.0 * hsp) / (hsp * (gsp + hsp));
    const int nt = g.n_theta();
    const double cang =
        (nt > 1) ? 1.0 / ((2.0 * r * std::sin(0.5 * g.dtheta())) * (2.0 * r * std::sin(0.5 * g.dtheta())))
                 : 0.0;
    for (int j = 0; j < nt; ++j) {
        const std::size_t n = g.index(i, j);
        const double f2 = (i - 2 == 0 && g.radial()) ? uv[0] : uv[g.index(i - 2, j)];
        const double f1 = uv[g.index(i - 1, j)];
        const double f0 = uv[n];
        double lap_ring = (c2a + c1a / r) * f2 + (c2b + c1b / r) * f1 + (c2c + c1c / r) * f0;
        if (nt > 1) {
            const int jl = (j == 0) ? nt - 1 : j - 1;
            const int jr = (j == nt - 1) ? 0 : j + 1;
            lap_ring += cang * (uv[g.index(i, jl)] - 2.0 * f0 + uv[g.index(i, jr)]);
        }
        out[n] = -e[n] * lap_ring;
    }
    return out;
}

double psi(double s, CutoffSpec spec) {
    const double eta = spec.eta;
    if (s <= -eta) return 0.0;
    if (s >= eta) return s;
    const double q = s + eta;
    return q * q / (4.0 * eta);
}

double psi_prime(double s, CutoffSpec spec) {
    const double eta = spec.eta;
    if (s <= -eta) return 0.0;
    if (s >= eta) return 1.0;
    return (s + eta) / (2.0 * eta);
}

double curvature_precondition_tol(double h, double u) {
    return 10.0 * h * h * std::exp(-2.0 * u);
}

void require_curvature_at_most_minus_one(const ScalarField& u0) {
    const DiscGrid& g = *u0.grid();
    const ScalarField K = gauss_curvature(u0);
    const double h = g.max_spacing_within(g.max_radius());
    double worst = -1.0;
    std::size_t worst_node = 0;
    for (std::size_t n = 0; n < g.interior_count(); ++n) {
        const double excess = K[n] + 1.0 - curvature_precondition_tol(h, u0[n]);
        if (excess > worst) {
            worst = excess;
            worst_node = n;
        }
    }
    if (worst > 0.0)
        throw PreconditionError(fmt::format(
            "initial metric violates K <= -1: K = {} at node (r={}, theta={}), "
            "exceeding tolerance by {}",
            K[worst_node], g.node_r(worst_node), g.node_theta(worst_node), worst));
}

ScalarField smoothed_max_initial(const ScalarField& u0, int k, CutoffSpec spec) {
    if (!(spec.eta > 0.0))
        throw ConfigError(fmt::format("cutoff width eta = {} must be positive", spec.eta));
    const DiscGrid& g = *u0.grid();
    const double a_k = exhaustion_radius(k);
    if (g.max_radius() >= a_k)
        throw DomainError(fmt::format(
            "smoothed_max_initial: grid radius {} not inside D_{} (radius {})",
            g.max_radius(), k, a_k));
    require_curvature_at_most_minus_one(u0);

    ScalarField out(u0.grid());
    const auto radii = g.radii();
    auto blend = [&](double r, double u) { return u + psi(exhaustion_factor_at(r, k) - u, spec); };
    out[0] = blend(0.0, u0[0]);
    for (int i = 1; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            const std::size_t n = g.index(i, j);
            out[n] = blend(radii[i], u0[n]);
        }
    return out;
}

ScalarField SampleMetric::on_grid(GridPtr grid) const {
    if (analytic) return ScalarField::from_function(grid, analytic);
    return resample(u, grid);
}

namespace {

std::map<std::string, double> parse_params(const std::string& spec_str) {
    std::map<std::string, double> out;
    std::size_t pos = 0;
    while (pos < spec_str.size()) {
        const std::size_t comma = spec_str.find(',', pos);
        const std::string item = spec_str.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("bad metric parameter '{}' (expected key=value)", item));
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("bad numeric value in metric parameter '{}'", item));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    params.erase(it);
    return v;
}

} // namespace

SampleMetric sample_initial(const std::string& descriptor, GridPtr grid) {
    const std::size_t colon = descriptor.find(':');
    const std::string name = descriptor.substr(0, colon);
    auto params = colon == std::string::npos ? std::map<std::string, double>{}
                                             : parse_params(descriptor.substr(colon + 1));

    SampleMetric m{ScalarField(grid), false, descriptor, nullptr};
    if (name == "restricted-hyperbolic") {
        const double R = take(params, "R", 2.0);
        if (!(R > 1.0))
            throw ConfigError(fmt::format("restricted-hyperbolic: R = {} must exceed 1", R));
        m.analytic = [R](double r, double) { return hyperbolic_factor_at(r, R, 1.0); };
        m.complete = false;
    } else if (name == "scaled-flat-like") {
        const double R = take(params, "R", 1.5);
        const double amp = take(params, "amp", 0.3);
        if (!(R > 1.0) || !(amp >= 0.0))
            throw ConfigError("scaled-flat-like: need R > 1 and amp >= 0");
        m.analytic = [R, amp](double r, double) {
            return hyperbolic_factor_at(r, R, 1.0) - amp * (1.0 - r * r);
        };
        m.complete = false;
    } else if (name == "complete-hyperbolic") {
        m.analytic = [](double r, double) { return hyperbolic_factor_at(r, 1.0, 1.0); };
        m.complete = true;
    } else {
        throw ConfigError(fmt::format("unknown initial metric '{}'", name));
    }
    if (!params.empty())
        throw ConfigError(fmt::format("unknown parameter '{}' for metric '{}'",
                                      params.begin()->first, name));

    m.u = ScalarField::from_function(grid, m.analytic);
    require_curvature_at_most_minus_one(m.u);
    return m;
}

} // namespace ricci
