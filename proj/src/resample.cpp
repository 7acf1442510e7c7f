#include "ricci/resample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "ricci/errors.hpp"

namespace ricci {
namespace {

// Value on ring `i` at angle `theta` (cubic through 4 angular neighbours).
double ring_value_at(const ScalarField& f, int i, double theta) {
    const DiscGrid& g = *f.grid();
    if (i == 0) return f[0];
    if (g.radial()) return f[g.index(i, 0)];

    const int nt = g.n_theta();
    const double dth = g.dtheta();
    double x = theta / dth;
    x -= std::floor(x / nt) * nt; // into [0, nt)
    int j0 = int(std::floor(x));
    if (j0 >= nt) j0 -= nt;
    const double s = x - j0;

    // uniform 4-point cubic weights at fraction s between j0 and j0+1
    const double wm = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double w0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double w1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double w2 = (s + 1.0) * s * (s - 1.0) / 6.0;

    auto wrap = [nt](int j) { return ((j % nt) + nt) % nt; };
    return wm * f.at(i, wrap(j0 - 1)) + w0 * f.at(i, wrap(j0)) +
           w1 * f.at(i, wrap(j0 + 1)) + w2 * f.at(i, wrap(j0 + 2));
}

} // namespace

double sample_at(const ScalarField& f, double r, double theta) {
    const DiscGrid& g = *f.grid();
    const auto radii = g.radii();
    const double rmax = g.max_radius();
    if (r > rmax * (1.0 + 1e-12) + 1e-300)
        throw DomainError(fmt::format(
            "sample_at: r = {} outside source grid (max radius {})", r, rmax));
    r = std::min(r, rmax);

    // window of 4 consecutive ring radii around r
    auto it = std::upper_bound(radii.begin(), radii.end(), r);
    int i1 = int(it - radii.begin()) - 1;
    int iw = std::clamp(i1 - 1, 0, g.n_r() - 4);

    std::array<double, 4> rv, fv;
    for (int m = 0; m < 4; ++m) {
        rv[m] = radii[iw + m];
        fv[m] = ring_value_at(f, iw + m, theta);
    }

    // non-uniform Lagrange cubic in r
    double acc = 0.0;
    for (int m = 0; m < 4; ++m) {
        double w = 1.0;
        for (int l = 0; l < 4; ++l)
            if (l != m) w *= (r - rv[l]) / (rv[m] - rv[l]);
        acc += w * fv[m];
    }
    return acc;
}

ScalarField resample(const ScalarField& f, GridPtr target) {
    const DiscGrid& src = *f.grid();
    if (src.same_layout(*target)) {
        ScalarField out(target);
        std::copy(f.values().begin(), f.values().end(), out.values().begin());
        return out;
    }
    if (target->max_radius() > src.max_radius() * (1.0 + 1e-12))
        throw DomainError(fmt::format(
            "resample: target radius {} exceeds source radius {}",
            target->max_radius(), src.max_radius()));

    ScalarField out(target);
    auto v = out.values();
    v[0] = sample_at(f, 0.0, 0.0);
    const auto radii = target->radii();
    for (int i = 1; i < target->n_r(); ++i)
        for (int j = 0; j < target->n_theta(); ++j)
            v[target->index(i, j)] = sample_at(f, radii[i], target->theta(j));
    return out;
}

} // namespace ricci
