#include "ricci/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "ricci/errors.hpp"

namespace ricci {

DiscGrid::DiscGrid(double a, int n_r, int n_theta, double clustering, double collar)
    : a_(a), n_r_(n_r), n_theta_(n_theta), clustering_(clustering), collar_(collar) {
    if (!(a > 0.0) || a > 1.0)
        throw ConfigError(fmt::format("grid radius a = {} outside (0, 1]", a));
    if (n_r < 8)
        throw ConfigError(fmt::format("n_r = {} below minimum 8", n_r));
    if (n_theta != 1 && n_theta < 8)
        throw ConfigError(fmt::format("n_theta = {} must be 1 (radial) or >= 8", n_theta));
    if (!(clustering >= 1.0))
        throw ConfigError(fmt::format("clustering = {} below 1", clustering));
    if (!(collar > 0.0) || !(collar < 0.5))
        throw ConfigError(fmt::format("collar = {} outside (0, 0.5)", collar));

    dtheta_ = 2.0 * std::numbers::pi / n_theta;

    const double rmax = a * (1.0 - collar);
    radii_.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
        const double xi = double(i) / (n_r - 1);
        radii_[i] = rmax * (1.0 - std::pow(1.0 - xi, clustering));
    }
    radii_[0] = 0.0;
    radii_[n_r - 1] = rmax; // exact, not subject to pow() roundoff

    // Angular weight per ring: 1 / chord^2 with chord = 2 r sin(dtheta/2).
    // Equivalent to the standard 1/(r dtheta)^2 weight rescaled by
    // (dtheta/2)^2 / sin^2(dtheta/2); the rescaling keeps second order and
    // makes the stencil annihilate cos(theta), sin(theta) exactly.
    const double half_chord = std::sin(0.5 * dtheta_);

    stencils_.resize(std::max(0, n_r - 2));
    ring_h2min_.resize(std::max(0, n_r - 2));
    for (int i = 1; i <= n_r - 2; ++i) {
        const double hm = radii_[i] - radii_[i - 1];
        const double hp = radii_[i + 1] - radii_[i];
        const double r = radii_[i];

        // Non-uniform 3-point f_rr and f_r, combined as f_rr + f_r / r.
        const double d2a = 2.0 / (hm * (hm + hp));
        const double d2b = -2.0 / (hm * hp);
        const double d2c = 2.0 / (hp * (hm + hp));
        const double d1a = -hp / (hm * (hm + hp));
        const double d1b = (hp - hm) / (hm * hp);
        const double d1c = hm / (hp * (hm + hp));

        RingStencil s;
        s.ca = d2a + d1a / r;
        s.cb = d2b + d1b / r;
        s.cc = d2c + d1c / r;
        if (n_theta_ == 1) {
            s.cang = 0.0;
        } else {
            const double chord = 2.0 * r * half_chord;
            s.cang = 1.0 / (chord * chord);
            s.cb -= 2.0 * s.cang;
        }
        stencils_[i - 1] = s;

        double h = std::min(hm, hp);
        if (n_theta_ > 1) h = std::min(h, 2.0 * r * half_chord);
        ring_h2min_[i - 1] = h * h;
    }

    if (n_theta_ == 1) {
        line_ca_.resize(stencils_.size());
        line_cb_.resize(stencils_.size());
        line_cc_.resize(stencils_.size());
        for (std::size_t s = 0; s < stencils_.size(); ++s) {
            line_ca_[s] = stencils_[s].ca;
            line_cb_[s] = stencils_[s].cb;
            line_cc_[s] = stencils_[s].cc;
        }
    }

    const double r1 = radii_[1];
    center_coeff_ = 4.0 / (r1 * r1);
    center_h2min_ = r1 * r1;
}

double DiscGrid::max_spacing_within(double r_limit) const {
    double h = radii_[1]; // center's incident spacing
    const double half_chord = std::sin(0.5 * dtheta_);
    for (int i = 1; i <= n_r_ - 2; ++i) {
        if (radii_[i] > r_limit) break;
        double local = std::max(radii_[i] - radii_[i - 1], radii_[i + 1] - radii_[i]);
        if (n_theta_ > 1) local = std::max(local, 2.0 * radii_[i] * half_chord);
        h = std::max(h, local);
    }
    return h;
}

GridPtr build_grid(double a, int n_r, int n_theta, double clustering, double collar) {
    return std::make_shared<DiscGrid>(a, n_r, n_theta, clustering, collar);
}

} // namespace ricci
