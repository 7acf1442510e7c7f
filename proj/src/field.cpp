#include "ricci/field.hpp"

#include <cmath>
#include <cstring>

#include "ricci/errors.hpp"
#include "ricci/kernels.hpp"
#include "ricci/stencil.hpp"

namespace ricci {

ScalarField ScalarField::from_function(GridPtr grid,
                                       const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    auto v = out.values();
    v[0] = f(0.0, 0.0);
    const auto radii = grid->radii();
    for (int i = 1; i < grid->n_r(); ++i)
        for (int j = 0; j < grid->n_theta(); ++j)
            v[grid->index(i, j)] = f(radii[i], grid->theta(j));
    return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    for (std::size_t n = 0; n < v_.size(); ++n) v_[n] += o.v_[n];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    for (std::size_t n = 0; n < v_.size(); ++n) v_[n] -= o.v_[n];
    return *this;
}

ScalarField& ScalarField::operator+=(double c) {
    for (double& x : v_) x += c;
    return *this;
}

ScalarField& ScalarField::operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
}

bool ScalarField::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

double field_min(const ScalarField& f) {
    return kernels::ops().reduce_min(f.values().data(), f.size());
}

double field_max(const ScalarField& f) {
    return kernels::ops().reduce_max(f.values().data(), f.size());
}

double sup_norm(const ScalarField& f) {
    return kernels::ops().reduce_abs_max(f.values().data(), f.size());
}

double sup_diff(const ScalarField& a, const ScalarField& b) {
    if (a.size() != b.size())
        throw UsageError("sup_diff: fields live on different layouts");
    double m = 0.0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t n = 0; n < va.size(); ++n) {
        const double d = std::fabs(va[n] - vb[n]);
        if (d > m) m = d;
    }
    return m;
}

double field_reduce(const ScalarField& f, Reduce kind) {
    switch (kind) {
    case Reduce::Min: return field_min(f);
    case Reduce::Max: return field_max(f);
    case Reduce::SupNorm: return sup_norm(f);
    }
    throw UsageError("field_reduce: unknown reduction");
}

namespace detail {

void apply_laplacian(const DiscGrid& g, std::span<const double> f,
                     std::span<double> out, std::vector<double>& scratch) {
    const auto& k = kernels::ops();
    const int n_r = g.n_r();
    const int nt = g.n_theta();

    // Center: angular-average stencil. The ring-1 mean is accumulated in a
    // fixed sequential order so results do not depend on the kernel lane.
    double mean = 0.0;
    for (int j = 0; j < nt; ++j) mean += f[g.index(1, j)];
    mean /= nt;
    out[0] = g.center_coeff() * (mean - f[0]);

    if (g.radial()) {
        k.lap_line(f.data() + 1, out.data() + 1, std::size_t(n_r - 2),
                   g.line_ca().data(), g.line_cb().data(), g.line_cc().data());
    } else {
        const auto stencils = g.ring_stencils();
        // Ring 1 sees the center as its whole inner ring.
        if (scratch.size() < std::size_t(nt)) scratch.resize(nt);
        for (int j = 0; j < nt; ++j) scratch[j] = f[0];
        for (int i = 1; i <= n_r - 2; ++i) {
            const auto& s = stencils[i - 1];
            const double* below = (i == 1) ? scratch.data() : f.data() + g.index(i - 1, 0);
            k.lap_ring(below, f.data() + g.index(i, 0), f.data() + g.index(i + 1, 0),
                       out.data() + g.index(i, 0), std::size_t(nt),
                       s.ca, s.cb, s.cc, s.cang);
        }
    }

    // Truncation ring: Dirichlet data, no equation there.
    for (std::size_t n = g.ring_offset(); n < g.node_count(); ++n) out[n] = 0.0;
}

} // namespace detail

ScalarField laplacian(const ScalarField& f) {
    ScalarField out(f.grid());
    std::vector<double> scratch;
    detail::apply_laplacian(*f.grid(), f.values(), out.values(), scratch);
    return out;
}

} // namespace ricci
