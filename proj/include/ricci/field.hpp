#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ricci/grid.hpp"

namespace ricci {

/// Real values on a DiscGrid, one per node (center first, then rings in
/// order, each ring contiguous in angle). Conformal factors u are stored
/// log-scale: the metric is e^{2u} |dz|^2.
class ScalarField {
public:
    explicit ScalarField(GridPtr grid, double fill = 0.0)
        : grid_(std::move(grid)), v_(grid_->node_count(), fill) {}

    static ScalarField from_function(GridPtr grid,
                                     const std::function<double(double r, double theta)>& f);

    const GridPtr& grid() const { return grid_; }
    std::span<double> values() { return v_; }
    std::span<const double> values() const { return v_; }
    double operator[](std::size_t n) const { return v_[n]; }
    double& operator[](std::size_t n) { return v_[n]; }
    double at(int i, int j) const { return v_[grid_->index(i, j)]; }
    std::size_t size() const { return v_.size(); }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator+=(double c);
    ScalarField& operator*=(double c);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator+(ScalarField a, double c) { return a += c; }

    bool all_finite() const;

private:
    GridPtr grid_;
    std::vector<double> v_;
};

enum class Reduce { Min, Max, SupNorm };

double field_reduce(const ScalarField& f, Reduce kind);
double field_min(const ScalarField& f);
double field_max(const ScalarField& f);
double sup_norm(const ScalarField& f);
double sup_diff(const ScalarField& a, const ScalarField& b);

/// Flat Laplacian f_rr + f_r/r + f_tt/r^2 at interior nodes (second
/// order; the center node uses the angular-average stencil). Truncation
/// ring entries of the result are set to zero: ring values are Dirichlet
/// data, not unknowns.
ScalarField laplacian(const ScalarField& f);

} // namespace ricci
