#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ricci {

/// Polar discretization of a disc of radius `a`, truncated at the rim.
///
/// Nodes consist of one center node (index 0) plus rings i = 1 .. n_r-1
/// with n_theta nodes each, uniformly spaced in angle. The ring radii
/// follow
///
///     r_i = a (1 - collar) (1 - (1 - i/(n_r-1))^clustering),
///
/// so r_0 = 0 is the center and nodes cluster toward the rim for
/// clustering > 1. The outermost ring (i = n_r-1) sits exactly at
/// a (1 - collar) and carries prescribed boundary data; conformal factors
/// of complete metrics blow up at the rim, so that ring is never treated
/// as an unknown.
///
/// n_theta == 1 selects the radially symmetric fast path: each ring is a
/// single sample and the angular stencil terms vanish.
class DiscGrid {
public:
    DiscGrid(double a, int n_r, int n_theta, double clustering, double collar);

    double radius() const { return a_; }
    int n_r() const { return n_r_; }
    int n_theta() const { return n_theta_; }
    double clustering() const { return clustering_; }
    double collar() const { return collar_; }
    bool radial() const { return n_theta_ == 1; }

    /// a (1 - collar): radius of the truncation ring.
    double max_radius() const { return radii_.back(); }

    /// Ring radii, r_0 = 0 (center) through the truncation ring.
    std::span<const double> radii() const { return radii_; }

    double dtheta() const { return dtheta_; }
    double theta(int j) const { return dtheta_ * j; }

    /// Total nodes: 1 center + (n_r - 1) rings of n_theta.
    std::size_t node_count() const { return 1 + std::size_t(n_r_ - 1) * n_theta_; }

    /// Flat index of ring i >= 1, angle j. The center is index 0.
    std::size_t index(int i, int j) const {
        return 1 + std::size_t(i - 1) * n_theta_ + j;
    }
    int ring_of(std::size_t node) const {
        return node == 0 ? 0 : int((node - 1) / n_theta_) + 1;
    }
    int angle_of(std::size_t node) const {
        return node == 0 ? 0 : int((node - 1) % n_theta_);
    }
    double node_r(std::size_t node) const { return radii_[ring_of(node)]; }
    double node_theta(std::size_t node) const { return theta(angle_of(node)); }

    /// Interior = center and rings 1 .. n_r-2. The truncation ring is data.
    bool is_interior(std::size_t node) const {
        return ring_of(node) < n_r_ - 1;
    }

    /// Interior nodes form a contiguous prefix of the value array; the
    /// truncation ring is the suffix.
    std::size_t interior_count() const { return 1 + std::size_t(n_r_ - 2) * n_theta_; }
    std::size_t ring_offset() const { return interior_count(); }
    std::size_t ring_count() const { return std::size_t(n_theta_); }

    /// Precomputed flat-Laplacian stencil for interior ring i (1..n_r-2):
    ///     (lap f)_{ij} = ca f_{i-1,j} + cb f_{ij} + cc f_{i+1,j}
    ///                  + cang (f_{i,j-1} + f_{i,j+1})
    /// with cb already carrying the -2 cang diagonal part. cang uses the
    /// chord spacing 2 r sin(dtheta/2), which makes the angular part exact
    /// on the first harmonics (and hence the full stencil exact on affine
    /// functions).
    struct RingStencil {
        double ca, cb, cc, cang;
    };
    /// Stencils for rings 1 .. n_r-2 (element 0 belongs to ring 1).
    std::span<const RingStencil> ring_stencils() const { return stencils_; }

    /// Center stencil: (lap f)_0 = center_coeff * (ring-1 mean - f_0).
    double center_coeff() const { return center_coeff_; }

    /// Radial grids only: the same stencil as structure-of-arrays over the
    /// line [center, r_1, ..., r_{n_r-1}], covering nodes 1 .. n_r-2.
    std::span<const double> line_ca() const { return line_ca_; }
    std::span<const double> line_cb() const { return line_cb_; }
    std::span<const double> line_cc() const { return line_cc_; }

    /// Squared smallest incident spacing per ring (1..n_r-2) and for the
    /// center node; used by the CFL bound.
    std::span<const double> ring_h2min() const { return ring_h2min_; }
    double center_h2min() const { return center_h2min_; }

    /// Largest incident spacing among interior nodes with r <= r_limit.
    double max_spacing_within(double r_limit) const;

    /// Same parameters, hence identical node layout.
    bool same_layout(const DiscGrid& o) const {
        return a_ == o.a_ && n_r_ == o.n_r_ && n_theta_ == o.n_theta_ &&
               clustering_ == o.clustering_ && collar_ == o.collar_;
    }

private:
    double a_;
    int n_r_;
    int n_theta_;
    double clustering_;
    double collar_;
    double dtheta_;
    std::vector<double> radii_;
    std::vector<RingStencil> stencils_;
    std::vector<double> line_ca_, line_cb_, line_cc_;
    std::vector<double> ring_h2min_;
    double center_coeff_;
    double center_h2min_;
};

using GridPtr = std::shared_ptr<const DiscGrid>;

/// Validated grid construction; throws ConfigError on bad parameters.
/// Preconditions: 0 < a <= 1, n_r >= 8, n_theta == 1 or >= 8,
/// clustering >= 1, collar in (0, 0.5).
GridPtr build_grid(double a, int n_r, int n_theta, double clustering, double collar);

} // namespace ricci
