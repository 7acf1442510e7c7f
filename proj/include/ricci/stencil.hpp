#pragma once

#include <span>
#include <vector>

#include "ricci/grid.hpp"

namespace ricci::detail {

/// Flat Laplacian into `out` at interior nodes (center + rings 1..n_r-2);
/// truncation-ring entries of `out` are zeroed. `scratch` is reused
/// between calls to avoid per-step allocation.
void apply_laplacian(const DiscGrid& g, std::span<const double> f,
                     std::span<double> out, std::vector<double>& scratch);

} // namespace ricci::detail
