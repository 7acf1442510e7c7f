#pragma once

#include "ricci/field.hpp"

namespace ricci {

/// Interpolated value of f at (r, theta): cubic Lagrange through the four
/// nearest ring radii, each ring value obtained by periodic cubic
/// interpolation in angle. Exact when (r, theta) hits a node.
/// Throws DomainError if r lies outside the source grid.
double sample_at(const ScalarField& f, double r, double theta);

/// Resample onto another grid (bicubic radial x periodic-cubic angular).
/// Identical layouts are copied verbatim.
ScalarField resample(const ScalarField& f, GridPtr target);

} // namespace ricci
