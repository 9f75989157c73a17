#pragma once

#include <vector>

namespace frontlab::fd {

/// First derivative; centered in the interior, one-sided second order at
/// the ends.
double d1(const std::vector<double>& f, int i, double dx);

/// Second derivative; centered in the interior, one-sided second order at
/// the ends (needs >= 4 nodes).
double d2(const std::vector<double>& f, int i, double dx);

/// Largest one-sided slope magnitude max_i |f[i+1]-f[i]|/dx.
double max_abs_slope(const std::vector<double>& f, double dx);

}  // namespace frontlab::fd
