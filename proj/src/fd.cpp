#include "frontlab/fd.hpp"

#include <cmath>
#include <stdexcept>

namespace frontlab::fd {

double d1(const std::vector<double>& f, int i, double dx) {
  const int n = static_cast<int>(f.size());
  if (n < 3) throw std::invalid_argument("fd::d1: need >= 3 nodes");
  if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  if (i == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  return (f[i + 1] - f[i - 1]) / (2.0 * dx);
}

double d2(const std::vector<double>& f, int i, double dx) {
  const int n = static_cast<int>(f.size());
  if (n < 4) throw std::invalid_argument("fd::d2: need >= 4 nodes");
  const double h2 = dx * dx;
  if (i == 0) return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  if (i == n - 1) return (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  return (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
}

double max_abs_slope(const std::vector<double>& f, double dx) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    m = std::max(m, std::fabs(f[i + 1] - f[i]) / dx);
  }
  return m;
}

}  // namespace frontlab::fd
