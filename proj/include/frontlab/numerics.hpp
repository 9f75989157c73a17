#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace frontlab {

/// Tridiagonal solve (Thomas algorithm). lower/upper have size n-1.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

/// Square banded matrix with partial-pivoting Gaussian elimination.
/// Bandwidths kl (sub) and ku (super); pivoting fills in up to kl extra
/// superdiagonals, so storage is allocated for kl + (kl + ku) + 1 bands.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, int kl, int ku);

  double& at(std::size_t i, std::size_t j);
  double at(std::size_t i, std::size_t j) const;
  std::size_t size() const { return n_; }

  /// Solves A x = rhs. Factorizes a copy; the matrix stays reusable.
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::size_t n_;
  int kl_, ku_, ku_work_;
  std::vector<double> data_;  // row-major bands: data_[i * width + (j - i + ku_work_)]
};

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// Handles a < b and a > b (oriented integral).
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol);

/// Safeguarded scalar root finding: Newton steps clipped to a bracket
/// [lo, hi] with bisection fallback. Requires f(lo) and f(hi) of opposite
/// sign (or zero). Converges to |f| <= ftol or bracket width <= xtol.
double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo,
                       double hi, double xtol, double ftol,
                       int max_iter = 200);

/// Plain bisection to near machine precision; test oracle and fallback.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              int iterations = 200);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least-squares straight line through (x, y) pairs.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Piecewise-linear interpolation on sorted abscissae; clamps outside.
double linear_interp(std::span<const double> xs, std::span<const double> ys,
                     double x);

/// Trapezoid rule on a (possibly non-uniform) sample sequence.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace frontlab
