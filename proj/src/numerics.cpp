#include "frontlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frontlab {

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n - 1 || upper.size() != n - 1 ||
      rhs.size() != n) {
    throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
  }
  std::vector<double> c(n), d(n);
  double beta = diag[0];
  if (beta == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  c[0] = upper.empty() ? 0.0 : upper[0] / beta;
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    beta = diag[i] - lower[i - 1] * c[i - 1];
    if (beta == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[i] = (i < n - 1) ? upper[i] / beta : 0.0;
    d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

BandedMatrix::BandedMatrix(std::size_t n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ku_work_(kl + ku) {
  data_.assign(n_ * static_cast<std::size_t>(kl_ + ku_work_ + 1), 0.0);
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  const long off = static_cast<long>(j) - static_cast<long>(i) + ku_work_;
  if (off < 0 || off > kl_ + ku_work_) {
    throw std::out_of_range("BandedMatrix::at outside band");
  }
  return data_[i * (kl_ + ku_work_ + 1) + off];
}

double BandedMatrix::at(std::size_t i, std::size_t j) const {
  return const_cast<BandedMatrix*>(this)->at(i, j);
}

std::vector<double> BandedMatrix::solve(std::span<const double> rhs) const {
  if (rhs.size() != n_) throw std::invalid_argument("BandedMatrix: rhs size");
  const int width = kl_ + ku_work_ + 1;
  std::vector<double> a(data_);
  std::vector<double> x(rhs.begin(), rhs.end());
  std::vector<std::size_t> perm_row(n_);
  auto band = [&](std::size_t i, std::size_t j) -> double& {
    return a[i * width + (static_cast<long>(j) - static_cast<long>(i) + ku_work_)];
  };

  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last = std::min(n_ - 1, k + static_cast<std::size_t>(kl_));
    std::size_t piv = k;
    double pmax = std::fabs(band(k, k));
    for (std::size_t i = k + 1; i <= last; ++i) {
      const double v = std::fabs(band(i, k));
      if (v > pmax) {
        pmax = v;
        piv = i;
      }
    }
    if (pmax == 0.0) throw std::runtime_error("BandedMatrix: singular matrix");
    if (piv != k) {
      const std::size_t jmax = std::min(n_ - 1, k + static_cast<std::size_t>(ku_work_));
      for (std::size_t j = k; j <= jmax; ++j) std::swap(band(k, j), band(piv, j));
      std::swap(x[k], x[piv]);
    }
    perm_row[k] = piv;
    const std::size_t jmax = std::min(n_ - 1, k + static_cast<std::size_t>(ku_work_));
    for (std::size_t i = k + 1; i <= last; ++i) {
      const double m = band(i, k) / band(k, k);
      band(i, k) = 0.0;
      for (std::size_t j = k + 1; j <= jmax; ++j) band(i, j) -= m * band(k, j);
      x[i] -= m * x[k];
    }
  }
  for (std::size_t i = n_; i-- > 0;) {
    const std::size_t jmax = std::min(n_ - 1, i + static_cast<std::size_t>(ku_work_));
    double s = x[i];
    for (std::size_t j = i + 1; j <= jmax; ++j) s -= band(i, j) * x[j];
    x[i] = s / band(i, i);
  }
  return x;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  if (a == b) return 0.0;
  const double sign = (a < b) ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double m = 0.5 * (lo + hi);
  const double flo = f(lo), fhi = f(hi), fm = f(m);
  const double whole = simpson(lo, flo, hi, fhi, fm);
  return sign * adaptive_step(f, lo, flo, hi, fhi, m, fm, whole, tol, 48);
}

double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double lo,
                       double hi, double xtol, double ftol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw std::invalid_argument("solve_bracketed: endpoints do not bracket");
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int it = 0; it < max_iter; ++it) {
    if (std::fabs(fx) <= ftol) return x;
    if (fx * flo < 0.0) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    if (hi - lo <= xtol) return 0.5 * (lo + hi);
    const double d = df(x);
    double x_next;
    if (d != 0.0) {
      x_next = x - fx / d;
      if (!(x_next > lo && x_next < hi)) x_next = 0.5 * (lo + hi);
    } else {
      x_next = 0.5 * (lo + hi);
    }
    x = x_next;
    fx = f(x);
  }
  return x;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              int iterations) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw std::invalid_argument("bisect: endpoints do not bracket a root");
  }
  for (int i = 0; i < iterations; ++i) {
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (flo * fm < 0.0) {
      hi = m;
      fhi = fm;
    } else {
      lo = m;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need >= 2 points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  LineFit fit;
  if (denom == 0.0) {
    fit.slope = 0.0;
    fit.intercept = sy / n;
  } else {
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_residual = std::max(
        fit.max_residual, std::fabs(y[i] - fit.slope * x[i] - fit.intercept));
  }
  return fit;
}

double linear_interp(std::span<const double> xs, std::span<const double> ys,
                     double x) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw std::invalid_argument("linear_interp: inconsistent sizes");
  }
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - t) * ys[i - 1] + t * ys[i];
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: sizes");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  }
  return s;
}

}  // namespace frontlab
