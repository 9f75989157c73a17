#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace frontlab {

/// Numerical failure inside a solver (divergence, stiffness breakdown, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  double eps = 0.1;    // time-scale ratio of random motion to consumption
  double mu = 1.0;     // nutrient threshold
  double x_min = -6.0;
  double x_max = 8.0;
  int n_cells = 0;     // node count; 0 = derive from dx_over_eps
  double t_end = 3.0;
  double dx_over_eps = 0.25;  // default grid resolution relative to eps

  void validate() const;
  int resolved_n_cells() const;
};

struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n = 2;
  double dx = 1.0;

  static Grid1D uniform(double x_min, double x_max, int n);
  static Grid1D of(const ModelParams& p) {
    return uniform(p.x_min, p.x_max, p.resolved_n_cells());
  }
  double node(int i) const { return x_min + i * dx; }
  std::vector<double> nodes() const;
  /// Index of the node nearest to x.
  int nearest(double x) const;
};

struct Field {
  Grid1D grid;
  std::vector<double> values;

  Field() = default;
  Field(Grid1D g, std::vector<double> v);
  Field(Grid1D g, double fill);
  double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(values.size()); }
  bool all_finite() const;
  double min() const;
  double max() const;
};

/// The two roots w- <= ln(mu) <= w+ of Qtilde(w) = q_level.
struct BranchPair {
  double w_minus = 0.0;
  double w_plus = 0.0;
  double q_level = 0.0;

  double v_minus() const { return std::exp(w_minus); }
  double v_plus() const { return std::exp(w_plus); }
};

/// Q(v) = v - mu ln v. Strictly convex on (0, inf), minimum at v = mu.
double q_of_v(double v, double mu);

/// Qtilde(w) = Q(e^w) = e^w - mu w.
double qtilde_of_w(double w, double mu);

/// Qtilde'(w) = e^w - mu.
double qtilde_prime(double w, double mu);

/// Inverts Qtilde(w) = q_level on both monotone sides of ln(mu).
/// Residual <= 1e-12 * max(1, |q_level|). Levels within 1e-13 (scaled)
/// of the minimum collapse to the double root (ln mu, ln mu); below that,
/// throws std::domain_error.
BranchPair branch_roots(double q_level, double mu);

/// Antiderivative of |Qtilde(w0_node) - Qtilde(s)| from ln(mu) to w,
/// gauge-fixed so the value at w = ln(mu) is 0. Non-decreasing in w.
double phi_potential(double w, double w0_node, double mu);

struct InitialData {
  Field u0;    // may underflow to 0 where phi0/eps is very negative
  Field v0;
  Field phi0;  // eps * ln(u0); the authoritative datum for small u0
  Field w0;    // ln(v0)
  std::vector<BranchPair> branch0;  // roots of Qtilde = Qtilde(w0) per node

  const Grid1D& grid() const { return v0.grid; }
};

/// Builds derived fields from (u0, v0). u0 must be strictly positive.
InitialData make_initial_data(const ModelParams& p, Field u0, Field v0);

/// Builds from (phi0, v0); u0 = exp(phi0/eps) (flushes to 0 harmlessly).
InitialData make_initial_data_from_phi(const ModelParams& p, Field phi0, Field v0);

struct ValidationEntry {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
  bool checked = true;  // false = informational entry, no pass criterion
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool all_pass() const;
  const ValidationEntry& entry(const std::string& name) const;
};

struct ValidationThresholds {
  double generic_c = 100.0;  // ceiling for every bounded-by-a-constant check
};

/// Checks every initial-data assumption the analysis relies on and reports
/// the computed constants. Derivative-based checks exclude a 2-node
/// neighborhood of the declared threshold crossing, where the datum is
/// allowed to be discontinuous; the global values are reported alongside.
ValidationReport validate_initial_data(const InitialData& init, const ModelParams& p,
                                       const ValidationThresholds& thresholds = {});

}  // namespace frontlab
