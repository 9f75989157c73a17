#include "frontlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frontlab/fd.hpp"
#include "frontlab/numerics.hpp"

namespace frontlab {

void ModelParams::validate() const {
  if (!(eps > 0.0)) throw std::domain_error("ModelParams: eps must be > 0");
  if (!(mu > 0.0)) throw std::domain_error("ModelParams: mu must be > 0");
  if (!(x_min < x_max)) throw std::domain_error("ModelParams: x_min must be < x_max");
  if (resolved_n_cells() < 3) throw std::domain_error("ModelParams: need >= 3 grid nodes");
  if (!(t_end > 0.0)) throw std::domain_error("ModelParams: t_end must be > 0");
}

int ModelParams::resolved_n_cells() const {
  if (n_cells > 0) return n_cells;
  const double dx = dx_over_eps * eps;
  return std::max(3, static_cast<int>(std::ceil((x_max - x_min) / dx)) + 1);
}

Grid1D Grid1D::uniform(double x_min, double x_max, int n) {
  if (n < 2 || !(x_min < x_max)) throw std::domain_error("Grid1D: bad parameters");
  Grid1D g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.dx = (x_max - x_min) / (n - 1);
  return g;
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = node(i);
  return xs;
}

int Grid1D::nearest(double x) const {
  const int i = static_cast<int>(std::lround((x - x_min) / dx));
  return std::clamp(i, 0, n - 1);
}

Field::Field(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.n) {
    throw std::invalid_argument("Field: value count does not match grid");
  }
}

Field::Field(Grid1D g, double fill) : grid(g), values(static_cast<std::size_t>(g.n), fill) {}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

double Field::min() const { return *std::min_element(values.begin(), values.end()); }
double Field::max() const { return *std::max_element(values.begin(), values.end()); }

double q_of_v(double v, double mu) {
  if (!(v > 0.0)) throw std::domain_error("q_of_v: v must be > 0");
  if (!(mu > 0.0)) throw std::domain_error("q_of_v: mu must be > 0");
  return v - mu * std::log(v);
}

double qtilde_of_w(double w, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("qtilde_of_w: mu must be > 0");
  const double q = std::exp(w) - mu * w;
  if (std::isinf(q)) throw std::range_error("qtilde_of_w: overflow");
  return q;
}

double qtilde_prime(double w, double mu) { return std::exp(w) - mu; }

BranchPair branch_roots(double q_level, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("branch_roots: mu must be > 0");
  const double w_mu = std::log(mu);
  const double q_min = mu - mu * w_mu;
  const double tol = 1e-13 * std::max(1.0, std::fabs(q_min));
  if (q_level < q_min - tol) {
    throw std::domain_error("branch_roots: level below the minimum of Qtilde");
  }
  BranchPair pair;
  pair.q_level = q_level;
  if (q_level <= q_min + tol) {
    pair.w_minus = pair.w_plus = w_mu;
    return pair;
  }

  // Iterate down to round-off: near-degenerate levels have a tiny slope, so
  // a residual-only stop would leave the root orders of magnitude less
  // accurate than the bracket allows.
  const double f_tol = 4e-16 * std::max(1.0, std::fabs(q_level));
  auto f = [&](double w) { return qtilde_of_w(w, mu) - q_level; };
  auto df = [&](double w) { return qtilde_prime(w, mu); };

  // Qtilde is strictly decreasing left of ln(mu); widen until bracketed.
  double off_left = 60.0 / mu;
  while (qtilde_of_w(w_mu - off_left, mu) < q_level) {
    off_left *= 2.0;
    if (off_left > 1e12) throw std::domain_error("branch_roots: level out of range");
  }
  pair.w_minus = solve_bracketed(f, df, w_mu - off_left, w_mu, 1e-14, f_tol);

  double off_right = 60.0;
  while (qtilde_of_w(w_mu + off_right, mu) < q_level) {
    off_right *= 2.0;
    if (off_right > 1e4) throw std::domain_error("branch_roots: level out of range");
  }
  pair.w_plus = solve_bracketed(f, df, w_mu, w_mu + off_right, 1e-14, f_tol);
  return pair;
}

double phi_potential(double w, double w0_node, double mu) {
  const double q0 = qtilde_of_w(w0_node, mu);
  auto integrand = [&](double s) { return std::fabs(q0 - qtilde_of_w(s, mu)); };
  return integrate_adaptive(integrand, std::log(mu), w, 1e-10);
}

namespace {

Field log_field(const Field& f, const char* what) {
  Field out(f.grid, 0.0);
  for (int i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0)) {
      throw std::domain_error(std::string(what) + ": values must be > 0");
    }
    out[i] = std::log(f[i]);
  }
  return out;
}

std::vector<BranchPair> branches_of(const Field& w0, double mu) {
  std::vector<BranchPair> out(static_cast<std::size_t>(w0.size()));
  for (int i = 0; i < w0.size(); ++i) {
    out[static_cast<std::size_t>(i)] = branch_roots(qtilde_of_w(w0[i], mu), mu);
  }
  return out;
}

}  // namespace

InitialData make_initial_data(const ModelParams& p, Field u0, Field v0) {
  p.validate();
  if (u0.grid.n != v0.grid.n) throw std::invalid_argument("initial data: grid mismatch");
  InitialData init;
  init.phi0 = Field(u0.grid, 0.0);
  for (int i = 0; i < u0.size(); ++i) {
    if (!(u0[i] > 0.0)) throw std::domain_error("initial data: u0 must be > 0");
    init.phi0[i] = p.eps * std::log(u0[i]);
  }
  init.w0 = log_field(v0, "initial data v0");
  init.branch0 = branches_of(init.w0, p.mu);
  init.u0 = std::move(u0);
  init.v0 = std::move(v0);
  return init;
}

InitialData make_initial_data_from_phi(const ModelParams& p, Field phi0, Field v0) {
  p.validate();
  if (phi0.grid.n != v0.grid.n) throw std::invalid_argument("initial data: grid mismatch");
  if (!phi0.all_finite()) throw std::domain_error("initial data: phi0 must be finite");
  InitialData init;
  init.u0 = Field(phi0.grid, 0.0);
  for (int i = 0; i < phi0.size(); ++i) {
    init.u0[i] = std::exp(phi0[i] / p.eps);  // flush-to-zero is acceptable
  }
  init.w0 = log_field(v0, "initial data v0");
  init.branch0 = branches_of(init.w0, p.mu);
  init.phi0 = std::move(phi0);
  init.v0 = std::move(v0);
  return init;
}

bool ValidationReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ValidationEntry& e) { return !e.checked || e.pass; });
}

const ValidationEntry& ValidationReport::entry(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("ValidationReport: no entry '" + name + "'");
}

ValidationReport validate_initial_data(const InitialData& init, const ModelParams& p,
                                       const ValidationThresholds& thr) {
  p.validate();
  const Grid1D& g = init.grid();
  const int n = g.n;
  const double dx = g.dx;
  const double C = thr.generic_c;
  ValidationReport report;
  auto checked = [&](std::string name, double value, double threshold, bool pass) {
    report.entries.push_back({std::move(name), value, threshold, pass, true});
  };
  auto info = [&](std::string name, double value) {
    report.entries.push_back({std::move(name), value, 0.0, true, false});
  };

  // Threshold crossings of v0 - mu; derivative checks skip their vicinity.
  std::vector<int> crossings;
  std::vector<bool> near_interface(static_cast<std::size_t>(n), false);
  int upward = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const double a = init.v0[i] - p.mu;
    const double b = init.v0[i + 1] - p.mu;
    if (a == 0.0 || a * b < 0.0) {
      crossings.push_back(i);
      if (b > a) ++upward;
      for (int k = i - 1; k <= i + 2; ++k) {
        if (k >= 0 && k < n) near_interface[static_cast<std::size_t>(k)] = true;
      }
    }
  }

  const bool u0_positive = init.phi0.all_finite();
  checked("u0_positive", init.u0.min(), 0.0, u0_positive);

  double phi_consistency = 0.0;
  for (int i = 0; i < n; ++i) {
    if (init.u0[i] > 0.0) {
      phi_consistency = std::max(
          phi_consistency, std::fabs(init.phi0[i] - p.eps * std::log(init.u0[i])));
    }
  }
  checked("phi0_consistency", phi_consistency, 1e-12, phi_consistency <= 1e-12);

  const double sup_eps_u0 = p.eps * init.u0.max();
  checked("sup_eps_u0", sup_eps_u0, C, sup_eps_u0 <= C);

  double mass = 0.0;
  for (int i = 0; i + 1 < n; ++i) mass += 0.5 * (init.u0[i] + init.u0[i + 1]) * dx;
  checked("mass_u0", mass, C, mass <= C);

  double eps_d2_phi_upper = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    eps_d2_phi_upper = std::max(eps_d2_phi_upper, p.eps * fd::d2(init.phi0.values, i, dx));
  }
  checked("eps_d2_phi0_upper", eps_d2_phi_upper, C, eps_d2_phi_upper <= C);

  const double lip_phi = fd::max_abs_slope(init.phi0.values, dx);
  checked("lipschitz_phi0", lip_phi, C, lip_phi <= C);

  double phi_linear_c = 0.0;
  for (int i = 0; i < n; ++i) {
    phi_linear_c = std::max(phi_linear_c, -init.phi0[i] / (1.0 + std::fabs(g.node(i))));
  }
  checked("phi0_linear_lower", phi_linear_c, C, phi_linear_c <= C);

  // Regularity of ln v0, away from the declared discontinuity.
  double d2w_smooth = 0.0, d2w_global = 0.0;
  double dw_smooth = 0.0, dw_global = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a2 = std::fabs(fd::d2(init.w0.values, i, dx));
    const double a1 = std::fabs(fd::d1(init.w0.values, i, dx));
    d2w_global = std::max(d2w_global, a2);
    dw_global = std::max(dw_global, a1);
    if (!near_interface[static_cast<std::size_t>(i)]) {
      d2w_smooth = std::max(d2w_smooth, a2);
      dw_smooth = std::max(dw_smooth, a1);
    }
  }
  double w_abs = 0.0;
  for (int i = 0; i < n; ++i) w_abs = std::max(w_abs, std::fabs(init.w0[i]));
  checked("eps_d2_ln_v0", p.eps * d2w_smooth, C, p.eps * d2w_smooth <= C);
  info("eps_d2_ln_v0_global", p.eps * d2w_global);
  checked("lnv0_c1", dw_smooth + w_abs, C, dw_smooth + w_abs <= C);
  info("lnv0_c1_global", dw_global + w_abs);

  // eps * (w0 - w0_minus)'' + u0 bounded above.
  std::vector<double> excess(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    excess[static_cast<std::size_t>(i)] =
        init.w0[i] - init.branch0[static_cast<std::size_t>(i)].w_minus;
  }
  double bound12 = -std::numeric_limits<double>::infinity();
  double bound12_global = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double q = p.eps * fd::d2(excess, i, dx) + init.u0[i];
    bound12_global = std::max(bound12_global, q);
    if (!near_interface[static_cast<std::size_t>(i)]) bound12 = std::max(bound12, q);
  }
  checked("bound12", bound12, C, bound12 <= C);
  info("bound12_global", bound12_global);

  const double v_m = init.v0.min();
  const double v_M = init.v0.max();
  info("v_m", v_m);
  info("v_M", v_M);
  checked("threshold_between", p.mu, 0.0, v_m < p.mu && p.mu < v_M);
  checked("single_increasing_crossing", static_cast<double>(crossings.size()), 1.0,
          crossings.size() == 1 && upward == 1);

  info("min_w0", init.w0.min());
  info("rho0_mass", mass);
  return report;
}

}  // namespace frontlab
