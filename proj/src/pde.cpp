#include "frontlab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "frontlab/fd.hpp"
#include "frontlab/io.hpp"
#include "frontlab/numerics.hpp"

namespace frontlab {

namespace {

constexpr double kDtFloor = 1e-14;

double phi_floor(double eps) { return -500.0 * std::max(1.0, eps); }

// (I - eps*dt*D2) phi_new = rhs with the configured boundary closure.
// The linear-extrapolation closure (zero curvature through the end nodes)
// makes the near-boundary rows collapse to identities, so both closures
// reduce to tridiagonal solves.
std::vector<double> solve_phi_system(const std::vector<double>& rhs, double c,
                                     PhiBc bc) {
  const std::size_t n = rhs.size();
  if (bc == PhiBc::neumann) {
    std::vector<double> lo(n - 1, -c), di(n, 1.0 + 2.0 * c), up(n - 1, -c);
    up[0] = -2.0 * c;
    lo[n - 2] = -2.0 * c;
    return solve_tridiagonal(lo, di, up, rhs);
  }
  if (n < 6) throw std::invalid_argument("solve_phi_system: need >= 6 nodes");
  const std::size_t m = n - 4;  // unknowns 2 .. n-3
  std::vector<double> lo(m - 1, -c), di(m, 1.0 + 2.0 * c), up(m - 1, -c);
  std::vector<double> b(rhs.begin() + 2, rhs.begin() + 2 + m);
  const double phi1 = rhs[1];
  const double phin2 = rhs[n - 2];
  b[0] += c * phi1;
  b[m - 1] += c * phin2;
  const std::vector<double> inner = solve_tridiagonal(lo, di, up, b);
  std::vector<double> out(n);
  out[1] = phi1;
  out[n - 2] = phin2;
  std::copy(inner.begin(), inner.end(), out.begin() + 2);
  out[0] = 2.0 * out[1] - out[2];
  out[n - 1] = 2.0 * out[n - 2] - out[n - 3];
  return out;
}

std::vector<double> solve_neumann_diffusion(const std::vector<double>& rhs, double c) {
  const std::size_t n = rhs.size();
  std::vector<double> lo(n - 1, -c), di(n, 1.0 + 2.0 * c), up(n - 1, -c);
  up[0] = -2.0 * c;
  lo[n - 2] = -2.0 * c;
  return solve_tridiagonal(lo, di, up, rhs);
}

struct DriftGauge {
  std::vector<double> i0;

  static DriftGauge from(const InitialData& init, const ModelParams& p) {
    DriftGauge g;
    const int n = init.grid().n;
    const double dx = init.grid().dx;
    g.i0.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      g.i0[static_cast<std::size_t>(i)] =
          p.eps * init.u0[i] + init.v0[i] - p.mu * init.w0[i] +
          p.eps * p.eps * fd::d2(init.w0.values, i, dx);
    }
    return g;
  }

  double max_drift(const std::vector<double>& u, const std::vector<double>& v,
                   const std::vector<double>& w, const ModelParams& p, double dx,
                   int lo, int hi) const {
    double m = 0.0;
    for (int i = lo; i <= hi; ++i) {
      const double val = p.eps * u[static_cast<std::size_t>(i)] +
                         v[static_cast<std::size_t>(i)] -
                         p.mu * w[static_cast<std::size_t>(i)] +
                         p.eps * p.eps * fd::d2(w, i, dx);
      m = std::max(m, std::fabs(val - i0[static_cast<std::size_t>(i)]));
    }
    return m;
  }
};

struct Stepper {
  const ModelParams& p;
  const SchemeConfig& scheme;
  const Grid1D grid;
  const double floor;
  std::vector<double> phi, w;  // hopf_cole state
  std::vector<double> u, v;    // direct state / derived
  long step_count = 0;

  Stepper(const ModelParams& params, const InitialData& init, const SchemeConfig& sc)
      : p(params), scheme(sc), grid(init.grid()), floor(phi_floor(params.eps)) {
    const std::size_t n = static_cast<std::size_t>(grid.n);
    phi.resize(n);
    w.resize(n);
    u.resize(n);
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      phi[i] = std::max(init.phi0[static_cast<int>(i)], floor);
      w[i] = init.w0[static_cast<int>(i)];
      u[i] = init.u0[static_cast<int>(i)];
      v[i] = init.v0[static_cast<int>(i)];
    }
  }

  bool hopf() const { return scheme.variable_set == VariableSet::hopf_cole; }

  void sync_derived() {
    const std::size_t n = phi.size();
    if (hopf()) {
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::exp(phi[i] / p.eps);
        v[i] = std::exp(w[i]);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::log(v[i]);
        phi[i] = u[i] > 0.0 ? std::max(p.eps * std::log(u[i]), floor) : floor;
      }
    }
  }

  double pick_dt(double t, double t_target) const {
    double dt = scheme.dt_initial;
    if (scheme.adaptive_dt) {
      const double slope = fd::max_abs_slope(phi, grid.dx);
      if (slope > 0.0) dt = std::min(dt, scheme.cfl_safety * grid.dx / slope);
      double reaction = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        reaction = std::max(reaction, std::max(p.eps * u[i], std::fabs(v[i] - p.mu)));
      }
      if (reaction > 0.0) dt = std::min(dt, scheme.cfl_safety * p.eps / reaction);
    }
    return std::min(dt, t_target - t);
  }

  void advance(double dt) {
    if (hopf()) {
      advance_hopf(dt);
    } else {
      advance_direct(dt);
    }
    ++step_count;
  }

  // Symmetric substeps: half consumption / full phi update / half
  // consumption. Each consumption substep is the exact exponential flow of
  // d_t v = -u v with u frozen; the arrangement keeps the pointwise system
  // second order in dt, which the constant-data agreement with the point
  // integrator relies on.
  void advance_hopf(double dt) {
    const std::size_t n = phi.size();
    const double dx = grid.dx;
    for (std::size_t i = 0; i < n; ++i) w[i] -= 0.5 * dt * std::exp(phi[i] / p.eps);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      double grad;
      if (i == 0) {
        grad = (phi[1] - phi[0]) / dx;
      } else if (i == n - 1) {
        grad = (phi[n - 1] - phi[n - 2]) / dx;
      } else {
        grad = (phi[i + 1] - phi[i - 1]) / (2.0 * dx);
      }
      rhs[i] = phi[i] + dt * (grad * grad + std::exp(w[i]) - p.mu);
    }
    phi = solve_phi_system(rhs, p.eps * dt / (dx * dx), scheme.bc_phi);
    for (std::size_t i = 0; i < n; ++i) phi[i] = std::max(phi[i], floor);
    for (std::size_t i = 0; i < n; ++i) w[i] -= 0.5 * dt * std::exp(phi[i] / p.eps);
    sync_derived();
  }

  void advance_direct(double dt) {
    const std::size_t n = u.size();
    const double dx = grid.dx;
    for (std::size_t i = 0; i < n; ++i) v[i] *= std::exp(-0.5 * dt * u[i]);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] = u[i] * (1.0 + 0.5 * dt * (v[i] - p.mu) / p.eps);
    }
    u = solve_neumann_diffusion(rhs, p.eps * dt / (dx * dx));
    for (std::size_t i = 0; i < n; ++i) {
      u[i] *= 1.0 + 0.5 * dt * (v[i] - p.mu) / p.eps;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] *= std::exp(-0.5 * dt * u[i]);
    sync_derived();
  }

  Snapshot make_snapshot(double t) const {
    Snapshot s;
    s.t = t;
    s.u = Field(grid, std::vector<double>(u));
    s.v = Field(grid, std::vector<double>(v));
    s.w = Field(grid, std::vector<double>(w));
    s.phi = Field(grid, std::vector<double>(phi));
    return s;
  }
};

}  // namespace

void SchemeConfig::validate(double t_end) const {
  if (!(dt_initial > 0.0)) throw std::domain_error("SchemeConfig: dt_initial must be > 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw std::domain_error("SchemeConfig: cfl_safety must be in (0, 1]");
  }
  if (snapshot_times.size() < 2) {
    throw std::domain_error("SchemeConfig: need at least 2 snapshot times");
  }
  for (std::size_t k = 0; k + 1 < snapshot_times.size(); ++k) {
    if (!(snapshot_times[k] < snapshot_times[k + 1])) {
      throw std::domain_error("SchemeConfig: snapshot times must increase");
    }
  }
  if (snapshot_times.back() > t_end + 1e-12) {
    throw std::domain_error("SchemeConfig: snapshots beyond t_end");
  }
  if (snapshot_times.front() < 0.0) {
    throw std::domain_error("SchemeConfig: negative snapshot time");
  }
}

std::vector<double> default_snapshot_times(double t_end, int count) {
  if (count < 2) throw std::domain_error("default_snapshot_times: count >= 2");
  std::vector<double> ts(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    ts[static_cast<std::size_t>(k)] = t_end * static_cast<double>(k) / (count - 1);
  }
  return ts;
}

SolutionRecord simulate(const ModelParams& params, const InitialData& init,
                        const SchemeConfig& scheme) {
  params.validate();
  scheme.validate(params.t_end);
  SolutionRecord record;
  record.params = params;
  record.scheme = scheme;

  const Grid1D& g = init.grid();
  if (g.dx > params.eps) {
    record.warnings.push_back("grid coarser than eps: dx = " + fmt17(g.dx) +
                              " > eps = " + fmt17(params.eps) +
                              "; fronts will be under-resolved");
  }

  Stepper st(params, init, scheme);
  st.sync_derived();
  const DriftGauge gauge = DriftGauge::from(init, params);

  double t = 0.0;
  const double t_scale = std::max(1.0, scheme.snapshot_times.back());
  for (double t_snap : scheme.snapshot_times) {
    while (t < t_snap - 1e-12 * t_scale) {
      const double dt = st.pick_dt(t, t_snap);
      if (dt < kDtFloor) {
        throw NumericalError("simulate: step size underflow at t = " + fmt17(t));
      }
      st.advance(dt);
      t += dt;

      const double min_v = *std::min_element(st.v.begin(), st.v.end());
      const double max_u = *std::max_element(st.u.begin(), st.u.end());
      const double min_u = *std::min_element(st.u.begin(), st.u.end());
      const double max_phi = *std::max_element(st.phi.begin(), st.phi.end());
      if (!std::isfinite(min_v) || !std::isfinite(max_u) || !std::isfinite(min_u) ||
          !std::isfinite(max_phi) || !(min_v > 0.0) || min_u < 0.0) {
        throw NumericalError("simulate: field divergence at step " +
                             std::to_string(st.step_count) + ", t = " + fmt17(t));
      }
      record.step_log.t.push_back(t);
      record.step_log.dt.push_back(dt);
      record.step_log.min_v.push_back(min_v);
      record.step_log.max_u.push_back(max_u);
      record.step_log.max_phi.push_back(max_phi);
      record.step_log.drift.push_back(
          gauge.max_drift(st.u, st.v, st.w, params, g.dx, 1, g.n - 2));
    }
    record.snapshots.push_back(st.make_snapshot(t_snap));
  }
  return record;
}

double ResidualReport::worst_max() const {
  return max_norms.empty() ? 0.0 : *std::max_element(max_norms.begin(), max_norms.end());
}

double ResidualReport::worst_l1() const {
  return l1_norms.empty() ? 0.0 : *std::max_element(l1_norms.begin(), l1_norms.end());
}

ResidualReport w_reformulation_residual(const SolutionRecord& record,
                                        const InitialData& init,
                                        const ModelParams& params) {
  if (record.size() < 2) {
    throw std::invalid_argument("w_reformulation_residual: need >= 2 snapshots");
  }
  const Grid1D& g = init.grid();
  const double dx = g.dx;
  const double eps = params.eps;
  ResidualReport report;
  std::vector<double> w0xx(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) {
    w0xx[static_cast<std::size_t>(i)] = fd::d2(init.w0.values, i, dx);
  }

  for (std::size_t k = 0; k + 1 < record.size(); ++k) {
    const Snapshot& a = record.at(k);
    const Snapshot& b = record.at(k + 1);
    const double dt = b.t - a.t;
    Field res(g, 0.0);
    std::vector<double> w_mid(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
      w_mid[static_cast<std::size_t>(i)] = 0.5 * (a.w[i] + b.w[i]);
    }
    double max_norm = 0.0, l1 = 0.0;
    for (int i = 1; i < g.n - 1; ++i) {
      const double wt = (b.w[i] - a.w[i]) / dt;
      const double val = eps * wt - eps * eps * fd::d2(w_mid, i, dx) -
                         qtilde_of_w(w_mid[static_cast<std::size_t>(i)], params.mu) +
                         qtilde_of_w(init.w0[i], params.mu) + eps * init.u0[i] +
                         eps * eps * w0xx[static_cast<std::size_t>(i)];
      res[i] = val;
      max_norm = std::max(max_norm, std::fabs(val));
      l1 += std::fabs(val) * dx;
    }
    report.interval_mid_times.push_back(0.5 * (a.t + b.t));
    report.residuals.push_back(std::move(res));
    report.max_norms.push_back(max_norm);
    report.l1_norms.push_back(l1);
  }
  return report;
}

std::vector<double> invariant_drift(const SolutionRecord& record,
                                    const InitialData& init,
                                    const ModelParams& params) {
  const DriftGauge gauge = DriftGauge::from(init, params);
  const Grid1D& g = init.grid();
  std::vector<double> out;
  out.reserve(record.size());
  for (const Snapshot& s : record.snapshots) {
    out.push_back(gauge.max_drift(s.u.values, s.v.values, s.w.values, params, g.dx,
                                  1, g.n - 2));
  }
  return out;
}

std::vector<double> boundary_invariant_drift(const SolutionRecord& record,
                                             const InitialData& init,
                                             const ModelParams& params,
                                             double margin) {
  const DriftGauge gauge = DriftGauge::from(init, params);
  const Grid1D& g = init.grid();
  const int band = std::max(2, static_cast<int>(margin * g.n));
  std::vector<double> out;
  out.reserve(record.size());
  for (const Snapshot& s : record.snapshots) {
    const double left = gauge.max_drift(s.u.values, s.v.values, s.w.values, params,
                                        g.dx, 1, band);
    const double right = gauge.max_drift(s.u.values, s.v.values, s.w.values, params,
                                         g.dx, g.n - 1 - band, g.n - 2);
    out.push_back(std::max(left, right));
  }
  return out;
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap) {
  CsvWriter csv(path, {"x", "u", "v", "w", "phi"}, {"t = " + fmt17(snap.t)});
  for (int i = 0; i < snap.u.size(); ++i) {
    csv.row({snap.u.grid.node(i), snap.u[i], snap.v[i], snap.w[i], snap.phi[i]});
  }
  csv.close();
}

void write_step_log_csv(const std::filesystem::path& path, const StepLog& log) {
  CsvWriter csv(path, {"t", "dt", "min_v", "max_u", "max_phi", "drift"});
  for (std::size_t i = 0; i < log.t.size(); ++i) {
    csv.row({log.t[i], log.dt[i], log.min_v[i], log.max_u[i], log.max_phi[i],
             log.drift[i]});
  }
  csv.close();
}

namespace {

nlohmann::json params_to_json(const ModelParams& p) {
  return {{"eps", p.eps},         {"mu", p.mu},
          {"x_min", p.x_min},     {"x_max", p.x_max},
          {"n_cells", p.n_cells}, {"t_end", p.t_end},
          {"dx_over_eps", p.dx_over_eps}};
}

ModelParams params_from_json(const nlohmann::json& j) {
  ModelParams p;
  p.eps = j.at("eps");
  p.mu = j.at("mu");
  p.x_min = j.at("x_min");
  p.x_max = j.at("x_max");
  p.n_cells = j.at("n_cells");
  p.t_end = j.at("t_end");
  p.dx_over_eps = j.at("dx_over_eps");
  return p;
}

std::string snapshot_name(std::size_t k) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "snapshot_%04zu.csv", k);
  return buf;
}

}  // namespace

void save_record(const std::filesystem::path& dir, const SolutionRecord& record) {
  std::filesystem::create_directories(dir);
  nlohmann::json meta;
  meta["params"] = params_to_json(record.params);
  meta["scheme"] = {
      {"dt_initial", record.scheme.dt_initial},
      {"cfl_safety", record.scheme.cfl_safety},
      {"variable_set",
       record.scheme.variable_set == VariableSet::hopf_cole ? "hopf_cole" : "direct"},
      {"bc_phi",
       record.scheme.bc_phi == PhiBc::neumann ? "neumann" : "linear_extrapolation"},
      {"adaptive_dt", record.scheme.adaptive_dt},
      {"snapshot_times", record.scheme.snapshot_times}};
  meta["warnings"] = record.warnings;
  meta["n_snapshots"] = record.size();
  std::ofstream out(dir / "meta.json");
  if (!out) throw std::runtime_error("save_record: cannot write meta.json");
  out << meta.dump(2) << "\n";
  out.close();
  for (std::size_t k = 0; k < record.size(); ++k) {
    write_snapshot_csv(dir / snapshot_name(k), record.at(k));
  }
  write_step_log_csv(dir / "step_log.csv", record.step_log);
}

SolutionRecord load_record(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) {
    throw std::runtime_error("load_record: cannot open meta.json in " + dir.string());
  }
  nlohmann::json meta;
  in >> meta;
  SolutionRecord record;
  record.params = params_from_json(meta.at("params"));
  const auto& sj = meta.at("scheme");
  record.scheme.dt_initial = sj.at("dt_initial");
  record.scheme.cfl_safety = sj.at("cfl_safety");
  record.scheme.variable_set = sj.at("variable_set") == "hopf_cole"
                                   ? VariableSet::hopf_cole
                                   : VariableSet::direct;
  record.scheme.bc_phi = sj.at("bc_phi") == "neumann" ? PhiBc::neumann
                                                      : PhiBc::linear_extrapolation;
  record.scheme.adaptive_dt = sj.at("adaptive_dt");
  record.scheme.snapshot_times = sj.at("snapshot_times").get<std::vector<double>>();
  record.warnings = meta.at("warnings").get<std::vector<std::string>>();

  const std::size_t n_snap = meta.at("n_snapshots");
  const Grid1D g = Grid1D::of(record.params);
  for (std::size_t k = 0; k < n_snap; ++k) {
    const CsvTable table = read_csv(dir / snapshot_name(k));
    if (static_cast<int>(table.rows()) != g.n) {
      throw std::runtime_error("load_record: snapshot size mismatch");
    }
    Snapshot s;
    s.t = record.scheme.snapshot_times.at(k);
    s.u = Field(g, table.column("u"));
    s.v = Field(g, table.column("v"));
    s.w = Field(g, table.column("w"));
    s.phi = Field(g, table.column("phi"));
    record.snapshots.push_back(std::move(s));
  }
  const CsvTable log = read_csv(dir / "step_log.csv");
  record.step_log.t = log.column("t");
  record.step_log.dt = log.column("dt");
  record.step_log.min_v = log.column("min_v");
  record.step_log.max_u = log.column("max_u");
  record.step_log.max_phi = log.column("max_phi");
  record.step_log.drift = log.column("drift");
  return record;
}

}  // namespace frontlab
