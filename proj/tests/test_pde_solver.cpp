#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "frontlab/fd.hpp"
#include "frontlab/ode.hpp"
#include "frontlab/pde.hpp"
#include "frontlab/scenario.hpp"

using namespace frontlab;

namespace {

ModelParams step_params(double eps, double x_min = -3.0, double x_max = 4.0,
                        double t_end = 2.0) {
  ModelParams p;
  p.eps = eps;
  p.mu = 1.0;
  p.x_min = x_min;
  p.x_max = x_max;
  p.t_end = t_end;
  return p;
}

SchemeConfig quick_scheme(double t_end, int snaps = 21) {
  SchemeConfig sc;
  sc.snapshot_times = default_snapshot_times(t_end, snaps);
  return sc;
}

}  // namespace

TEST_CASE("vanishing cell density leaves the nutrient frozen") {
  ModelParams p = step_params(0.1);
  const Grid1D g = Grid1D::of(p);
  Field phi0(g, -500.0);  // u0 = exp(-5000): identically zero in doubles
  Field v0(g, 0.0);
  for (int i = 0; i < g.n; ++i) v0[i] = g.node(i) < 0.0 ? 0.5 : 2.0;
  const InitialData init = make_initial_data_from_phi(p, phi0, v0);
  for (VariableSet mode : {VariableSet::hopf_cole, VariableSet::direct}) {
    SchemeConfig sc = quick_scheme(p.t_end, 5);
    sc.variable_set = mode;
    const SolutionRecord rec = simulate(p, init, sc);
    for (const Snapshot& s : rec.snapshots) {
      for (int i = 0; i < g.n; ++i) {
        CHECK(s.v[i] == doctest::Approx(v0[i]).epsilon(1e-12));
      }
    }
    const ResidualReport res = w_reformulation_residual(rec, init, p);
    CHECK(res.worst_max() <= 1e-13);
  }
}

TEST_CASE("constant-in-x run reproduces the point integrator") {
  // diffusion of constants vanishes, so the grid solution must follow the
  // pointwise dynamics at every node
  ModelParams p = step_params(0.1, -1.0, 1.0, 5.0);
  p.n_cells = 11;
  const Grid1D g = Grid1D::of(p);
  const InitialData init = make_initial_data(p, Field(g, 1.0), Field(g, 2.0));

  SchemeConfig sc = quick_scheme(p.t_end, 6);
  sc.adaptive_dt = false;
  sc.dt_initial = 1e-4;
  const SolutionRecord rec = simulate(p, init, sc);

  for (std::size_t k = 1; k < rec.size(); ++k) {
    const double t = rec.at(k).t;
    const auto traj = integrate_point(p, 1.0, 2.0, t, 1e-9);
    const double v_ref = traj.v_values.back();
    for (int i = 0; i < g.n; ++i) {
      CHECK(rec.at(k).v[i] == doctest::Approx(v_ref).epsilon(2e-7));
    }
  }
}

TEST_CASE("step datum: spike travels with a monotone nutrient front") {
  ModelParams p = step_params(0.05, -2.0, 4.0, 2.0);
  const InitialData init = build_initial_data(p, InitSpec{});
  const SolutionRecord rec = simulate(p, init, quick_scheme(p.t_end, 11));
  const Snapshot& last = rec.snapshots.back();
  const Grid1D& g = init.grid();

  // one interior maximum of u, well above any residual bumps
  const double u_max = last.u.max();
  int peaks = 0;
  int peak_node = -1;
  for (int i = 1; i < g.n - 1; ++i) {
    if (last.u[i] > last.u[i - 1] && last.u[i] >= last.u[i + 1] &&
        last.u[i] > 0.01 * u_max) {
      ++peaks;
      peak_node = i;
    }
  }
  CHECK(peaks == 1);
  CHECK(g.node(peak_node) > 0.5);  // moved to the right

  // v monotone across the spike
  for (int i = std::max(1, peak_node - static_cast<int>(0.5 / g.dx));
       i < std::min(g.n - 1, peak_node + static_cast<int>(0.5 / g.dx)); ++i) {
    CHECK(last.v[i + 1] >= last.v[i] - 1e-9);
  }

  // v never increases in time, u and v stay positive
  for (std::size_t k = 1; k < rec.size(); ++k) {
    for (int i = 0; i < g.n; ++i) {
      CHECK(rec.at(k).v[i] <= rec.at(k - 1).v[i] + 1e-12);
      CHECK(rec.at(k).v[i] > 0.0);
      CHECK(rec.at(k).u[i] >= 0.0);
    }
  }

  // u = exp(phi/eps) to round-off in hopf_cole mode
  for (int i = 0; i < g.n; ++i) {
    CHECK(last.u[i] == doctest::Approx(std::exp(last.phi[i] / p.eps)).epsilon(1e-14));
  }
}

TEST_CASE("invariant drift vanishes at t = 0 and shrinks under refinement") {
  const double eps = 0.1;
  std::vector<double> drifts;
  for (int level = 0; level < 2; ++level) {
    ModelParams p = step_params(eps, -2.0, 3.0, 1.0);
    p.dx_over_eps = 0.5 / (1 << level);
    SchemeConfig sc = quick_scheme(p.t_end, 6);
    sc.adaptive_dt = false;
    sc.dt_initial = 4e-3 / (1 << level);
    const InitialData init = build_initial_data(p, InitSpec{});
    const SolutionRecord rec = simulate(p, init, sc);
    const auto drift = invariant_drift(rec, init, p);
    CHECK(drift.front() == doctest::Approx(0.0));
    drifts.push_back(*std::max_element(drift.begin(), drift.end()));
  }
  CHECK(drifts[0] / drifts[1] >= 1.7);
}

TEST_CASE("constant-in-x invariant drift equals the pointwise first-integral drift") {
  ModelParams p = step_params(0.1, -1.0, 1.0, 2.0);
  p.n_cells = 11;
  const Grid1D g = Grid1D::of(p);
  const InitialData init = make_initial_data(p, Field(g, 0.5), Field(g, 2.0));
  SchemeConfig sc = quick_scheme(p.t_end, 5);
  sc.adaptive_dt = false;
  sc.dt_initial = 1e-3;
  const SolutionRecord rec = simulate(p, init, sc);
  const auto drift = invariant_drift(rec, init, p);
  // spatial terms vanish, so the drift is purely the time-stepping error
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const Snapshot& s = rec.at(k);
    const double pointwise = std::fabs(
        p.eps * s.u[5] + q_of_v(s.v[5], p.mu) - (p.eps * 0.5 + q_of_v(2.0, p.mu)));
    CHECK(drift[k] == doctest::Approx(pointwise).epsilon(1e-10));
  }
}

TEST_CASE("reformulation residual shrinks under refinement and across modes") {
  const double eps = 0.1;
  std::vector<double> norms;
  for (int level = 0; level < 2; ++level) {
    ModelParams p = step_params(eps, -2.0, 3.0, 1.0);
    p.dx_over_eps = 0.5 / (1 << level);
    SchemeConfig sc = quick_scheme(p.t_end, 21);
    sc.adaptive_dt = false;
    sc.dt_initial = 4e-3 / (1 << level);
    const InitialData init = build_initial_data(p, InitSpec{});
    const SolutionRecord rec = simulate(p, init, sc);
    norms.push_back(w_reformulation_residual(rec, init, p).worst_l1());
  }
  CHECK(norms[0] / norms[1] >= 1.7);

  // direct vs hopf_cole at eps = 0.1: same residual scale once both run at
  // a common resolved step
  ModelParams p = step_params(eps, -2.0, 3.0, 1.0);
  const InitialData init = build_initial_data(p, InitSpec{});
  SchemeConfig sc = quick_scheme(p.t_end, 21);
  sc.adaptive_dt = false;
  sc.dt_initial = 5e-4;
  double l1[2];
  int idx = 0;
  for (VariableSet mode : {VariableSet::hopf_cole, VariableSet::direct}) {
    sc.variable_set = mode;
    const SolutionRecord rec = simulate(p, init, sc);
    l1[idx++] = w_reformulation_residual(rec, init, p).worst_l1();
  }
  const double ratio = l1[0] > l1[1] ? l1[0] / l1[1] : l1[1] / l1[0];
  CHECK(ratio <= 3.0);
}

TEST_CASE("hopf_cole and direct modes agree on the nutrient") {
  ModelParams p = step_params(0.1, -2.0, 3.0, 1.5);
  const InitialData init = build_initial_data(p, InitSpec{});
  const Grid1D& g = init.grid();
  SchemeConfig sc = quick_scheme(p.t_end, 4);
  sc.adaptive_dt = false;
  sc.dt_initial = 1e-3;
  sc.variable_set = VariableSet::hopf_cole;
  const SolutionRecord a = simulate(p, init, sc);
  sc.variable_set = VariableSet::direct;
  const SolutionRecord b = simulate(p, init, sc);
  double l1 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    l1 += std::fabs(a.snapshots.back().v[i] - b.snapshots.back().v[i]) * g.dx;
  }
  CHECK(l1 <= 5.0 * g.dx);
}

TEST_CASE("phi boundary closures behave as configured") {
  ModelParams p = step_params(0.1, -3.0, 3.0, 1.0);
  const InitialData init = build_initial_data(p, InitSpec{});
  SchemeConfig sc = quick_scheme(p.t_end, 3);

  sc.bc_phi = PhiBc::linear_extrapolation;
  const SolutionRecord rec = simulate(p, init, sc);
  const Snapshot& s = rec.snapshots.back();
  // zero curvature at the ends: the linear wings survive
  const int n = s.phi.size();
  CHECK(std::fabs(s.phi[0] - 2.0 * s.phi[1] + s.phi[2]) <= 1e-9);
  CHECK(std::fabs(s.phi[n - 1] - 2.0 * s.phi[n - 2] + s.phi[n - 3]) <= 1e-9);
  // left wing of phi = -|x| keeps its positive slope instead of flattening
  const double slope_left = (s.phi[1] - s.phi[0]) / init.grid().dx;
  CHECK(slope_left > 0.1);

  sc.bc_phi = PhiBc::neumann;
  const SolutionRecord rec2 = simulate(p, init, sc);
  const Snapshot& s2 = rec2.snapshots.back();
  const double slope2 = (s2.phi[1] - s2.phi[0]) / init.grid().dx;
  CHECK(std::fabs(slope2) < std::fabs(slope_left));
}

TEST_CASE("simulate reports under-resolution and rejects bad schemes") {
  ModelParams p = step_params(0.05, -1.0, 1.0, 0.5);
  p.n_cells = 15;  // dx = 0.14 > eps
  const Grid1D g = Grid1D::of(p);
  const InitialData init = make_initial_data(p, Field(g, 0.1), Field(g, 2.0));
  const SolutionRecord rec = simulate(p, init, quick_scheme(p.t_end, 3));
  CHECK(rec.warnings.size() == 1);

  SchemeConfig bad = quick_scheme(p.t_end, 3);
  bad.snapshot_times.push_back(p.t_end - 0.1);  // not increasing
  CHECK_THROWS_AS(simulate(p, init, bad), std::domain_error);

  SchemeConfig beyond = quick_scheme(2.0 * p.t_end, 3);
  CHECK_THROWS_AS(simulate(p, init, beyond), std::domain_error);

  CHECK_THROWS_AS(w_reformulation_residual(SolutionRecord{}, init, p),
                  std::invalid_argument);
}

TEST_CASE("divergent configuration raises a numerical error") {
  ModelParams p = step_params(0.01, -1.0, 1.0, 1.0);
  p.n_cells = 21;
  const Grid1D g = Grid1D::of(p);
  const InitialData init = make_initial_data(p, Field(g, 10.0), Field(g, 2.0));
  SchemeConfig sc = quick_scheme(p.t_end, 3);
  sc.variable_set = VariableSet::direct;
  sc.adaptive_dt = false;
  sc.dt_initial = 0.5;  // wildly exceeds the reaction scale
  CHECK_THROWS_AS(simulate(p, init, sc), NumericalError);
}

TEST_CASE("record save/load round-trips exactly") {
  ModelParams p = step_params(0.1, -1.0, 2.0, 0.5);
  const InitialData init = build_initial_data(p, InitSpec{});
  const SolutionRecord rec = simulate(p, init, quick_scheme(p.t_end, 4));

  const auto dir = std::filesystem::temp_directory_path() / "frontlab_record_test";
  std::filesystem::remove_all(dir);
  save_record(dir, rec);
  const SolutionRecord back = load_record(dir);

  REQUIRE(back.size() == rec.size());
  CHECK(back.params.eps == rec.params.eps);
  for (std::size_t k = 0; k < rec.size(); ++k) {
    for (int i = 0; i < rec.at(k).u.size(); ++i) {
      CHECK(back.at(k).u[i] == rec.at(k).u[i]);
      CHECK(back.at(k).v[i] == rec.at(k).v[i]);
      CHECK(back.at(k).w[i] == rec.at(k).w[i]);
      CHECK(back.at(k).phi[i] == rec.at(k).phi[i]);
    }
  }
  CHECK(back.step_log.t.size() == rec.step_log.t.size());
  std::filesystem::remove_all(dir);
}
