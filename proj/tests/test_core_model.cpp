#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frontlab/model.hpp"
#include "frontlab/numerics.hpp"

using namespace frontlab;

namespace {

// Independent oracle: plain bisection for the roots of Qtilde(w) = q.
double oracle_root(double q, double mu, double lo, double hi) {
  return bisect([&](double w) { return qtilde_of_w(w, mu) - q; }, lo, hi, 200);
}

// Independent oracle: midpoint-rule quadrature with a fixed panel count.
double oracle_phi_potential(double w, double w0, double mu, long panels) {
  const double a = std::log(mu);
  const double q0 = qtilde_of_w(w0, mu);
  const double h = (w - a) / static_cast<double>(panels);
  double s = 0.0;
  for (long k = 0; k < panels; ++k) {
    const double mid = a + (static_cast<double>(k) + 0.5) * h;
    s += std::fabs(q0 - qtilde_of_w(mid, mu));
  }
  return s * h;
}

}  // namespace

TEST_CASE("q_of_v basic values") {
  CHECK(q_of_v(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // global minimum at v = mu
  const double mu = 0.7;
  const double qmin = mu - mu * std::log(mu);
  CHECK(q_of_v(mu, mu) == doctest::Approx(qmin).epsilon(1e-15));
  for (double v : {0.01, 0.3, 0.69, 0.71, 2.0, 50.0}) {
    CHECK(q_of_v(v, mu) >= qmin - 1e-14);
  }
  CHECK(q_of_v(2.0, 1.0) == doctest::Approx(2.0 - std::log(2.0)).epsilon(1e-15));
  CHECK(q_of_v(2.0, 1.0) == doctest::Approx(qtilde_of_w(std::log(2.0), 1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(q_of_v(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(q_of_v(-1.0, 1.0), std::domain_error);
}

TEST_CASE("qtilde_of_w basic values") {
  CHECK(qtilde_of_w(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double mu = 2.5;
  CHECK(qtilde_of_w(std::log(mu), mu) ==
        doctest::Approx(mu - mu * std::log(mu)).epsilon(1e-15));
  CHECK(qtilde_of_w(1.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK_THROWS_AS(qtilde_of_w(1e4, 1.0), std::range_error);
}

TEST_CASE("qtilde matches q_of_v through w = ln v") {
  for (double w = -20.0; w <= 5.0; w += 0.37) {
    for (double mu : {0.3, 1.0, 4.0}) {
      CHECK(qtilde_of_w(w, mu) ==
            doctest::Approx(q_of_v(std::exp(w), mu)).epsilon(1e-14));
    }
  }
}

TEST_CASE("qtilde_prime") {
  CHECK(qtilde_prime(std::log(3.0), 3.0) == doctest::Approx(0.0));
  CHECK(qtilde_prime(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(qtilde_prime(1.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
}

TEST_CASE("branch_roots degenerate level") {
  const auto pair = branch_roots(1.0, 1.0);  // Qtilde(0, 1) = 1 is the minimum
  CHECK(pair.w_minus == doctest::Approx(0.0));
  CHECK(pair.w_plus == doctest::Approx(0.0));
  CHECK_THROWS_AS(branch_roots(1.0 - 1e-6, 1.0), std::domain_error);
}

TEST_CASE("branch_roots against bisection oracle, spot values") {
  const double q1 = std::exp(1.0) - 1.0;
  const auto p1 = branch_roots(q1, 1.0);
  CHECK(p1.w_plus == doctest::Approx(1.0).epsilon(1e-13));
  const double w_minus_oracle = oracle_root(q1, 1.0, -10.0, 0.0);
  CHECK(p1.w_minus == doctest::Approx(w_minus_oracle).epsilon(1e-12));
  CHECK(p1.w_minus == doctest::Approx(-1.494).epsilon(1e-3));

  const double q2 = 2.0 - std::log(2.0);
  const auto p2 = branch_roots(q2, 1.0);
  CHECK(p2.w_plus == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  const double v_minus_oracle =
      bisect([&](double v) { return v - std::log(v) - q2; }, 1e-8, 1.0, 200);
  CHECK(p2.v_minus() == doctest::Approx(v_minus_oracle).epsilon(1e-12));
  CHECK(p2.v_minus() == doctest::Approx(0.4065).epsilon(1e-4));
}

TEST_CASE("branch_roots: 1000 seeded random levels match the oracle") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> log_mu(-1.0, 1.0);
  std::uniform_real_distribution<double> log_gap(-6.0, 1.5);
  for (int k = 0; k < 1000; ++k) {
    const double mu = std::pow(10.0, log_mu(rng));
    const double w_mu = std::log(mu);
    const double q = mu - mu * w_mu + std::pow(10.0, log_gap(rng));
    const auto pair = branch_roots(q, mu);

    const double scale = std::max(1.0, std::fabs(q));
    CHECK(std::fabs(qtilde_of_w(pair.w_minus, mu) - q) <= 1e-12 * scale);
    CHECK(std::fabs(qtilde_of_w(pair.w_plus, mu) - q) <= 1e-12 * scale);
    CHECK(pair.w_minus <= w_mu + 1e-14);
    CHECK(pair.w_plus >= w_mu - 1e-14);

    double lo = w_mu - 60.0 / mu;
    while (qtilde_of_w(lo, mu) < q) lo -= 60.0 / mu;
    double hi = w_mu + 60.0;
    const double wm = oracle_root(q, mu, lo, w_mu);
    const double wp = oracle_root(q, mu, w_mu, hi);
    CHECK(std::fabs(pair.w_minus - wm) <= 1e-12 * std::max(1.0, std::fabs(wm)));
    CHECK(std::fabs(pair.w_plus - wp) <= 1e-12 * std::max(1.0, std::fabs(wp)));
  }
}

TEST_CASE("branch_roots monotone in the level") {
  const double mu = 1.3;
  double prev_minus = std::log(mu), prev_plus = std::log(mu);
  const double q_min = mu - mu * std::log(mu);
  for (double gap : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    const auto pair = branch_roots(q_min + gap, mu);
    CHECK(pair.w_minus <= prev_minus + 1e-13);
    CHECK(pair.w_plus >= prev_plus - 1e-13);
    prev_minus = pair.w_minus;
    prev_plus = pair.w_plus;
  }
}

TEST_CASE("phi_potential gauge, monotonicity, oracle value") {
  CHECK(phi_potential(std::log(2.5), 1.0, 2.5) == doctest::Approx(0.0));

  // non-decreasing in w (integrand >= 0)
  double prev = phi_potential(-3.0, 0.5, 1.0);
  for (double w = -2.5; w <= 2.0; w += 0.5) {
    const double cur = phi_potential(w, 0.5, 1.0);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }

  const double direct = phi_potential(1.0, 1.0, 1.0);
  const double oracle = oracle_phi_potential(1.0, 1.0, 1.0, 1000000);
  CHECK(direct == doctest::Approx(oracle).epsilon(1e-8));

  // strictly increasing away from ln mu when the integrand is nonzero
  CHECK(phi_potential(1.0, 1.0, 1.0) > phi_potential(0.5, 1.0, 1.0));
  CHECK(phi_potential(-0.5, 1.0, 1.0) < phi_potential(-0.2, 1.0, 1.0));
}

namespace {

InitialData step_datum(double eps, double v_lo, double v_hi, int n, double x_min,
                       double x_max) {
  ModelParams p;
  p.eps = eps;
  p.mu = 1.0;
  p.x_min = x_min;
  p.x_max = x_max;
  p.n_cells = n;
  Grid1D g = Grid1D::of(p);
  Field v0(g, 0.0), phi0(g, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = g.node(i);
    v0[i] = x < 0.0 ? v_lo : v_hi;
    phi0[i] = -std::fabs(x);
  }
  return make_initial_data_from_phi(p, phi0, v0);
}

}  // namespace

TEST_CASE("validate_initial_data accepts the step datum") {
  ModelParams p;
  p.eps = 0.05;
  p.mu = 1.0;
  p.x_min = -2.0;
  p.x_max = 2.0;
  p.n_cells = 401;
  const InitialData init = step_datum(p.eps, 0.5, 2.0, p.n_cells, p.x_min, p.x_max);
  const ValidationReport report = validate_initial_data(init, p);
  CHECK(report.all_pass());
  CHECK(report.entry("v_m").value == doctest::Approx(0.5));
  CHECK(report.entry("v_M").value == doctest::Approx(2.0));
  CHECK(report.entry("lipschitz_phi0").value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.entry("mass_u0").value <= 100.0);
}

TEST_CASE("validate_initial_data rejects data without a threshold crossing") {
  ModelParams p;
  p.eps = 0.05;
  p.mu = 1.0;
  p.x_min = -2.0;
  p.x_max = 2.0;
  p.n_cells = 201;
  Grid1D g = Grid1D::of(p);
  Field v0(g, 2.0);  // v0 > mu everywhere
  Field phi0(g, 0.0);
  for (int i = 0; i < g.n; ++i) phi0[i] = -std::fabs(g.node(i));
  const InitialData init = make_initial_data_from_phi(p, phi0, v0);
  const ValidationReport report = validate_initial_data(init, p);
  CHECK_FALSE(report.all_pass());
  CHECK_FALSE(report.entry("single_increasing_crossing").pass);
  CHECK_FALSE(report.entry("threshold_between").pass);
}

TEST_CASE("validate_initial_data reports unit mass") {
  ModelParams p;
  p.eps = 0.1;
  p.mu = 1.0;
  p.x_min = -3.0;
  p.x_max = 3.0;
  p.n_cells = 601;
  Grid1D g = Grid1D::of(p);
  Field v0(g, 0.0), u0(g, 0.0);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    v0[i] = x < 0.0 ? 0.5 : 2.0;
    u0[i] = std::exp(-std::fabs(x) / p.eps) / (2.0 * p.eps);  // integrates to ~1
  }
  const InitialData init = make_initial_data(p, u0, v0);
  const ValidationReport report = validate_initial_data(init, p);
  CHECK(report.entry("mass_u0").value == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(report.entry("mass_u0").pass);
}

TEST_CASE("initial data constructors enforce positivity") {
  ModelParams p;
  p.eps = 0.1;
  p.mu = 1.0;
  p.x_min = -1.0;
  p.x_max = 1.0;
  p.n_cells = 11;
  Grid1D g = Grid1D::of(p);
  Field good(g, 1.0), bad(g, 1.0);
  bad[3] = 0.0;
  CHECK_THROWS_AS(make_initial_data(p, bad, good), std::domain_error);
  CHECK_THROWS_AS(make_initial_data(p, good, bad), std::domain_error);
  const InitialData init = make_initial_data(p, good, good);
  for (int i = 0; i < g.n; ++i) {
    CHECK(init.phi0[i] == doctest::Approx(p.eps * std::log(init.u0[i])).epsilon(1e-14));
  }
}

TEST_CASE("grid invariants") {
  const Grid1D g = Grid1D::uniform(-1.0, 3.0, 5);
  CHECK(g.dx == doctest::Approx(1.0));
  CHECK(g.node(0) == doctest::Approx(-1.0));
  CHECK(g.node(4) == doctest::Approx(3.0));
  CHECK(g.nearest(1.2) == 2);
  CHECK_THROWS_AS(Grid1D::uniform(1.0, -1.0, 5), std::domain_error);
}
