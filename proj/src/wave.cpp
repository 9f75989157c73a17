#include "frontlab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frontlab/io.hpp"
#include "frontlab/numerics.hpp"

namespace frontlab {

double minimal_speed(double w_plus, double mu) {
  if (!(w_plus > std::log(mu))) {
    throw std::domain_error("minimal_speed: w_plus must exceed ln(mu)");
  }
  return 2.0 * std::sqrt(qtilde_prime(w_plus, mu));
}

DispersionRoots dispersion_roots(double sigma, double w_state, double mu) {
  if (!(sigma > 0.0)) throw std::domain_error("dispersion_roots: sigma must be > 0");
  DispersionRoots out;
  const double qp = qtilde_prime(w_state, mu);
  const double disc = sigma * sigma - 4.0 * qp;
  if (std::fabs(disc) <= 1e-12) {
    out.double_root = true;
    out.lambda_slow = out.lambda_fast = -0.5 * sigma;
    return out;
  }
  if (disc < 0.0) {
    out.complex_pair = true;
    const double im = 0.5 * std::sqrt(-disc);
    out.lambda_slow = {-0.5 * sigma, im};
    out.lambda_fast = {-0.5 * sigma, -im};
    return out;
  }
  const double root = std::sqrt(disc);
  const double a = 0.5 * (-sigma + root);
  const double b = 0.5 * (-sigma - root);
  if (std::fabs(a) <= std::fabs(b)) {
    out.lambda_slow = a;
    out.lambda_fast = b;
  } else {
    out.lambda_slow = b;
    out.lambda_fast = a;
  }
  return out;
}

EikonalSlopes eikonal_wave_phi(double sigma, double v_minus, double v_plus,
                               double mu, SlopeConvention convention) {
  if (!(v_minus > 0.0 && v_plus > mu)) {
    throw std::domain_error("eikonal_wave_phi: need v_minus > 0 and v_plus > mu");
  }
  const double disc_plus = sigma * sigma - 4.0 * (v_plus - mu);
  if (disc_plus < -1e-12) {
    throw std::domain_error("eikonal_wave_phi: sigma below the minimal speed");
  }
  EikonalSlopes out;
  out.convention = convention;
  out.p_plus_double_root = std::fabs(disc_plus) <= 1e-12;
  const double root_plus = std::sqrt(std::max(disc_plus, 0.0));
  out.p_plus = 0.5 * (sigma - root_plus);

  const double disc_minus = sigma * sigma - 4.0 * (v_minus - mu);  // > sigma^2
  const double root_minus = std::sqrt(disc_minus);
  out.p_minus = convention == SlopeConvention::sign_rule
                    ? 0.5 * (sigma + root_minus)
                    : 0.5 * (sigma - root_minus);
  return out;
}

WaveSetup WaveSetup::from_v_plus(double v_plus, double mu, double sigma, double eps,
                                 double half_length) {
  if (!(v_plus > mu)) throw std::domain_error("WaveSetup: v_plus must exceed mu");
  WaveSetup s;
  s.mu = mu;
  s.eps = eps;
  s.w_plus = std::log(v_plus);
  s.q_level = q_of_v(v_plus, mu);
  s.w_minus = branch_roots(s.q_level, mu).w_minus;
  s.sigma = sigma > 0.0 ? sigma : minimal_speed(s.w_plus, mu);
  if (half_length > 0.0) {
    s.half_length = half_length;
  } else {
    const DispersionRoots left = dispersion_roots(s.sigma, s.w_minus, mu);
    const DispersionRoots right = dispersion_roots(s.sigma, s.w_plus, mu);
    const double lam_min = std::min(std::fabs(left.lambda_slow.real()),
                                    std::fabs(right.lambda_slow.real()));
    s.half_length = 24.0 * eps / lam_min;
  }
  s.validate();
  return s;
}

void WaveSetup::validate() const {
  if (!(mu > 0.0 && eps > 0.0 && half_length > 0.0 && sigma > 0.0)) {
    throw std::domain_error("WaveSetup: positive mu, eps, sigma, half_length required");
  }
  if (!(w_minus < std::log(mu) && std::log(mu) < w_plus)) {
    throw std::domain_error("WaveSetup: far fields must straddle ln(mu)");
  }
  const double qa = qtilde_of_w(w_minus, mu);
  const double qb = qtilde_of_w(w_plus, mu);
  if (std::fabs(qa - qb) > 1e-12 * std::max(1.0, std::fabs(qa))) {
    throw std::domain_error("WaveSetup: far fields not on a common potential level");
  }
  if (sigma < minimal_speed(w_plus, mu) - 1e-9) {
    throw std::domain_error("WaveSetup: sigma below the minimal speed");
  }
}

std::vector<double> WaveProfile::v_values() const {
  std::vector<double> v(w_values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(w_values[i]);
  return v;
}

WaveProfile solve_profile_bvp(const WaveSetup& setup, int n_nodes) {
  setup.validate();
  const double sigma = setup.sigma;
  const double mu = setup.mu;
  const double A = setup.q_level;
  const double w_mu = std::log(mu);
  const double half_xi = setup.half_length / setup.eps;  // work in xi = y/eps

  const DispersionRoots left = dispersion_roots(sigma, setup.w_minus, mu);
  const DispersionRoots right = dispersion_roots(sigma, setup.w_plus, mu);
  if (right.complex_pair) {
    throw std::domain_error("solve_profile_bvp: oscillatory far field (sigma < sigma_*)");
  }
  // growth exponent behind the front, decay exponent ahead of it
  const double lam_left = std::max(left.lambda_slow.real(), left.lambda_fast.real());
  const double lam_right = right.lambda_slow.real();

  int n = n_nodes;
  if (n <= 0) {
    const double lam_max = std::max({std::fabs(lam_left), std::fabs(lam_right), 1.0});
    n = static_cast<int>(std::ceil(2.0 * half_xi * lam_max / 0.05)) + 1;
  }
  if (n % 2 == 0) ++n;  // keep a node at xi = 0
  if (n < 11) throw std::domain_error("solve_profile_bvp: grid too coarse");
  const double h = 2.0 * half_xi / (n - 1);
  const std::size_t pin = static_cast<std::size_t>((n - 1) / 2);
  const std::size_t N = static_cast<std::size_t>(n);

  std::vector<double> w(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double xi = -half_xi + static_cast<double>(i) * h;
    w[i] = setup.w_minus +
           (setup.w_plus - setup.w_minus) * 0.5 * (1.0 + std::tanh(xi * sigma / 4.0));
  }

  auto assemble_residual = [&](const std::vector<double>& ww, std::vector<double>& F) {
    F.assign(N, 0.0);
    F[0] = (-3.0 * ww[0] + 4.0 * ww[1] - ww[2]) / (2.0 * h) -
           lam_left * (ww[0] - setup.w_minus);
    for (std::size_t k = 1; k + 1 < N; ++k) {
      const double d1 = (ww[k + 1] - ww[k - 1]) / (2.0 * h);
      const double d2 = (ww[k + 1] - 2.0 * ww[k] + ww[k - 1]) / (h * h);
      F[k] = -sigma * d1 - d2 - qtilde_of_w(ww[k], mu) + A;
    }
    F[pin] = ww[pin] - w_mu;  // phase condition replaces this collocation row
    F[N - 1] = (3.0 * ww[N - 1] - 4.0 * ww[N - 2] + ww[N - 3]) / (2.0 * h) -
               lam_right * (ww[N - 1] - setup.w_plus);
  };

  WaveProfile profile;
  std::vector<double> F;
  double fnorm = std::numeric_limits<double>::infinity();
  const double tol = 1e-11 * std::max(1.0, std::fabs(A));
  int it = 0;
  for (; it < 100; ++it) {
    assemble_residual(w, F);
    fnorm = 0.0;
    for (double f : F) fnorm = std::max(fnorm, std::fabs(f));
    if (fnorm <= tol) break;

    BandedMatrix J(N, 2, 2);
    J.at(0, 0) = -3.0 / (2.0 * h) - lam_left;
    J.at(0, 1) = 4.0 / (2.0 * h);
    J.at(0, 2) = -1.0 / (2.0 * h);
    for (std::size_t k = 1; k + 1 < N; ++k) {
      if (k == pin) {
        J.at(k, k) = 1.0;
        continue;
      }
      J.at(k, k - 1) = sigma / (2.0 * h) - 1.0 / (h * h);
      J.at(k, k) = 2.0 / (h * h) - qtilde_prime(w[k], mu);
      J.at(k, k + 1) = -sigma / (2.0 * h) - 1.0 / (h * h);
    }
    J.at(N - 1, N - 1) = 3.0 / (2.0 * h) - lam_right;
    J.at(N - 1, N - 2) = -4.0 / (2.0 * h);
    J.at(N - 1, N - 3) = 1.0 / (2.0 * h);

    std::vector<double> rhs(F);
    for (double& r : rhs) r = -r;
    const std::vector<double> delta = J.solve(rhs);

    double step = 1.0;
    std::vector<double> trial(N), Ft;
    for (int bt = 0; bt < 30; ++bt) {
      for (std::size_t k = 0; k < N; ++k) trial[k] = w[k] + step * delta[k];
      assemble_residual(trial, Ft);
      double tn = 0.0;
      for (double f : Ft) tn = std::max(tn, std::fabs(f));
      if (std::isfinite(tn) && tn < fnorm) break;
      step *= 0.5;
    }
    for (std::size_t k = 0; k < N; ++k) w[k] += step * delta[k];
  }

  profile.newton_iterations = it;
  profile.converged = fnorm <= tol;
  profile.residual_norm = fnorm;
  profile.w_values = w;
  profile.y_nodes.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    profile.y_nodes[i] = setup.eps * (-half_xi + static_cast<double>(i) * h);
  }
  profile.monotone = true;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    if (w[k + 1] < w[k] - 1e-8) {
      profile.monotone = false;
      break;
    }
  }
  return profile;
}

double profile_defect_norm(const WaveProfile& profile, const WaveSetup& setup) {
  const std::size_t n = profile.w_values.size();
  if (n < 7) throw std::invalid_argument("profile_defect_norm: too few nodes");
  const double h = (profile.y_nodes[1] - profile.y_nodes[0]) / setup.eps;
  const auto& w = profile.w_values;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double d1 =
        (w[i - 2] - 8.0 * w[i - 1] + 8.0 * w[i + 1] - w[i + 2]) / (12.0 * h);
    const double d2 = (-w[i - 2] + 16.0 * w[i - 1] - 30.0 * w[i] + 16.0 * w[i + 1] -
                       w[i + 2]) /
                      (12.0 * h * h);
    const double defect =
        -setup.sigma * d1 - d2 - qtilde_of_w(w[i], setup.mu) + setup.q_level;
    worst = std::max(worst, std::fabs(defect));
  }
  return worst;
}

double profile_decay_rate(const WaveProfile& profile, const WaveSetup& setup) {
  const std::size_t n = profile.w_values.size();
  const double y_max = profile.y_nodes.back();
  const double floor = 1e-12 * std::max(1.0, std::fabs(setup.w_plus));
  double y_start = 0.5 * y_max;  // last quarter of [-L, L]
  std::vector<double> xs, ys;
  for (int attempt = 0; attempt < 40; ++attempt) {
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = setup.w_plus - profile.w_values[i];
      if (profile.y_nodes[i] >= y_start && gap >= floor) {
        xs.push_back(profile.y_nodes[i] / setup.eps);
        ys.push_back(std::log(gap));
      }
    }
    if (xs.size() >= 25) break;
    y_start *= 0.8;  // the far tail underflows; widen toward the interior
    if (y_start < 0.05 * y_max) break;
  }
  if (xs.size() < 5) {
    throw NumericalError("profile_decay_rate: tail not resolvable");
  }
  // keep the farthest-out half of the usable window
  const double xi_mid = 0.5 * (xs.front() + xs.back());
  std::vector<double> xf, yf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= xi_mid) {
      xf.push_back(xs[i]);
      yf.push_back(ys[i]);
    }
  }
  return fit_line(xf, yf).slope;
}

double empirical_front_speed(const SolutionRecord& record, double mu, double t_lo,
                             double t_hi, double* fit_residual) {
  std::vector<double> ts, xs;
  for (const Snapshot& s : record.snapshots) {
    if (s.t < t_lo - 1e-12 || s.t > t_hi + 1e-12) continue;
    const Grid1D& g = s.v.grid;
    double x_front = std::numeric_limits<double>::quiet_NaN();
    for (int i = g.n - 2; i >= 0; --i) {
      const double a = s.v[i] - mu;
      const double b = s.v[i + 1] - mu;
      if (a == 0.0) {
        x_front = g.node(i);
        break;
      }
      if (a * b < 0.0) {
        x_front = g.node(i) + g.dx * a / (a - b);
        break;
      }
    }
    if (!std::isfinite(x_front)) {
      throw std::invalid_argument(
          "empirical_front_speed: no threshold crossing at t = " + fmt17(s.t));
    }
    ts.push_back(s.t);
    xs.push_back(x_front);
  }
  if (ts.size() < 2) {
    throw std::invalid_argument("empirical_front_speed: window contains < 2 snapshots");
  }
  const LineFit fit = fit_line(ts, xs);
  if (fit_residual != nullptr) *fit_residual = fit.max_residual;
  return fit.slope;
}

void write_profile_csv(const std::filesystem::path& path, const WaveProfile& profile) {
  CsvWriter csv(path, {"y", "w", "v", "residual"},
                {"pinned: " + profile.pinned_at,
                 "newton_iterations = " + std::to_string(profile.newton_iterations)});
  for (std::size_t i = 0; i < profile.y_nodes.size(); ++i) {
    csv.row({profile.y_nodes[i], profile.w_values[i], std::exp(profile.w_values[i]),
             profile.residual_norm});
  }
  csv.close();
}

void write_speed_scan_csv(const std::filesystem::path& path,
                          const std::vector<SpeedScanRow>& rows) {
  CsvWriter csv(path, {"sigma", "residual_norm", "monotone_flag"});
  for (const SpeedScanRow& r : rows) {
    csv.row({r.sigma, r.residual_norm, r.monotone ? 1.0 : 0.0});
  }
  csv.close();
}

}  // namespace frontlab
