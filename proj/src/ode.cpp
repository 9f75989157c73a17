#include "frontlab/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "frontlab/io.hpp"

namespace frontlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Implicit midpoint with Newton; dimension 1 or 2. Returns false when the
// nonlinear solve stalls (caller halves the step).
template <int N, class F, class J>
bool midpoint_step(const std::array<double, N>& y, double dt, F f, J jac,
                   std::array<double, N>& out) {
  std::array<double, N> ynew = y;
  {
    const std::array<double, N> fy = f(y);
    for (int k = 0; k < N; ++k) ynew[k] = y[k] + dt * fy[k];
  }
  double prev_norm = kInf;
  for (int it = 0; it < 40; ++it) {
    std::array<double, N> mid;
    for (int k = 0; k < N; ++k) mid[k] = 0.5 * (y[k] + ynew[k]);
    const std::array<double, N> fm = f(mid);
    std::array<double, N> g;
    double gnorm = 0.0;
    for (int k = 0; k < N; ++k) {
      g[k] = ynew[k] - y[k] - dt * fm[k];
      gnorm = std::max(gnorm, std::fabs(g[k]));
    }
    double scale = 0.0;
    for (int k = 0; k < N; ++k) scale = std::max(scale, std::fabs(ynew[k]));
    if (!std::isfinite(gnorm)) return false;
    if (gnorm <= 1e-14 * (1.0 + scale)) {
      out = ynew;
      return true;
    }
    if (it > 5 && gnorm > 0.5 * prev_norm && gnorm > 1e-10 * (1.0 + scale)) {
      return false;
    }
    prev_norm = gnorm;

    // Solve (I - dt/2 * J(mid)) * delta = -g.
    const auto Jm = jac(mid);
    if constexpr (N == 1) {
      const double a = 1.0 - 0.5 * dt * Jm[0][0];
      if (a == 0.0) return false;
      ynew[0] -= g[0] / a;
    } else {
      const double a = 1.0 - 0.5 * dt * Jm[0][0];
      const double b = -0.5 * dt * Jm[0][1];
      const double c = -0.5 * dt * Jm[1][0];
      const double d = 1.0 - 0.5 * dt * Jm[1][1];
      const double det = a * d - b * c;
      if (det == 0.0) return false;
      const double d0 = (-g[0] * d + g[1] * b) / det;
      const double d1 = (-g[1] * a + g[0] * c) / det;
      ynew[0] += d0;
      ynew[1] += d1;
    }
  }
  return false;
}

template <int N, class F, class J, class Record>
void integrate_adaptive_midpoint(std::array<double, N> y, double t_end,
                                 double dt_init, double rel_tol, F f, J jac,
                                 Record record) {
  double t = 0.0;
  double dt = std::min(dt_init, t_end);
  record(t, y);
  const double dt_floor = 1e-14 * std::max(1.0, t_end);
  while (t < t_end) {
    dt = std::min(dt, t_end - t);
    std::array<double, N> big, half, fine;
    const bool ok = midpoint_step<N>(y, dt, f, jac, big) &&
                    midpoint_step<N>(y, 0.5 * dt, f, jac, half) &&
                    midpoint_step<N>(half, 0.5 * dt, f, jac, fine);
    if (!ok) {
      dt *= 0.5;
      if (dt < dt_floor) {
        throw NumericalError("integrate_point: step size underflow (nonlinear solve)");
      }
      continue;
    }
    double err = 0.0;
    for (int k = 0; k < N; ++k) {
      err = std::max(err, std::fabs(fine[k] - big[k]) / 3.0 /
                              (rel_tol * (1.0 + std::fabs(fine[k]))));
    }
    if (err <= 1.0) {
      y = fine;
      t += dt;
      record(t, y);
      dt *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -1.0 / 3.0), 1.0, 5.0);
    } else {
      dt *= std::max(0.9 * std::pow(err, -1.0 / 3.0), 0.2);
      if (dt < dt_floor) {
        throw NumericalError("integrate_point: step size underflow (error control)");
      }
    }
  }
}

double phi_of_u(double u, double eps) {
  return u > 0.0 ? eps * std::log(u) : -kInf;
}

void check_point_args(double v0, double t_end, double rel_tol) {
  if (!(v0 > 0.0)) throw std::domain_error("integrate_point: v0 must be > 0");
  if (!(t_end > 0.0)) throw std::domain_error("integrate_point: t_end must be > 0");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) {
    throw std::domain_error("integrate_point: rel_tol must be in (0, 1e-4]");
  }
}

PointTrajectory run_reduced(const ModelParams& p, double u0, double v0,
                            double t_end, double rel_tol) {
  PointTrajectory traj;
  const double K = p.eps * u0 + q_of_v(v0, p.mu);
  traj.k_constant = K;
  const double u_floor = -rel_tol * (1.0 + std::fabs(K)) / p.eps;
  auto f = [&](const std::array<double, 1>& y) -> std::array<double, 1> {
    return {-(K - qtilde_of_w(y[0], p.mu)) / p.eps};
  };
  auto jac = [&](const std::array<double, 1>& y) -> std::array<std::array<double, 1>, 1> {
    return {{{qtilde_prime(y[0], p.mu) / p.eps}}};
  };
  auto record = [&](double t, const std::array<double, 1>& y) {
    const double v = std::exp(y[0]);
    double u = (K - qtilde_of_w(y[0], p.mu)) / p.eps;
    if (u < u_floor) {
      throw NumericalError("integrate_point: reconstructed u negative beyond tolerance");
    }
    u = std::max(u, 0.0);
    traj.times.push_back(t);
    traj.v_values.push_back(v);
    traj.u_values.push_back(u);
    traj.phi_values.push_back(phi_of_u(u, p.eps));
  };
  integrate_adaptive_midpoint<1>({std::log(v0)}, t_end, p.eps / 10.0, rel_tol, f,
                                 jac, record);
  return traj;
}

PointTrajectory run_direct(const ModelParams& p, double u0, double v0,
                           double t_end, double rel_tol) {
  PointTrajectory traj;
  traj.k_constant = p.eps * u0 + q_of_v(v0, p.mu);
  auto f = [&](const std::array<double, 2>& y) -> std::array<double, 2> {
    return {y[0] * (y[1] - p.mu) / p.eps, -y[0] * y[1]};
  };
  auto jac = [&](const std::array<double, 2>& y) -> std::array<std::array<double, 2>, 2> {
    return {{{(y[1] - p.mu) / p.eps, y[0] / p.eps}, {-y[1], -y[0]}}};
  };
  auto record = [&](double t, const std::array<double, 2>& y) {
    traj.times.push_back(t);
    traj.u_values.push_back(y[0]);
    traj.v_values.push_back(y[1]);
    traj.phi_values.push_back(phi_of_u(y[0], p.eps));
  };
  integrate_adaptive_midpoint<2>({u0, v0}, t_end, p.eps / 10.0, rel_tol, f, jac,
                                 record);
  return traj;
}

PointTrajectory run_log_cell(const ModelParams& p, double phi0, double v0,
                             double t_end, double rel_tol) {
  PointTrajectory traj;
  const double u0 = std::exp(phi0 / p.eps);
  traj.k_constant = p.eps * u0 + q_of_v(v0, p.mu);
  auto f = [&](const std::array<double, 2>& y) -> std::array<double, 2> {
    return {std::exp(y[1]) - p.mu, -std::exp(y[0] / p.eps)};
  };
  auto jac = [&](const std::array<double, 2>& y) -> std::array<std::array<double, 2>, 2> {
    return {{{0.0, std::exp(y[1])}, {-std::exp(y[0] / p.eps) / p.eps, 0.0}}};
  };
  auto record = [&](double t, const std::array<double, 2>& y) {
    traj.times.push_back(t);
    traj.phi_values.push_back(y[0]);
    traj.u_values.push_back(std::exp(y[0] / p.eps));
    traj.v_values.push_back(std::exp(y[1]));
  };
  integrate_adaptive_midpoint<2>({phi0, std::log(v0)}, t_end, p.eps / 10.0,
                                 rel_tol, f, jac, record);
  return traj;
}

}  // namespace

double PointTrajectory::max_invariant_drift(double eps, double mu) const {
  double drift = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    drift = std::max(drift,
                     std::fabs(eps * u_values[i] + q_of_v(v_values[i], mu) - k_constant));
  }
  return drift;
}

PointTrajectory integrate_point(const ModelParams& params, double u0, double v0,
                                double t_end, double rel_tol, PointMethod method) {
  params.validate();
  check_point_args(v0, t_end, rel_tol);
  if (!(u0 > 0.0)) throw std::domain_error("integrate_point: u0 must be > 0");
  switch (method) {
    case PointMethod::reduced:
      return run_reduced(params, u0, v0, t_end, rel_tol);
    case PointMethod::direct:
      return run_direct(params, u0, v0, t_end, rel_tol);
    case PointMethod::log_cell:
      return run_log_cell(params, params.eps * std::log(u0), v0, t_end, rel_tol);
  }
  throw std::invalid_argument("integrate_point: unknown method");
}

PointTrajectory integrate_point_log(const ModelParams& params, double phi0,
                                    double v0, double t_end, double rel_tol) {
  params.validate();
  check_point_args(v0, t_end, rel_tol);
  if (!std::isfinite(phi0)) throw std::domain_error("integrate_point_log: phi0 must be finite");
  return run_log_cell(params, phi0, v0, t_end, rel_tol);
}

double crossing_time(const PointTrajectory& traj, double mu) {
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    const double a = traj.v_values[i] - mu;
    const double b = traj.v_values[i + 1] - mu;
    if (a >= 0.0 && b < 0.0) {
      const double frac = a / (a - b);
      return traj.times[i] + frac * (traj.times[i + 1] - traj.times[i]);
    }
  }
  return kInf;
}

double time_integral_u(const PointTrajectory& traj, double t_hi) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    if (traj.times[i] >= t_hi) break;
    const double t1 = traj.times[i];
    const double t2 = std::min(traj.times[i + 1], t_hi);
    double u2 = traj.u_values[i + 1];
    if (traj.times[i + 1] > t_hi) {
      const double frac = (t_hi - t1) / (traj.times[i + 1] - t1);
      u2 = traj.u_values[i] + frac * (traj.u_values[i + 1] - traj.u_values[i]);
    }
    s += 0.5 * (traj.u_values[i] + u2) * (t2 - t1);
  }
  return s;
}

double limit_jump_time(double phi0, double v0_upper, double mu) {
  if (phi0 > 0.0) throw std::domain_error("limit_jump_time: phi0 must be <= 0");
  if (v0_upper == mu) throw std::domain_error("limit_jump_time: degenerate datum v0 == mu");
  if (v0_upper < mu) return kInf;
  return -phi0 / (v0_upper - mu);
}

LimitProfile limit_profile(const InitialData& init, double mu) {
  const Grid1D& g = init.grid();
  LimitProfile prof{Field(g, 0.0), Field(g, 0.0), Field(g, 0.0), Field(g, 0.0)};
  for (int i = 0; i < g.n; ++i) {
    const BranchPair& pair = init.branch0[static_cast<std::size_t>(i)];
    prof.v_lower[i] = pair.v_minus();
    prof.v_upper[i] = pair.v_plus();
    prof.weight[i] = pair.w_plus - pair.w_minus;
    prof.tau[i] = limit_jump_time(init.phi0[i], init.v0[i], mu);
  }
  return prof;
}

double phi_limit(double t, int node, const LimitProfile& profile,
                 const InitialData& init, double mu) {
  const double phi0 = init.phi0[node];
  const double v0 = init.v0[node];
  if (v0 < mu) return phi0 + t * (v0 - mu);
  const double tau = profile.tau[node];
  if (t <= tau) return phi0 + t * (v0 - mu);
  return phi0 + tau * (v0 - mu) + (t - tau) * (profile.v_lower[node] - mu);
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const PointTrajectory& traj, const ModelParams& params) {
  CsvWriter csv(path, {"t", "u", "v", "phi", "invariant_drift"});
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double drift = params.eps * traj.u_values[i] +
                         q_of_v(traj.v_values[i], params.mu) - traj.k_constant;
    csv.row({traj.times[i], traj.u_values[i], traj.v_values[i], traj.phi_values[i],
             drift});
  }
  csv.close();
}

void write_limit_profile_csv(const std::filesystem::path& path,
                             const LimitProfile& profile) {
  CsvWriter csv(path, {"x", "tau", "v_lower", "v_upper", "weight"});
  for (int i = 0; i < profile.tau.size(); ++i) {
    csv.row({profile.tau.grid.node(i), profile.tau[i], profile.v_lower[i],
             profile.v_upper[i], profile.weight[i]});
  }
  csv.close();
}

}  // namespace frontlab
