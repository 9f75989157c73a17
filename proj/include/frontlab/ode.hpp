#pragma once

#include <filesystem>
#include <vector>

#include "frontlab/model.hpp"

namespace frontlab {

/// Pointwise integration route.
///  - reduced:   scalar ODE for ln(v) obtained from the first integral
///               eps*u + Q(v) = K; u is reconstructed, so the invariant is
///               exact by construction. Default.
///  - direct:    the plain stiff 2x2 system in (u, v); cross-validation.
///  - log_cell:  2x2 system in (phi, ln v) with phi = eps*ln(u); required
///               when u0 is far below the smallest representable double
///               (e.g. u0 = exp(-|x|/eps) at small eps).
enum class PointMethod { reduced, direct, log_cell };

struct PointTrajectory {
  std::vector<double> times;
  std::vector<double> u_values;
  std::vector<double> v_values;
  std::vector<double> phi_values;
  double k_constant = 0.0;

  /// max_t |eps*u + Q(v) - K|.
  double max_invariant_drift(double eps, double mu) const;
};

/// Integrates one spatial point to t_end with adaptive implicit-midpoint
/// stepping (step-halving error control, initial step eps/10).
PointTrajectory integrate_point(const ModelParams& params, double u0, double v0,
                                double t_end, double rel_tol,
                                PointMethod method = PointMethod::reduced);

/// Same, with the cell density given through phi0 = eps*ln(u0); always uses
/// the log_cell route.
PointTrajectory integrate_point_log(const ModelParams& params, double phi0,
                                    double v0, double t_end, double rel_tol);

/// First time v crosses mu (linear interpolation between samples);
/// +infinity when no crossing happens by the end of the trajectory.
double crossing_time(const PointTrajectory& traj, double mu);

/// Trapezoid of u over the adaptive mesh, up to t_hi.
double time_integral_u(const PointTrajectory& traj, double t_hi);

/// Jump time -phi0/(v0_upper - mu); +infinity when v0_upper < mu; throws
/// std::domain_error for the degenerate datum v0_upper == mu.
double limit_jump_time(double phi0, double v0_upper, double mu);

/// Per-node limit description: jump times, branch values, jump weights.
struct LimitProfile {
  Field tau;      // +infinity where the nutrient never crosses mu
  Field v_lower;
  Field v_upper;
  Field weight;   // ln(v_upper) - ln(v_lower)
};

LimitProfile limit_profile(const InitialData& init, double mu);

/// Limit of eps*ln(u) at a node: rises at rate (v0 - mu) until the jump
/// time, is 0 there, then decreases at rate (v_lower - mu). Nodes with
/// v0 < mu only decrease.
double phi_limit(double t, int node, const LimitProfile& profile,
                 const InitialData& init, double mu);

void write_trajectory_csv(const std::filesystem::path& path,
                          const PointTrajectory& traj, const ModelParams& params);

void write_limit_profile_csv(const std::filesystem::path& path,
                             const LimitProfile& profile);

}  // namespace frontlab
