#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "frontlab/model.hpp"
#include "frontlab/pde.hpp"

namespace frontlab {

/// Minimal admissible front speed 2*sqrt(Qtilde'(w_plus)) = 2*sqrt(v+ - mu).
double minimal_speed(double w_plus, double mu);

/// Roots of lambda^2 + sigma*lambda + Qtilde'(w_state) = 0, the linearized
/// decay exponents of the profile equation with ansatz exp(lambda * y/eps).
struct DispersionRoots {
  std::complex<double> lambda_slow;  // root closer to zero
  std::complex<double> lambda_fast;
  bool double_root = false;
  bool complex_pair = false;  // oscillatory, non-admissible about w_plus
};

DispersionRoots dispersion_roots(double sigma, double w_state, double mu);

/// Slope selection for the piecewise-linear traveling profile of the
/// reduced first-order limit, sigma*p = p^2 + (v± - mu).
///
/// The source text is inconsistent about the orientation of these slopes
/// (the stated double root sigma/2 is positive, yet the profile is said to
/// be negative for y > 0; the characteristic-consistent slopes are the
/// negatives, matching the decay exponents of `dispersion_roots`). Both
/// readings are exposed:
///   sign_rule     p_minus is the root that keeps the profile <= 0 on
///                 y < 0 (the positive root).
///   minus_branch  both slopes taken from the same (smaller) quadratic
///                 branch; negating these gives the characteristic slopes.
enum class SlopeConvention { sign_rule, minus_branch };

struct EikonalSlopes {
  double p_minus = 0.0;
  double p_plus = 0.0;  // double root sigma/2 at the minimal speed
  bool p_plus_double_root = false;
  SlopeConvention convention = SlopeConvention::sign_rule;
};

EikonalSlopes eikonal_wave_phi(double sigma, double v_minus, double v_plus,
                               double mu,
                               SlopeConvention convention = SlopeConvention::sign_rule);

struct WaveSetup {
  double w_minus = 0.0;
  double w_plus = 0.0;
  double mu = 1.0;
  double sigma = 0.0;
  double eps = 0.05;
  double half_length = 0.0;  // L in y units
  double q_level = 0.0;      // common potential level A

  /// Far fields from the branch pair of v_plus; sigma = 0 picks the
  /// minimal speed, half_length = 0 picks 24*eps/min|lambda|.
  static WaveSetup from_v_plus(double v_plus, double mu, double sigma, double eps,
                               double half_length = 0.0);
  void validate() const;
};

struct WaveProfile {
  std::vector<double> y_nodes;
  std::vector<double> w_values;
  double residual_norm = 0.0;  // final collocation residual (max norm)
  std::string pinned_at = "w(0) = ln(mu)";
  bool converged = false;
  bool monotone = false;
  int newton_iterations = 0;

  std::vector<double> v_values() const;
};

/// Centered-difference collocation of the profile equation
///   -sigma*eps*w' - eps^2*w'' = Qtilde(w) - A
/// on [-L, L], Newton iteration from a tanh guess, far-field Robin rows
/// from dispersion_roots, translation pinned by w(0) = ln(mu) (the pin
/// replaces the collocation row at y = 0).
WaveProfile solve_profile_bvp(const WaveSetup& setup, int n_nodes = 0);

/// Interior defect of the converged profile under 4th-order stencils;
/// decays at the scheme's order under mesh refinement.
double profile_defect_norm(const WaveProfile& profile, const WaveSetup& setup);

/// Decay exponent toward w_plus, fitted on ln(w_plus - w) over the tail
/// (last quarter-domain, clipped to magnitudes resolvable in doubles).
/// Reported in the exp(lambda*y/eps) normalization of dispersion_roots.
double profile_decay_rate(const WaveProfile& profile, const WaveSetup& setup);

/// Least-squares speed of the mu-level set of v across the snapshots in
/// [t_lo, t_hi]; optionally reports the worst fit residual (in x units).
double empirical_front_speed(const SolutionRecord& record, double mu, double t_lo,
                             double t_hi, double* fit_residual = nullptr);

void write_profile_csv(const std::filesystem::path& path, const WaveProfile& profile);

struct SpeedScanRow {
  double sigma = 0.0;
  double residual_norm = 0.0;
  bool monotone = false;
};

void write_speed_scan_csv(const std::filesystem::path& path,
                          const std::vector<SpeedScanRow>& rows);

}  // namespace frontlab
