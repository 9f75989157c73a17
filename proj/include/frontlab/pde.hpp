#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "frontlab/model.hpp"

namespace frontlab {

enum class VariableSet { hopf_cole, direct };
enum class PhiBc { neumann, linear_extrapolation };

struct SchemeConfig {
  double dt_initial = 0.01;
  double cfl_safety = 0.5;
  VariableSet variable_set = VariableSet::hopf_cole;
  PhiBc bc_phi = PhiBc::linear_extrapolation;
  std::vector<double> snapshot_times;
  bool adaptive_dt = true;  // off: fixed dt_initial (refinement studies)

  void validate(double t_end) const;
};

/// Evenly spaced snapshot instants {0, ..., t_end}, count >= 2.
std::vector<double> default_snapshot_times(double t_end, int count = 51);

struct Snapshot {
  double t = 0.0;
  Field u, v, w, phi;
};

struct StepLog {
  std::vector<double> t, dt, min_v, max_u, max_phi, drift;
};

struct SolutionRecord {
  ModelParams params;
  SchemeConfig scheme;
  std::vector<Snapshot> snapshots;
  StepLog step_log;
  std::vector<std::string> warnings;

  const Snapshot& at(std::size_t k) const { return snapshots.at(k); }
  std::size_t size() const { return snapshots.size(); }
};

/// Advances the coupled cell/nutrient system on the truncated domain and
/// returns snapshots at the requested times.
///
/// hopf_cole mode evolves (phi, w) = (eps*ln u, ln v):
///   d_t phi = eps*phi_xx + |phi_x|^2 + e^w - mu   (diffusion implicit,
///   gradient squared explicit centered), and the consumption as exact
///   exponential substeps with u frozen, arranged symmetrically
///   (half consumption / full phi step / half consumption).
/// direct mode evolves (u, v) with implicit diffusion on u, explicit
/// reaction, and the same exponential v-substeps.
SolutionRecord simulate(const ModelParams& params, const InitialData& init,
                        const SchemeConfig& scheme);

struct ResidualReport {
  // One entry per snapshot interval [t_k, t_k+1].
  std::vector<double> interval_mid_times;
  std::vector<Field> residuals;
  std::vector<double> max_norms;
  std::vector<double> l1_norms;

  double worst_max() const;
  double worst_l1() const;
};

/// Discrete residual of the nutrient reformulation
///   eps*w_t - eps^2*w_xx - Qt(w) + Qt(w0) + eps*u0 + eps^2*w0_xx = 0,
/// with the time derivative taken across snapshot pairs and the spatial
/// terms at the interval midpoint average.
ResidualReport w_reformulation_residual(const SolutionRecord& record,
                                        const InitialData& init,
                                        const ModelParams& params);

/// Max over interior nodes of the conserved quantity's departure from t=0:
/// eps*u + v - mu*ln v + eps^2 * (ln v)_xx. One value per snapshot.
std::vector<double> invariant_drift(const SolutionRecord& record,
                                    const InitialData& init,
                                    const ModelParams& params);

/// Same drift restricted to the outer `margin` fraction of the domain on
/// each side; monitors truncation effects near the artificial boundary.
std::vector<double> boundary_invariant_drift(const SolutionRecord& record,
                                             const InitialData& init,
                                             const ModelParams& params,
                                             double margin = 0.1);

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap);
void write_step_log_csv(const std::filesystem::path& path, const StepLog& log);

/// Persists/restores a record (meta.json + one CSV per snapshot + step log).
void save_record(const std::filesystem::path& dir, const SolutionRecord& record);
SolutionRecord load_record(const std::filesystem::path& dir);

}  // namespace frontlab
