#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "frontlab/model.hpp"
#include "frontlab/pde.hpp"

namespace frontlab {

/// Initial-datum specification: a named analytic preset or a pair of CSVs.
///
/// Presets (all with phi0 = -|x|, i.e. u0 = exp(-|x|/eps)):
///   step    v0 = v_minus for x < 0, v_plus for x >= 0
///   smooth  v0 = v_minus + (v_plus - v_minus) * (1 + tanh(x/width)) / 2
///   wave    like smooth, but v_minus is derived from v_plus so both far
///           fields sit on the same potential level (matched branch pair)
struct InitSpec {
  std::string preset = "step";  // step | smooth | wave | csv
  double v_minus = 0.5;
  double v_plus = 2.0;
  double smooth_width = 0.25;
  std::string v0_csv;  // used when preset == "csv"
  std::string u0_csv;  // optional companion; otherwise u0 = exp(-|x|/eps)

  std::string describe() const;
};

InitialData build_initial_data(const ModelParams& params, const InitSpec& spec);

/// Loads a two-column (x, value) CSV as a Field; the abscissae must be
/// uniformly spaced and define the grid.
Field load_field_csv(const std::filesystem::path& path);

struct Scenario {
  std::string name = "default";
  ModelParams params;
  InitSpec init;
  SchemeConfig scheme;
  int snapshot_count = 51;

  /// Rebuilds grid-dependent pieces for a given eps (grid follows
  /// dx_over_eps unless n_cells is pinned).
  ModelParams params_for(double eps) const;
  InitialData initial_data_for(double eps) const;
  SchemeConfig scheme_for(double eps) const;

  /// Stable fingerprint of every ingredient that affects the output.
  std::string fingerprint() const;
};

/// Flat key=value configuration with decorative [section] headers.
/// '#' and ';' start comments. Later keys override earlier ones.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Applies "--key value" overrides on top of config keys.
void apply_overrides(std::map<std::string, std::string>& config,
                     const std::vector<std::string>& extra_args);

/// Builds a scenario from a key=value map (unknown keys are an error).
Scenario scenario_from_config(const std::map<std::string, std::string>& config);

/// The key=value map a scenario round-trips to (for manifests/README).
std::map<std::string, std::string> scenario_to_config(const Scenario& s);

}  // namespace frontlab
