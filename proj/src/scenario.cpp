#include "frontlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "frontlab/io.hpp"

namespace frontlab {

std::string InitSpec::describe() const {
  if (preset == "csv") {
    return "csv:" + v0_csv + (u0_csv.empty() ? "" : ("+" + u0_csv));
  }
  return preset + "(v_minus=" + fmt17(v_minus) + ",v_plus=" + fmt17(v_plus) +
         ",width=" + fmt17(smooth_width) + ")";
}

namespace {

Field abs_ramp_phi(const Grid1D& g) {
  Field phi(g, 0.0);
  for (int i = 0; i < g.n; ++i) phi[i] = -std::fabs(g.node(i));
  return phi;
}

}  // namespace

InitialData build_initial_data(const ModelParams& params, const InitSpec& spec) {
  params.validate();
  if (spec.preset == "csv") {
    if (spec.v0_csv.empty()) throw std::invalid_argument("csv preset needs v0 file");
    Field v0 = load_field_csv(spec.v0_csv);
    ModelParams p = params;
    p.x_min = v0.grid.x_min;
    p.x_max = v0.grid.x_max;
    p.n_cells = v0.grid.n;
    if (!spec.u0_csv.empty()) {
      Field u0 = load_field_csv(spec.u0_csv);
      if (u0.grid.n != v0.grid.n) {
        throw std::invalid_argument("u0/v0 CSV grids do not match");
      }
      return make_initial_data(p, std::move(u0), std::move(v0));
    }
    return make_initial_data_from_phi(p, abs_ramp_phi(v0.grid), std::move(v0));
  }

  const Grid1D g = Grid1D::of(params);
  Field v0(g, 0.0);
  if (spec.preset == "step") {
    for (int i = 0; i < g.n; ++i) {
      v0[i] = g.node(i) < 0.0 ? spec.v_minus : spec.v_plus;
    }
  } else if (spec.preset == "smooth") {
    for (int i = 0; i < g.n; ++i) {
      v0[i] = spec.v_minus + (spec.v_plus - spec.v_minus) *
                                 0.5 * (1.0 + std::tanh(g.node(i) / spec.smooth_width));
    }
  } else if (spec.preset == "wave") {
    // far fields on a common potential level: v_minus from the lower branch
    const BranchPair pair = branch_roots(q_of_v(spec.v_plus, params.mu), params.mu);
    const double w_lo = pair.w_minus;
    const double w_hi = std::log(spec.v_plus);
    for (int i = 0; i < g.n; ++i) {
      const double s = 0.5 * (1.0 + std::tanh(g.node(i) / spec.smooth_width));
      v0[i] = std::exp(w_lo + (w_hi - w_lo) * s);
    }
  } else {
    throw std::invalid_argument("unknown preset '" + spec.preset + "'");
  }
  return make_initial_data_from_phi(params, abs_ramp_phi(g), std::move(v0));
}

Field load_field_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.columns.size() != 2) {
    throw std::runtime_error("load_field_csv: expected two columns in " + path.string());
  }
  const auto& xs = table.data[0];
  const auto& ys = table.data[1];
  if (xs.size() < 3) throw std::runtime_error("load_field_csv: need >= 3 rows");
  const double dx = xs[1] - xs[0];
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double step = xs[i + 1] - xs[i];
    if (!(step > 0.0) || std::fabs(step - dx) > 1e-9 * std::max(1.0, std::fabs(dx))) {
      throw std::runtime_error("load_field_csv: abscissae must be uniform ascending");
    }
  }
  const Grid1D g = Grid1D::uniform(xs.front(), xs.back(), static_cast<int>(xs.size()));
  return Field(g, ys);
}

ModelParams Scenario::params_for(double eps) const {
  ModelParams p = params;
  p.eps = eps;
  return p;
}

InitialData Scenario::initial_data_for(double eps) const {
  return build_initial_data(params_for(eps), init);
}

SchemeConfig Scenario::scheme_for(double eps) const {
  SchemeConfig sc = scheme;
  if (sc.snapshot_times.empty()) {
    sc.snapshot_times = default_snapshot_times(params_for(eps).t_end, snapshot_count);
  }
  return sc;
}

std::string Scenario::fingerprint() const {
  std::string canon;
  for (const auto& [k, v] : scenario_to_config(*this)) canon += k + "=" + v + "\n";
  return hex64(fnv1a64(canon));
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::map<std::string, std::string> config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section header
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": empty key");
    }
    config[key] = value;
  }
  return config;
}

void apply_overrides(std::map<std::string, std::string>& config,
                     const std::vector<std::string>& extra_args) {
  for (std::size_t i = 0; i < extra_args.size(); ++i) {
    const std::string& arg = extra_args[i];
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
      throw std::invalid_argument("expected --key value override, got '" + arg + "'");
    }
    std::string key = arg.substr(2);
    std::string value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extra_args.size()) {
        throw std::invalid_argument("override --" + key + " is missing a value");
      }
      value = extra_args[++i];
    }
    config[key] = value;
  }
}

namespace {

double to_double(const std::string& key, const std::string& value) {
  try {
    return parse17(value);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double d = to_double(key, value);
  const int i = static_cast<int>(std::lround(d));
  if (std::fabs(d - i) > 1e-9) {
    throw std::invalid_argument("config key '" + key + "': expected integer");
  }
  return i;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw std::invalid_argument("config key '" + key + "': expected boolean");
}

}  // namespace

Scenario scenario_from_config(const std::map<std::string, std::string>& config) {
  Scenario s;
  for (const auto& [key, value] : config) {
    if (key == "name") s.name = value;
    else if (key == "eps") s.params.eps = to_double(key, value);
    else if (key == "mu") s.params.mu = to_double(key, value);
    else if (key == "x_min") s.params.x_min = to_double(key, value);
    else if (key == "x_max") s.params.x_max = to_double(key, value);
    else if (key == "n_cells") s.params.n_cells = to_int(key, value);
    else if (key == "t_end") s.params.t_end = to_double(key, value);
    else if (key == "dx_over_eps") s.params.dx_over_eps = to_double(key, value);
    else if (key == "preset") s.init.preset = value;
    else if (key == "v_minus") s.init.v_minus = to_double(key, value);
    else if (key == "v_plus") s.init.v_plus = to_double(key, value);
    else if (key == "smooth_width") s.init.smooth_width = to_double(key, value);
    else if (key == "v0_csv") s.init.v0_csv = value;
    else if (key == "u0_csv") s.init.u0_csv = value;
    else if (key == "dt_initial") s.scheme.dt_initial = to_double(key, value);
    else if (key == "cfl_safety") s.scheme.cfl_safety = to_double(key, value);
    else if (key == "adaptive_dt") s.scheme.adaptive_dt = to_bool(key, value);
    else if (key == "snapshot_count") s.snapshot_count = to_int(key, value);
    else if (key == "variable_set") {
      if (value == "hopf_cole") s.scheme.variable_set = VariableSet::hopf_cole;
      else if (value == "direct") s.scheme.variable_set = VariableSet::direct;
      else throw std::invalid_argument("variable_set must be hopf_cole or direct");
    } else if (key == "bc_phi") {
      if (value == "neumann") s.scheme.bc_phi = PhiBc::neumann;
      else if (value == "linear_extrapolation") {
        s.scheme.bc_phi = PhiBc::linear_extrapolation;
      } else {
        throw std::invalid_argument("bc_phi must be neumann or linear_extrapolation");
      }
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  return s;
}

std::map<std::string, std::string> scenario_to_config(const Scenario& s) {
  std::map<std::string, std::string> c;
  c["name"] = s.name;
  c["eps"] = fmt17(s.params.eps);
  c["mu"] = fmt17(s.params.mu);
  c["x_min"] = fmt17(s.params.x_min);
  c["x_max"] = fmt17(s.params.x_max);
  c["n_cells"] = std::to_string(s.params.n_cells);
  c["t_end"] = fmt17(s.params.t_end);
  c["dx_over_eps"] = fmt17(s.params.dx_over_eps);
  c["preset"] = s.init.preset;
  c["v_minus"] = fmt17(s.init.v_minus);
  c["v_plus"] = fmt17(s.init.v_plus);
  c["smooth_width"] = fmt17(s.init.smooth_width);
  if (!s.init.v0_csv.empty()) c["v0_csv"] = s.init.v0_csv;
  if (!s.init.u0_csv.empty()) c["u0_csv"] = s.init.u0_csv;
  c["dt_initial"] = fmt17(s.scheme.dt_initial);
  c["cfl_safety"] = fmt17(s.scheme.cfl_safety);
  c["adaptive_dt"] = s.scheme.adaptive_dt ? "true" : "false";
  c["snapshot_count"] = std::to_string(s.snapshot_count);
  c["variable_set"] =
      s.scheme.variable_set == VariableSet::hopf_cole ? "hopf_cole" : "direct";
  c["bc_phi"] = s.scheme.bc_phi == PhiBc::neumann ? "neumann" : "linear_extrapolation";
  return c;
}

}  // namespace frontlab
