// Copyright 2026 The mpent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpent/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mpent/errors.hpp"

namespace mpent {
namespace {

std::string where(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

[[noreturn]] void parse_fail(const YAML::Node& n, const std::string& msg) {
  const YAML::Mark m = n.Mark();
  if (m.is_null()) throw ParseError(msg);
  throw ParseError(msg, m.line + 1, m.column + 1);
}

[[noreturn]] void invalid(const YAML::Node& n, const std::string& msg) {
  throw ValidationError(msg + where(n));
}

void expect_map(const YAML::Node& n, const std::string& field) {
  if (!n.IsMap()) parse_fail(n, "'" + field + "' must be a table");
}

void check_keys(const YAML::Node& n, const std::string& field,
                std::initializer_list<std::string_view> allowed) {
  expect_map(n, field);
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      invalid(kv.first, "unknown field '" + (field.empty() ? key : field + "." + key) + "'");
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& field, const char* what) {
  if (!n.IsScalar()) parse_fail(n, "'" + field + "': expected " + what);
  try {
    return n.as<T>();
  } catch (const YAML::BadConversion&) {
    parse_fail(n, "'" + field + "': expected " + what + ", got '" + n.Scalar() + "'");
  }
}

double number(const YAML::Node& n, const std::string& field) {
  return scalar<double>(n, field, "a number");
}

template <class T>
void optional_field(const YAML::Node& map, const char* key, const std::string& prefix, T& out,
                    const char* what) {
  if (const YAML::Node n = map[key]) out = scalar<T>(n, prefix + key, what);
}

std::vector<double> grid(const YAML::Node& n, const std::string& field) {
  std::vector<double> out;
  if (n.IsSequence()) {
    for (std::size_t i = 0; i < n.size(); ++i)
      out.push_back(number(n[i], field + "[" + std::to_string(i) + "]"));
  } else if (n.IsMap()) {
    check_keys(n, field, {"from", "to", "count", "spacing"});
    if (!n["from"] || !n["to"] || !n["count"])
      invalid(n, "'" + field + "' range needs from, to and count");
    const double from = number(n["from"], field + ".from");
    const double to = number(n["to"], field + ".to");
    const long count = scalar<long>(n["count"], field + ".count", "an integer");
    std::string spacing = "linear";
    optional_field(n, "spacing", field + ".", spacing, "linear or log");
    if (count < 1) invalid(n["count"], "'" + field + ".count' must be >= 1");
    if (spacing != "linear" && spacing != "log")
      invalid(n["spacing"], "'" + field + ".spacing' must be linear or log");
    if (spacing == "log" && !(from > 0.0 && to > 0.0))
      invalid(n, "'" + field + "' log range needs positive bounds");
    for (long i = 0; i < count; ++i) {
      const double u = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(spacing == "log" ? from * std::pow(to / from, u) : from + (to - from) * u);
    }
  } else {
    parse_fail(n, "'" + field + "' must be a list or a {from, to, count} range");
  }
  if (out.empty()) invalid(n, "'" + field + "' grid is empty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) invalid(n, "'" + field + "' contains a non-finite value");
    if (i > 0 && !(out[i] > out[i - 1]))
      invalid(n, "'" + field + "' must be strictly ascending");
  }
  return out;
}

void qubit(const YAML::Node& n, const std::string& field, DriveParams& p) {
  check_keys(n, field, {"rabi", "t1", "efficiency", "background_rate", "dephasing"});
  const std::string pre = field + ".";
  optional_field(n, "rabi", pre, p.rabi, "a number");
  optional_field(n, "t1", pre, p.t1, "a number");
  optional_field(n, "efficiency", pre, p.efficiency, "a number");
  optional_field(n, "background_rate", pre, p.background_rate, "a number");
  optional_field(n, "dephasing", pre, p.dephasing, "a number");
  try {
    p.validate();
  } catch (const ValidationError& e) {
    invalid(n, "'" + field + "': " + e.what());
  }
}

ExperimentPreset preset_table(const YAML::Node& n, const std::string& field) {
  check_keys(n, field, {"name", "t1_s", "collection_eff", "detection_eff", "coherence_time_s",
                        "t1_placeholder", "coherence_placeholder", "note"});
  ExperimentPreset p;
  const std::string pre = field + ".";
  optional_field(n, "name", pre, p.name, "a string");
  for (const char* key : {"t1_s", "collection_eff", "detection_eff", "coherence_time_s"})
    if (!n[key]) invalid(n, "'" + field + "' is missing '" + key + "'");
  p.t1_s = number(n["t1_s"], pre + "t1_s");
  p.collection_eff = number(n["collection_eff"], pre + "collection_eff");
  p.detection_eff = number(n["detection_eff"], pre + "detection_eff");
  p.coherence_time_s = number(n["coherence_time_s"], pre + "coherence_time_s");
  optional_field(n, "t1_placeholder", pre, p.t1_placeholder, "true or false");
  optional_field(n, "coherence_placeholder", pre, p.coherence_placeholder, "true or false");
  optional_field(n, "note", pre, p.note, "a string");
  try {
    p.validate();
  } catch (const ValidationError& e) {
    invalid(n, e.what());
  }
  return p;
}

YAML::Node load_yaml(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ModeNetwork Scenario::network() const {
  ModeNetwork net = ModeNetwork::standard();
  for (const std::string& label : removed_shifters) net = net.without(label);
  return net;
}

void Scenario::validate() const {
  first.validate();
  second.validate();
  if (sweep.x.empty() || sweep.t.empty()) throw ValidationError("sweep grids must be non-empty");
  for (std::size_t i = 0; i < sweep.x.size(); ++i) {
    if (!(sweep.x[i] >= 0.0) || !std::isfinite(sweep.x[i]))
      throw ValidationError("sweep.x values must be finite and >= 0");
    if (i > 0 && !(sweep.x[i] > sweep.x[i - 1]))
      throw ValidationError("sweep.x must be strictly ascending");
  }
  for (std::size_t i = 0; i < sweep.t.size(); ++i) {
    if (!(sweep.t[i] > 0.0) || !std::isfinite(sweep.t[i]))
      throw ValidationError("sweep.t values must be finite and > 0");
    if (i > 0 && !(sweep.t[i] > sweep.t[i - 1]))
      throw ValidationError("sweep.t must be strictly ascending");
  }
  if (!(fig4_t > 0.0)) throw ValidationError("figures.fig4_t must be > 0");
  if (!(protocol.kappa > 0.0)) throw ValidationError("protocol.kappa must be > 0");
  if (!(protocol.target > 0.0 && protocol.target < 1.0))
    throw ValidationError("protocol.target must be in (0, 1)");
  if (trajectories.n_traj < 1) throw ValidationError("trajectories.n_traj must be >= 1");
  if (!(trajectories.t > 0.0)) throw ValidationError("trajectories.t must be > 0");
  if (trajectories.efficiency &&
      !(*trajectories.efficiency > 0.0 && *trajectories.efficiency <= 1.0))
    throw ValidationError("trajectories.efficiency must be in (0, 1]");
  quadrature.validate();
  if (preset) preset->validate();
  build_network(network(), first.efficiency, first.t1);
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  const YAML::Node root = load_yaml(text);
  if (!root || root.IsNull()) throw ParseError("scenario is empty");
  check_keys(root, "", {"name", "preset", "qubits", "network", "sweep", "figures", "protocol",
                        "trajectories", "quadrature", "output"});
  Scenario s;
  optional_field(root, "name", "", s.name, "a string");

  if (const YAML::Node n = root["preset"]) {
    if (n.IsScalar()) {
      try {
        s.preset = builtin_preset(n.Scalar());
      } catch (const ValidationError& e) {
        invalid(n, e.what());
      }
    } else if (n.IsMap() && n["file"]) {
      check_keys(n, "preset", {"file"});
      std::filesystem::path file = scalar<std::string>(n["file"], "preset.file", "a path");
      if (file.is_relative()) file = base_dir / file;
      s.preset = load_preset(file);
    } else {
      s.preset = preset_table(n, "preset");
    }
  }

  bool efficiency_given = false;
  if (const YAML::Node q = root["qubits"]) {
    check_keys(q, "qubits", {"first", "second"});
    if (q["first"]) {
      efficiency_given = static_cast<bool>(q["first"]["efficiency"]);
      if (!efficiency_given && s.preset) s.first.efficiency = s.preset->efficiency();
      qubit(q["first"], "qubits.first", s.first);
    } else if (s.preset) {
      s.first.efficiency = s.preset->efficiency();
    }
    s.second = s.first;
    if (q["second"]) qubit(q["second"], "qubits.second", s.second);
  } else if (s.preset) {
    s.first.efficiency = s.second.efficiency = s.preset->efficiency();
  }

  if (const YAML::Node n = root["network"]) {
    check_keys(n, "network", {"remove"});
    if (const YAML::Node r = n["remove"]) {
      if (!r.IsSequence()) parse_fail(r, "'network.remove' must be a list of labels");
      for (std::size_t i = 0; i < r.size(); ++i)
        s.removed_shifters.push_back(
            scalar<std::string>(r[i], "network.remove[" + std::to_string(i) + "]", "a label"));
    }
    try {
      s.network();
    } catch (const ValidationError& e) {
      invalid(n, e.what());
    }
  }

  s.sweep.x = {s.first.rabi};
  s.sweep.t = {1000.0};
  if (const YAML::Node n = root["sweep"]) {
    check_keys(n, "sweep", {"x", "t"});
    if (n["x"]) s.sweep.x = grid(n["x"], "sweep.x");
    if (n["t"]) s.sweep.t = grid(n["t"], "sweep.t");
    for (double x : s.sweep.x)
      if (x < 0.0) invalid(n["x"], "'sweep.x' values must be >= 0");
    for (double t : s.sweep.t)
      if (!(t > 0.0)) invalid(n["t"], "'sweep.t' values must be > 0");
  }

  if (const YAML::Node n = root["figures"]) {
    check_keys(n, "figures", {"fig4_t"});
    optional_field(n, "fig4_t", "figures.", s.fig4_t, "a number");
  }

  if (const YAML::Node n = root["protocol"]) {
    check_keys(n, "protocol", {"kappa", "target", "method"});
    optional_field(n, "kappa", "protocol.", s.protocol.kappa, "a number");
    optional_field(n, "target", "protocol.", s.protocol.target, "a number");
    if (const YAML::Node m = n["method"]) {
      try {
        s.protocol.method =
            parse_classify_method(scalar<std::string>(m, "protocol.method", "a method name"));
      } catch (const ValidationError& e) {
        invalid(m, e.what());
      }
    }
  }

  if (const YAML::Node n = root["trajectories"]) {
    check_keys(n, "trajectories", {"enabled", "n_traj", "seed", "t", "efficiency"});
    optional_field(n, "enabled", "trajectories.", s.trajectories.enabled, "true or false");
    optional_field(n, "n_traj", "trajectories.", s.trajectories.n_traj, "an integer");
    optional_field(n, "seed", "trajectories.", s.trajectories.seed, "an unsigned integer");
    optional_field(n, "t", "trajectories.", s.trajectories.t, "a number");
    if (n["efficiency"])
      s.trajectories.efficiency = number(n["efficiency"], "trajectories.efficiency");
  }

  if (const YAML::Node n = root["quadrature"]) {
    check_keys(n, "quadrature",
               {"dt", "relax_cutoff", "lag_cutoff", "check_convergence", "convergence_tol"});
    optional_field(n, "dt", "quadrature.", s.quadrature.dt, "a number");
    optional_field(n, "relax_cutoff", "quadrature.", s.quadrature.relax_cutoff, "a number");
    optional_field(n, "lag_cutoff", "quadrature.", s.quadrature.lag_cutoff, "a number");
    optional_field(n, "check_convergence", "quadrature.", s.quadrature.check_convergence,
                   "true or false");
    optional_field(n, "convergence_tol", "quadrature.", s.quadrature.convergence_tol,
                   "a number");
  }

  if (const YAML::Node n = root["output"]) {
    check_keys(n, "output", {"dir", "report"});
    if (n["dir"]) s.output.dir = scalar<std::string>(n["dir"], "output.dir", "a path");
    optional_field(n, "report", "output.", s.output.report, "a file name");
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text(path), path.parent_path().empty() ? "." : path.parent_path());
}

ExperimentPreset load_preset(const std::filesystem::path& path) {
  const YAML::Node root = load_yaml(read_text(path));
  if (!root || !root.IsMap()) throw ParseError("preset file " + path.string() + " is not a table");
  return preset_table(root, "preset");
}

}  // namespace mpent
