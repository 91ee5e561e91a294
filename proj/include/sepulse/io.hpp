// Copyright 2026 The sepulse Authors
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

/**
 * @file io.hpp
 * @brief Device configuration, record formats and file output.
 *
 * Files use Hz, MHz and ns; everything is converted to rad/s and s on the
 * way in. CSV values carry 12 significant digits. Outputs are written to a
 * temporary file and renamed into place.
 */

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sepulse/benchmarking.hpp"
#include "sepulse/calibration.hpp"
#include "sepulse/error.hpp"
#include "sepulse/pulse_synthesis.hpp"
#include "sepulse/sweeps.hpp"
#include "sepulse/system.hpp"
#include "sepulse/units.hpp"

namespace sepulse::io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Files

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ConfigError, path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a sibling temporary file and rename, creating parent directories.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::ConfigError, path.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::ConfigError, path.string() + ": write failed");
  }
  fs::rename(tmp, path);
}

inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Field access with path-qualified diagnostics

namespace detail {

class Reader {
 public:
  Reader(const json& node, std::string path, std::string source)
      : node_(node), path_(std::move(path)), source_(std::move(source)) {
    if (!node_.is_object()) error("", "expected an object");
  }

  [[noreturn]] void error(const std::string& key, const std::string& what) const {
    fail(ErrorKind::ConfigError, source_ + ": " + where(key) + ": " + what);
  }

  bool has(const std::string& key) const { return node_.contains(key) && !node_.at(key).is_null(); }

  double number(const std::string& key) const {
    if (!has(key)) error(key, "missing required field");
    return as_number(key);
  }
  std::optional<double> optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return as_number(key);
  }
  double number_or(const std::string& key, double fallback) const { return optional_number(key).value_or(fallback); }

  std::string string(const std::string& key) const {
    if (!has(key)) error(key, "missing required field");
    if (!node_.at(key).is_string()) error(key, "expected a string");
    return node_.at(key).get<std::string>();
  }
  std::string string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) const {
    if (!has(key)) return {};
    const auto& arr = node_.at(key);
    if (!arr.is_array()) error(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) error(key + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(arr[i].get<double>());
    }
    return out;
  }

  const json& array(const std::string& key) const {
    if (!has(key)) error(key, "missing required field");
    if (!node_.at(key).is_array()) error(key, "expected an array");
    return node_.at(key);
  }

  Reader child(const std::string& key) const {
    if (!has(key)) error(key, "missing required field");
    return Reader(node_.at(key), where(key), source_);
  }
  Reader element(const json& arr, const std::string& key, std::size_t i) const {
    return Reader(arr.at(i), where(key) + "[" + std::to_string(i) + "]", source_);
  }

  const std::string& source() const { return source_; }

 private:
  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }
  double as_number(const std::string& key) const {
    if (!node_.at(key).is_number()) error(key, "expected a number");
    return node_.at(key).get<double>();
  }

  const json& node_;
  std::string path_;
  std::string source_;
};

inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, source + ": " + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Device configuration

struct Defaults {
  double dt_ns = 0.5;
  double sigma_hz = 25e6;
  double t_ns = 40.0;
  int shots = 0;  // 0 = exact probabilities
};

/// A reference profile row (gate family, target, delta and null offsets).
struct ReferenceProfile {
  std::string family;
  std::string target;
  double delta_hz = 0.0;
  std::vector<double> null_offsets_hz;
  double drive_freq_hz = 0.0;
  double sigma_hz = 0.0;
};

struct DeviceConfig {
  std::vector<QubitSpec> qubits;
  std::map<std::string, double> readout_hz;  // metadata only
  std::vector<std::string> shared_line;
  Defaults defaults;
  std::vector<ReferenceProfile> reference_profiles;

  const QubitSpec& qubit(const std::string& label) const {
    for (const auto& q : qubits)
      if (q.label == label) return q;
    fail(ErrorKind::ConfigError, "unknown qubit label '" + label + "'");
  }

  /// The shared-line system in `shared_line` order, targeting `target`.
  SharedLineSystem system(const std::string& target) const {
    SharedLineSystem s;
    for (const auto& label : shared_line) s.qubits.push_back(qubit(label));
    const auto idx = s.index_of(target);
    if (!idx) fail(ErrorKind::ConfigError, "target '" + target + "' is not on the shared line");
    s.target_index = *idx;
    s.validate();
    return s;
  }

  const ReferenceProfile* reference(const std::string& family, const std::string& target) const {
    for (const auto& r : reference_profiles)
      if (r.family == family && r.target == target) return &r;
    return nullptr;
  }
};

inline DeviceConfig parse_device_config(const std::string& text, const std::string& source = "<config>") {
  const json doc = detail::parse_json(text, source);
  const detail::Reader root(doc, "", source);
  DeviceConfig cfg;

  const json& qubits = root.array("qubits");
  if (qubits.empty()) root.error("qubits", "at least one qubit is required");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto r = root.element(qubits, "qubits", i);
    QubitSpec q;
    q.label = r.string("label");
    const double f = r.number("frequency_Hz");
    if (!(f > 0.0)) r.error("frequency_Hz", "must be positive");
    q.frequency = units::hz(f);
    q.anharmonicity = units::hz(r.number_or("anharmonicity_Hz", 0.0));
    q.levels = static_cast<int>(r.number_or("levels", 2));
    if (q.levels != 2 && q.levels != 3) r.error("levels", "must be 2 or 3");
    if (q.levels == 3 && q.anharmonicity == 0.0) r.error("anharmonicity_Hz", "required and nonzero when levels = 3");
    if (auto t1 = r.optional_number("T1_s")) {
      if (!(*t1 > 0.0)) r.error("T1_s", "must be positive");
      q.t1 = *t1;
    }
    if (auto t2 = r.optional_number("T2echo_s")) {
      if (!(*t2 > 0.0)) r.error("T2echo_s", "must be positive");
      if (q.t1 && *t2 > 2.0 * *q.t1) r.error("T2echo_s", "must not exceed 2*T1_s");
      q.t2_echo = *t2;
    }
    if (auto ro = r.optional_number("readout_freq_Hz")) cfg.readout_hz[q.label] = *ro;
    for (const auto& other : cfg.qubits)
      if (other.label == q.label) r.error("label", "duplicate label '" + q.label + "'");
    cfg.qubits.push_back(std::move(q));
  }

  if (root.has("shared_line")) {
    const json& line = root.array("shared_line");
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (!line[i].is_string()) root.error("shared_line[" + std::to_string(i) + "]", "expected a qubit label");
      const auto label = line[i].get<std::string>();
      bool found = false;
      for (const auto& q : cfg.qubits) found = found || q.label == label;
      if (!found) root.error("shared_line[" + std::to_string(i) + "]", "unknown qubit label '" + label + "'");
      cfg.shared_line.push_back(label);
    }
  } else {
    for (const auto& q : cfg.qubits) cfg.shared_line.push_back(q.label);
  }

  if (root.has("defaults")) {
    const auto d = root.child("defaults");
    cfg.defaults.dt_ns = d.number_or("dt_ns", cfg.defaults.dt_ns);
    cfg.defaults.sigma_hz = d.number_or("sigma_Hz", cfg.defaults.sigma_hz);
    cfg.defaults.t_ns = d.number_or("T_ns", cfg.defaults.t_ns);
    cfg.defaults.shots = static_cast<int>(d.number_or("shots", cfg.defaults.shots));
    if (!(cfg.defaults.dt_ns > 0.0)) d.error("dt_ns", "must be positive");
    if (!(cfg.defaults.sigma_hz > 0.0)) d.error("sigma_Hz", "must be positive");
    if (!(cfg.defaults.t_ns > 0.0)) d.error("T_ns", "must be positive");
    if (cfg.defaults.shots < 0) d.error("shots", "must be non-negative");
  }

  if (root.has("reference_profiles")) {
    const json& refs = root.array("reference_profiles");
    for (std::size_t i = 0; i < refs.size(); ++i) {
      const auto r = root.element(refs, "reference_profiles", i);
      ReferenceProfile p;
      p.family = r.string("family");
      parse_family(p.family);
      p.target = r.string("target");
      p.delta_hz = r.number_or("delta_Hz", 0.0);
      p.null_offsets_hz = r.numbers("null_offsets_Hz");
      p.drive_freq_hz = r.number_or("drive_freq_Hz", 0.0);
      p.sigma_hz = r.number_or("sigma_Hz", cfg.defaults.sigma_hz);
      cfg.reference_profiles.push_back(std::move(p));
    }
  }
  return cfg;
}

inline DeviceConfig load_device_config(const std::filesystem::path& path) {
  return parse_device_config(read_text(path), path.string());
}

inline json to_json(const DeviceConfig& cfg) {
  json doc;
  doc["qubits"] = json::array();
  for (const auto& q : cfg.qubits) {
    json j{{"label", q.label},
           {"frequency_Hz", units::to_hz(q.frequency)},
           {"anharmonicity_Hz", units::to_hz(q.anharmonicity)},
           {"levels", q.levels}};
    if (q.t1) j["T1_s"] = *q.t1;
    if (q.t2_echo) j["T2echo_s"] = *q.t2_echo;
    if (auto it = cfg.readout_hz.find(q.label); it != cfg.readout_hz.end()) j["readout_freq_Hz"] = it->second;
    doc["qubits"].push_back(j);
  }
  doc["shared_line"] = cfg.shared_line;
  doc["defaults"] = {{"dt_ns", cfg.defaults.dt_ns},
                     {"sigma_Hz", cfg.defaults.sigma_hz},
                     {"T_ns", cfg.defaults.t_ns},
                     {"shots", cfg.defaults.shots}};
  if (!cfg.reference_profiles.empty()) {
    doc["reference_profiles"] = json::array();
    for (const auto& r : cfg.reference_profiles)
      doc["reference_profiles"].push_back({{"family", r.family},
                                           {"target", r.target},
                                           {"delta_Hz", r.delta_hz},
                                           {"null_offsets_Hz", r.null_offsets_hz},
                                           {"drive_freq_Hz", r.drive_freq_hz},
                                           {"sigma_Hz", r.sigma_hz}});
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Profiles

inline json profile_to_json(const FrequencyProfile& p) {
  std::vector<double> offsets;
  for (double d : p.null_offsets()) offsets.push_back(units::to_hz(d));
  return {{"drive_freq_Hz", units::to_hz(p.drive_freq)},
          {"sigma_Hz", units::to_hz(p.sigma)},
          {"delta_Hz", units::to_hz(p.delta)},
          {"amplitude", p.amplitude},
          {"null_offsets_Hz", offsets},
          {"symmetry", p.symmetry == Symmetry::Symmetric ? "symmetric" : "asymmetric"},
          {"base_envelope", "gaussian"}};
}

inline FrequencyProfile profile_from_reader(const detail::Reader& r) {
  FrequencyProfile p;
  p.drive_freq = units::hz(r.number("drive_freq_Hz"));
  p.sigma = units::hz(r.number("sigma_Hz"));
  p.delta = units::hz(r.number_or("delta_Hz", 0.0));
  p.amplitude = r.number_or("amplitude", 1.0);
  for (double d : r.numbers("null_offsets_Hz")) p.nulls.push_back(p.drive_freq + units::hz(d));
  const auto sym = r.string_or("symmetry", "symmetric");
  if (sym == "symmetric")
    p.symmetry = Symmetry::Symmetric;
  else if (sym == "asymmetric")
    p.symmetry = Symmetry::Asymmetric;
  else
    r.error("symmetry", "expected 'symmetric' or 'asymmetric'");
  if (r.string_or("base_envelope", "gaussian") != "gaussian") r.error("base_envelope", "only 'gaussian' is supported");
  if (!(p.sigma > 0.0)) r.error("sigma_Hz", "must be positive");
  return p;
}

inline FrequencyProfile profile_from_json(const json& j, const std::string& source = "<profile>") {
  return profile_from_reader(detail::Reader(j, "", source));
}

// ---------------------------------------------------------------------------
// Waveforms

inline std::string waveform_csv(const Waveform& w) {
  std::string out = "t_ns,s_x,s_y\n";
  for (std::size_t k = 0; k < w.size(); ++k)
    out += fmt12(units::to_ns(w.time_at(k))) + "," + fmt12(w.samples[k].real()) + "," + fmt12(w.samples[k].imag()) + "\n";
  return out;
}

inline json waveform_sidecar(const Waveform& w, const FrequencyProfile& profile, const std::string& target,
                             Family family) {
  const auto edges = discontinuity_metric(w);
  const auto area = w.area();
  return {{"target", target},
          {"family", to_string(family)},
          {"profile", profile_to_json(profile)},
          {"carrier_Hz", units::to_hz(w.carrier_freq)},
          {"dt_ns", units::to_ns(w.dt)},
          {"T_ns", units::to_ns(w.duration())},
          {"samples", w.size()},
          {"scale", w.scale},
          {"area", {area.real(), area.imag()}},
          {"discontinuity", {{"start", edges.start}, {"end", edges.end}}}};
}

/// Parses the CSV body; dt and carrier come from the sidecar.
inline Waveform parse_waveform(const std::string& csv, const json& sidecar, const std::string& source = "<waveform>") {
  const detail::Reader side(sidecar, "", source + " sidecar");
  Waveform w;
  w.dt = units::ns(side.number("dt_ns"));
  w.carrier_freq = units::hz(side.number("carrier_Hz"));
  w.scale = side.number_or("scale", 1.0);
  std::istringstream in(csv);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "t_ns,s_x,s_y") fail(ErrorKind::ConfigError, source + ":1: expected header 't_ns,s_x,s_y'");
      continue;
    }
    if (line.empty()) continue;
    double t, x, y;
    char c1, c2;
    std::istringstream row(line);
    if (!(row >> t >> c1 >> x >> c2 >> y) || c1 != ',' || c2 != ',')
      fail(ErrorKind::ConfigError, source + ":" + std::to_string(line_no) + ": malformed row");
    w.samples.emplace_back(x, y);
  }
  if (w.samples.size() < 2) fail(ErrorKind::ConfigError, source + ": fewer than two samples");
  return w;
}

// ---------------------------------------------------------------------------
// Calibration records

inline json calibration_to_json(const CalibratedGate& g, Family family) {
  return {{"target", g.target_label},
          {"family", to_string(family)},
          {"A", g.profile.amplitude},
          {"delta_Hz", units::to_hz(g.profile.delta)},
          {"sigma_Hz", units::to_hz(g.profile.sigma)},
          {"T_ns", units::to_ns(g.duration)},
          {"dt_ns", units::to_ns(g.dt)},
          {"rotation_angle", g.rotation_angle},
          {"goal_angle", g.goal_angle},
          {"residual_phase_per_gate", g.residual_phase_per_gate},
          {"objective", std::isfinite(g.objective) ? json(g.objective) : json(nullptr)},
          {"profile", profile_to_json(g.profile)}};
}

struct CalibrationRecord {
  CalibratedGate gate;
  Family family = Family::SepSym;
};

/// Rebuilds the gate (waveform included) from a record.
inline CalibrationRecord calibration_from_json(const json& j, const std::string& source = "<calibration>") {
  const detail::Reader r(j, "", source);
  CalibrationRecord rec;
  rec.family = parse_family(r.string("family"));
  auto& g = rec.gate;
  g.target_label = r.string("target");
  g.profile = profile_from_reader(r.child("profile"));
  g.profile.amplitude = r.number("A");
  g.profile.delta = units::hz(r.number("delta_Hz"));
  g.profile.sigma = units::hz(r.number("sigma_Hz"));
  g.duration = units::ns(r.number("T_ns"));
  g.dt = units::ns(r.number("dt_ns"));
  g.rotation_angle = r.number("rotation_angle");
  g.goal_angle = r.number_or("goal_angle", units::kPi / 2);
  g.residual_phase_per_gate = r.number_or("residual_phase_per_gate", 0.0);
  g.objective = r.number_or("objective", std::numeric_limits<double>::quiet_NaN());
  g.waveform = synthesize(g.profile, g.duration, g.dt);
  g.waveform.scale = g.profile.amplitude;
  return rec;
}

// ---------------------------------------------------------------------------
// Sweeps

inline std::string excitation_map_csv(const ExcitationMap& m) {
  std::string out = "T_ns,Delta1_MHz,Pe_target,Pe_nontarget\n";
  for (std::size_t i = 0; i < m.durations.size(); ++i)
    for (std::size_t j = 0; j < m.detunings.size(); ++j)
      out += fmt12(units::to_ns(m.durations[i])) + "," + fmt12(units::to_mhz(m.detunings[j])) + "," +
             fmt12(m.pe_target[m.index(i, j)]) + "," + fmt12(m.pe_nontarget[m.index(i, j)]) + "\n";
  return out;
}

inline json excitation_map_meta(const ExcitationMap& m) {
  return {{"family", to_string(m.family)},
          {"sigma_rule", "sigma/2pi = 1/T"},
          {"area", "pi/2"},
          {"dt_ns", units::to_ns(m.dt)},
          {"rows", m.durations.size()},
          {"cols", m.detunings.size()},
          {"T_ns", {units::to_ns(m.durations.front()), units::to_ns(m.durations.back())}},
          {"Delta1_MHz", {units::to_mhz(m.detunings.front()), units::to_mhz(m.detunings.back())}}};
}

inline std::string leakage_csv(const std::vector<LeakagePoint>& pts) {
  std::string out = "sigma_MHz,sx_start,sx_end,Pe,Pf\n";
  for (const auto& p : pts)
    out += fmt12(units::to_mhz(p.sigma)) + "," + fmt12(p.sx_start) + "," + fmt12(p.sx_end) + "," + fmt12(p.pe) + "," +
           fmt12(p.pf) + "\n";
  return out;
}

inline std::string drag_csv(const DragScan& scan) {
  std::string out = "lambda,Pe_target,Pf_target,Pe_nontarget,Pf_nontarget\n";
  for (const auto& p : scan.points)
    out += fmt12(p.lambda) + "," + fmt12(p.target_pe) + "," + fmt12(p.target_pf) + "," + fmt12(p.nontarget_pe) + "," +
           fmt12(p.nontarget_pf) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Repeated-gate scans and RB

inline std::string rabi_csv(const std::vector<RabiSeries>& series) {
  std::string out = "n";
  for (const auto& s : series) out += ",Pg_" + s.label;
  out += "\n";
  const std::size_t n = series.empty() ? 0 : series.front().p_g.size();
  for (std::size_t k = 0; k < n; ++k) {
    out += std::to_string(k);
    for (const auto& s : series) out += "," + fmt12(s.p_g[k]);
    out += "\n";
  }
  return out;
}

inline std::string rb_series_csv(const RBResult& r, const RBSeries& s) {
  std::string out = "L,mean_Pg,std_Pg\n";
  for (std::size_t i = 0; i < r.lengths.size(); ++i)
    out += std::to_string(r.lengths[i]) + "," + fmt12(s.mean[i]) + "," + fmt12(s.stddev[i]) + "\n";
  return out;
}

inline json fit_to_json(const RBSeries& s) {
  if (!s.fit) return {{"error", s.fit_error}};
  const auto& f = *s.fit;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"A", f.a},
          {"p", f.p},
          {"B", f.b},
          {"stderr", {{"A", num(f.stderr_[0])}, {"p", num(f.stderr_[1])}, {"B", num(f.stderr_[2])}}},
          {"fidelity", f.fidelity},
          {"gamma_ex", f.gamma_ex},
          {"degenerate", f.degenerate}};
}

inline json rb_to_json(const RBResult& r) {
  json doc{{"lengths", r.lengths}, {"seeds", r.seeds}, {"series", json::object()}};
  for (const auto& s : r.series) doc["series"][s.label] = fit_to_json(s);
  return doc;
}

}  // namespace sepulse::io
