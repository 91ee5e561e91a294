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

// sepulse command-line front end. Exit codes: 0 ok, 2 configuration error,
// 3 numerical failure. Errors print one line: "sepulse: error: <Kind>: ...".

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sepulse/sepulse.hpp"

namespace fs = std::filesystem;
using namespace sepulse;
using sepulse::io::json;

namespace {

struct Globals {
  std::string config = "data/shared_line.json";
  std::string out = "out";
  std::uint64_t seed = 20250101;
  std::optional<double> dt_ns;
  std::optional<int> shots;
};

struct Context {
  io::DeviceConfig cfg;
  fs::path out;
  double dt = 0.0;
  int shots = 0;
  std::uint64_t seed = 0;
};

Context load(const Globals& g) {
  Context c;
  c.cfg = io::load_device_config(g.config);
  c.out = g.out;
  c.dt = units::ns(g.dt_ns.value_or(c.cfg.defaults.dt_ns));
  if (!(c.dt > 0.0)) fail(ErrorKind::ConfigError, "--dt-ns must be positive");
  c.shots = g.shots.value_or(c.cfg.defaults.shots);
  if (c.shots < 0) fail(ErrorKind::ConfigError, "--shots must be non-negative");
  c.seed = g.seed;
  return c;
}

void write(const Context& c, const std::string& name, const std::string& content) {
  io::write_atomic(c.out / name, content);
  std::cout << "wrote " << (c.out / name).string() << "\n";
}

void write_json(const Context& c, const std::string& name, const json& j) { write(c, name, j.dump(2) + "\n"); }

std::vector<std::string> targets_of(const Context& c, const std::string& target) {
  if (target == "all") return c.cfg.shared_line;
  c.cfg.system(target);
  return {target};
}

std::vector<Family> families_of(const std::string& family) {
  if (family == "both") return {Family::Gaussian, Family::SepSym};
  if (family == "all") return {Family::Gaussian, Family::SepAsym, Family::SepSym};
  return {parse_family(family)};
}

void check_range(double lo, double hi, int points, const std::string& what) {
  if (points < 1) fail(ErrorKind::ConfigError, what + ": point count must be at least 1");
  if (hi < lo) fail(ErrorKind::ConfigError, what + ": reversed range bounds");
  if (points > 1 && hi == lo) fail(ErrorKind::ConfigError, what + ": empty range with several points");
}

std::vector<QubitSpec> nontargets_of(const SharedLineSystem& sys, const std::string& spec) {
  if (spec == "all") return sys.nontargets();
  if (spec == "none") return {};
  std::vector<QubitSpec> out;
  std::stringstream ss(spec);
  std::string label;
  while (std::getline(ss, label, ',')) {
    const auto idx = sys.index_of(label);
    if (!idx) fail(ErrorKind::ConfigError, "--nontargets: unknown qubit label '" + label + "'");
    if (*idx == sys.target_index) fail(ErrorKind::ConfigError, "--nontargets: '" + label + "' is the target");
    out.push_back(sys.qubits[*idx]);
  }
  return out;
}

// Calibration settings shared by calibrate, rabi and rb.
struct GateSettings {
  std::optional<double> sigma_mhz;  // default: config
  std::optional<double> t_ns;
  int n_max = 32;
  bool tune_delta = true;
  std::vector<std::string> records;
};

void add_gate_options(CLI::App* sub, GateSettings& s) {
  sub->add_option("--sigma-mhz", s.sigma_mhz, "Gaussian width sigma/2pi in MHz (default: config)");
  sub->add_option("--t-ns", s.t_ns, "Gate duration in ns (default: config)");
  sub->add_flag("!--no-delta", s.tune_delta, "Skip the delta scan (amplitude calibration only)");
}

CalibratedGate calibrate_gate(const Context& c, const SharedLineSystem& sys, Family family, const GateSettings& s) {
  const double sigma = units::mhz(s.sigma_mhz.value_or(c.cfg.defaults.sigma_hz * 1e-6));
  const double t = units::ns(s.t_ns.value_or(c.cfg.defaults.t_ns));
  const auto profile = family_profile(family, sys.target(), sys.nontargets(), sigma);
  auto gate = calibrate_amplitude(sys, profile, t, c.dt, units::kPi / 2);
  if (s.tune_delta) {
    DeltaOptions opts;
    opts.n_max = s.n_max;
    gate = calibrate_delta(sys, gate, opts);
  }
  return gate;
}

// Loads --calibration records keyed by (target, family).
std::map<std::pair<std::string, Family>, CalibratedGate> load_records(const std::vector<std::string>& paths) {
  std::map<std::pair<std::string, Family>, CalibratedGate> out;
  for (const auto& p : paths) {
    const auto rec = io::calibration_from_json(io::detail::parse_json(io::read_text(p), p), p);
    out[{rec.gate.target_label, rec.family}] = rec.gate;
  }
  return out;
}

CalibratedGate gate_for(const Context& c, const SharedLineSystem& sys, Family family, const GateSettings& s,
                        const std::map<std::pair<std::string, Family>, CalibratedGate>& records) {
  if (auto it = records.find({sys.target().label, family}); it != records.end()) return it->second;
  return calibrate_gate(c, sys, family, s);
}

// --- subcommands -----------------------------------------------------------

struct SynthesizeArgs {
  std::string target;
  std::string family = "sep-sym";
  std::string nontargets = "all";
  std::optional<double> sigma_mhz;
  std::optional<double> t_ns;
  double delta_mhz = 0.0;
  double angle = units::kPi / 2;
};

void cmd_synthesize(const Context& c, const SynthesizeArgs& a) {
  const auto sys = c.cfg.system(a.target);
  const Family family = parse_family(a.family);
  const double sigma = units::mhz(a.sigma_mhz.value_or(c.cfg.defaults.sigma_hz * 1e-6));
  const double t = units::ns(a.t_ns.value_or(c.cfg.defaults.t_ns));
  const auto profile =
      family_profile(family, sys.target(), nontargets_of(sys, a.nontargets), sigma, units::mhz(a.delta_mhz));
  const auto pulse = synthesize_with_area(profile, t, c.dt, a.angle);
  const std::string stem = "waveform_" + a.target + "_" + to_string(family);
  write(c, stem + ".csv", io::waveform_csv(pulse.waveform));
  write_json(c, stem + ".json", io::waveform_sidecar(pulse.waveform, pulse.profile, a.target, family));
  const auto edges = discontinuity_metric(pulse.waveform);
  std::printf("discontinuity: s_x(start) = %.6g rad/s, s_x(end) = %.6g rad/s\n", edges.start, edges.end);
}

struct SweepArgs {
  std::string family = "all";
  std::string target;
  double t_min = 10, t_max = 100;
  int t_points = 30;
  double d_min = -60, d_max = 60;
  int d_points = 30;
  int levels = 2;
};

void cmd_sweep(const Context& c, const SweepArgs& a) {
  check_range(a.t_min, a.t_max, a.t_points, "--t-ns range");
  check_range(a.d_min, a.d_max, a.d_points, "--delta-mhz range");
  if (a.t_min <= 0) fail(ErrorKind::ConfigError, "--t-min must be positive");
  if (a.levels != 2 && a.levels != 3) fail(ErrorKind::ConfigError, "--levels must be 2 or 3");
  const std::string label = a.target.empty() ? c.cfg.shared_line.front() : a.target;
  QubitSpec target = c.cfg.qubit(label);
  target.levels = a.levels;
  QubitSpec nontarget = target;
  nontarget.label = "nontarget";
  std::vector<double> ts, ds;
  for (double v : linspace(a.t_min, a.t_max, a.t_points)) ts.push_back(units::ns(v));
  for (double v : linspace(a.d_min, a.d_max, a.d_points)) ds.push_back(units::mhz(v));
  for (Family f : families_of(a.family)) {
    const auto map = excitation_map(target, nontarget, f, ts, ds, c.dt);
    write(c, "sweep_" + to_string(f) + ".csv", io::excitation_map_csv(map));
    auto meta = io::excitation_map_meta(map);
    meta["levels"] = a.levels;
    write_json(c, "sweep_" + to_string(f) + ".json", meta);
  }
}

struct CalibrateArgs {
  std::string target;
  std::string family = "sep-sym";
  GateSettings gate;
};

void cmd_calibrate(const Context& c, const CalibrateArgs& a) {
  for (const auto& t : targets_of(c, a.target)) {
    const auto sys = c.cfg.system(t);
    for (Family f : families_of(a.family)) {
      const auto gate = calibrate_gate(c, sys, f, a.gate);
      write_json(c, "calibration_" + t + "_" + to_string(f) + ".json", io::calibration_to_json(gate, f));
      std::printf("%s %s: rotation_angle = %.12f rad, delta/2pi = %.6f MHz, A = %.9g\n", t.c_str(),
                  to_string(f).c_str(), gate.rotation_angle, units::to_mhz(gate.profile.delta),
                  gate.profile.amplitude);
    }
  }
}

struct RabiArgs {
  std::string target = "all";
  std::string family = "both";
  std::string noise = "unitary";
  GateSettings gate;
};

Noise parse_noise(const std::string& s) {
  if (s == "unitary") return Noise::Unitary;
  if (s == "open") return Noise::Open;
  fail(ErrorKind::ConfigError, "--noise must be 'unitary' or 'open'");
}

void cmd_rabi(const Context& c, const RabiArgs& a) {
  const Noise noise = parse_noise(a.noise);
  const auto records = load_records(a.gate.records);
  int count = 0;
  for (const auto& t : targets_of(c, a.target)) {
    const auto sys = c.cfg.system(t);
    for (Family f : families_of(a.family)) {
      const auto gate = gate_for(c, sys, f, a.gate, records);
      const auto series = repeated_gate_scan(sys, gate, a.gate.n_max, noise, c.shots, c.seed);
      write(c, "rabi_" + t + "_" + to_string(f) + ".csv", io::rabi_csv(series));
      count += static_cast<int>(series.size());
    }
  }
  std::printf("%d series written\n", count);
}

struct RbArgs {
  std::string target;
  std::string family = "both";
  std::string noise = "open";
  std::vector<int> lengths{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
  int seeds = 50;
  GateSettings gate;
};

void cmd_rb(const Context& c, const RbArgs& a) {
  const auto records = load_records(a.gate.records);
  RBOptions opts;
  opts.lengths = a.lengths;
  opts.seeds = a.seeds;
  opts.noise = parse_noise(a.noise);
  opts.shots = c.shots;
  opts.seed = c.seed;
  const std::string target = a.target.empty() ? c.cfg.shared_line.front() : a.target;
  for (const auto& t : targets_of(c, target)) {
    const auto sys = c.cfg.system(t);
    for (Family f : families_of(a.family)) {
      const auto gate = gate_for(c, sys, f, a.gate, records);
      const auto result = simulate_rb(sys, gate, opts);
      const std::string stem = "rb_" + t + "_" + to_string(f);
      for (const auto& s : result.series) write(c, stem + "_" + s.label + ".csv", io::rb_series_csv(result, s));
      write_json(c, stem + ".json", io::rb_to_json(result));
      for (const auto& s : result.series) {
        if (s.fit && s.fit->degenerate)
          std::printf("%s %s %s: DegenerateData: decay not identifiable, B = %.6f\n", t.c_str(),
                      to_string(f).c_str(), s.label.c_str(), s.fit->b);
        else if (s.fit)
          std::printf("%s %s %s: fidelity = %.5f%%, gamma_ex = %.4g%%\n", t.c_str(), to_string(f).c_str(),
                      s.label.c_str(), 100 * s.fit->fidelity, 100 * s.fit->gamma_ex);
        else
          std::printf("%s %s %s: fit failed: %s\n", t.c_str(), to_string(f).c_str(), s.label.c_str(),
                      s.fit_error.c_str());
      }
    }
  }
}

struct LeakageArgs {
  std::string family = "sep-sym";
  double s_min = 15, s_max = 60;
  int points = 10;
  double t_ns = 40;
  double detuning_mhz = 30;
  double anharmonicity_mhz = -300;
};

void cmd_leakage(const Context& c, const LeakageArgs& a) {
  check_range(a.s_min, a.s_max, a.points, "--sigma-mhz range");
  if (a.s_min <= 0) fail(ErrorKind::ConfigError, "--sigma-min must be positive");
  const auto& base = c.cfg.qubit(c.cfg.shared_line.front());
  QubitSpec target{"target", base.frequency, units::mhz(a.anharmonicity_mhz), 3, {}, {}};
  QubitSpec nontarget{"nontarget", base.frequency + units::mhz(a.detuning_mhz), units::mhz(a.anharmonicity_mhz), 3,
                      {}, {}};
  std::vector<double> sigmas;
  for (double s : linspace(a.s_min, a.s_max, a.points)) sigmas.push_back(units::mhz(s));
  const auto pts = leakage_scan(target, nontarget, parse_family(a.family), sigmas, units::ns(a.t_ns), c.dt);
  write(c, "leakage_scan.csv", io::leakage_csv(pts));
}

struct DragArgs {
  std::string family = "sep-sym";
  double l_min = -2, l_max = 2;
  int points = 81;
  double t_ns = 16;
  double detuning_mhz = -46;
  double anharmonicity_mhz = -300;
  std::optional<double> sigma_mhz;  // default: 1/T
};

void cmd_drag(const Context& c, const DragArgs& a) {
  check_range(a.l_min, a.l_max, a.points, "--lambda range");
  const auto& base = c.cfg.qubit(c.cfg.shared_line.front());
  QubitSpec target{"target", base.frequency, units::mhz(a.anharmonicity_mhz), 3, {}, {}};
  QubitSpec nontarget{"nontarget", base.frequency + units::mhz(a.detuning_mhz), units::mhz(a.anharmonicity_mhz), 3,
                      {}, {}};
  const double t = units::ns(a.t_ns);
  const double sigma = a.sigma_mhz ? units::mhz(*a.sigma_mhz) : units::kTwoPi / t;
  const auto scan =
      drag_scan(target, nontarget, parse_family(a.family), t, sigma, linspace(a.l_min, a.l_max, a.points), c.dt);
  write(c, "drag_scan.csv", io::drag_csv(scan));
  const auto& best = scan.optimum();
  write_json(c, "drag_scan.json",
             {{"family", a.family},
              {"T_ns", a.t_ns},
              {"sigma_MHz", units::to_mhz(sigma)},
              {"detuning_MHz", a.detuning_mhz},
              {"anharmonicity_MHz", a.anharmonicity_mhz},
              {"best_lambda", best.lambda},
              {"Pf_target", best.target_pf},
              {"Pe_nontarget", best.nontarget_pe},
              {"Pf_nontarget", best.nontarget_pf}});
  std::printf("best lambda = %.4g: target P_f = %.3g, non-target P_e = %.3g, P_f = %.3g\n", best.lambda,
              best.target_pf, best.nontarget_pe, best.nontarget_pf);
}

int report(const std::string& kind, const std::string& what, int code) {
  std::cerr << "sepulse: error: " << kind << ": " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective-excitation pulse synthesis, simulation, calibration and benchmarking"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Device JSON file")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--dt-ns", g.dt_ns, "Sample period in ns (default: config)");
  app.add_option("--shots", g.shots, "Shots per point, 0 = exact (default: config)");

  SynthesizeArgs syn;
  auto* s_syn = app.add_subcommand("synthesize", "Synthesize an area-normalized waveform");
  s_syn->add_option("--target", syn.target, "Target qubit label")->required();
  s_syn->add_option("--family", syn.family, "gaussian | sep-asym | sep-sym (alias sep)")->capture_default_str();
  s_syn->add_option("--nontargets", syn.nontargets, "all | none | comma-separated labels")->capture_default_str();
  s_syn->add_option("--sigma-mhz", syn.sigma_mhz, "sigma/2pi in MHz (default: config)");
  s_syn->add_option("--t-ns", syn.t_ns, "Duration in ns (default: config)");
  s_syn->add_option("--delta-mhz", syn.delta_mhz, "Gaussian shift delta/2pi in MHz")->capture_default_str();
  s_syn->add_option("--angle", syn.angle, "Area in rad")->capture_default_str();

  SweepArgs sw;
  auto* s_sw = app.add_subcommand("sweep", "Excitation maps over duration and detuning");
  s_sw->add_option("--family", sw.family, "all | gaussian | sep-asym | sep-sym")->capture_default_str();
  s_sw->add_option("--target", sw.target, "Qubit whose frequency anchors the map (default: first on line)");
  s_sw->add_option("--t-min", sw.t_min, "Shortest duration, ns")->capture_default_str();
  s_sw->add_option("--t-max", sw.t_max, "Longest duration, ns")->capture_default_str();
  s_sw->add_option("--t-points", sw.t_points)->capture_default_str();
  s_sw->add_option("--delta-min", sw.d_min, "Lowest detuning, MHz")->capture_default_str();
  s_sw->add_option("--delta-max", sw.d_max, "Highest detuning, MHz")->capture_default_str();
  s_sw->add_option("--delta-points", sw.d_points)->capture_default_str();
  s_sw->add_option("--levels", sw.levels, "2 or 3")->capture_default_str();

  CalibrateArgs cal;
  auto* s_cal = app.add_subcommand("calibrate", "Calibrate amplitude and delta; write a record");
  s_cal->add_option("--target", cal.target, "Target label or 'all'")->required();
  s_cal->add_option("--family", cal.family, "gaussian | sep-asym | sep-sym | both")->capture_default_str();
  s_cal->add_option("--n-max", cal.gate.n_max, "Repeated gates in the delta objective")->capture_default_str();
  add_gate_options(s_cal, cal.gate);

  RabiArgs rabi;
  auto* s_rabi = app.add_subcommand("rabi", "Repeated-X90 scans for every measured qubit");
  s_rabi->add_option("--target", rabi.target, "Target label or 'all'")->capture_default_str();
  s_rabi->add_option("--family", rabi.family, "both | gaussian | sep-asym | sep-sym")->capture_default_str();
  s_rabi->add_option("--n-max", rabi.gate.n_max)->capture_default_str();
  s_rabi->add_option("--noise", rabi.noise, "unitary | open")->capture_default_str();
  s_rabi->add_option("--calibration", rabi.gate.records, "Calibration record(s) to use instead of calibrating");
  add_gate_options(s_rabi, rabi.gate);

  RbArgs rb;
  auto* s_rb = app.add_subcommand("rb", "Randomized benchmarking with fits");
  s_rb->add_option("--target", rb.target, "Target label or 'all' (default: first on line)");
  s_rb->add_option("--family", rb.family, "both | gaussian | sep-asym | sep-sym")->capture_default_str();
  s_rb->add_option("--lengths", rb.lengths, "Sequence lengths")->delimiter(',')->capture_default_str();
  s_rb->add_option("--seeds", rb.seeds, "Random sequences per length")->capture_default_str();
  s_rb->add_option("--noise", rb.noise, "unitary | open")->capture_default_str();
  s_rb->add_option("--calibration", rb.gate.records, "Calibration record(s) to use instead of calibrating");
  add_gate_options(s_rb, rb.gate);

  LeakageArgs lk;
  auto* s_lk = app.add_subcommand("leakage-scan", "Non-target P_e and P_f versus sigma");
  s_lk->add_option("--family", lk.family)->capture_default_str();
  s_lk->add_option("--sigma-min", lk.s_min, "MHz")->capture_default_str();
  s_lk->add_option("--sigma-max", lk.s_max, "MHz")->capture_default_str();
  s_lk->add_option("--points", lk.points)->capture_default_str();
  s_lk->add_option("--t-ns", lk.t_ns)->capture_default_str();
  s_lk->add_option("--detuning-mhz", lk.detuning_mhz)->capture_default_str();
  s_lk->add_option("--anharmonicity-mhz", lk.anharmonicity_mhz)->capture_default_str();

  DragArgs dr;
  auto* s_dr = app.add_subcommand("drag-scan", "Leakage versus DRAG coefficient");
  s_dr->add_option("--family", dr.family)->capture_default_str();
  s_dr->add_option("--lambda-min", dr.l_min)->capture_default_str();
  s_dr->add_option("--lambda-max", dr.l_max)->capture_default_str();
  s_dr->add_option("--points", dr.points)->capture_default_str();
  s_dr->add_option("--t-ns", dr.t_ns)->capture_default_str();
  s_dr->add_option("--detuning-mhz", dr.detuning_mhz)->capture_default_str();
  s_dr->add_option("--anharmonicity-mhz", dr.anharmonicity_mhz)->capture_default_str();
  s_dr->add_option("--sigma-mhz", dr.sigma_mhz, "sigma/2pi in MHz (default: 1/T)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("ConfigError", e.what(), 2);
  }

  try {
    const Context c = load(g);
    if (*s_syn) cmd_synthesize(c, syn);
    if (*s_sw) cmd_sweep(c, sw);
    if (*s_cal) cmd_calibrate(c, cal);
    if (*s_rabi) cmd_rabi(c, rabi);
    if (*s_rb) cmd_rb(c, rb);
    if (*s_lk) cmd_leakage(c, lk);
    if (*s_dr) cmd_drag(c, dr);
  } catch (const Error& e) {
    std::cerr << "sepulse: error: " << e.what() << "\n";
    return e.is_config_error() ? 2 : 3;
  } catch (const fs::filesystem_error& e) {
    return report("IOError", e.what(), 2);
  } catch (const std::exception& e) {
    return report("Internal", e.what(), 3);
  }
  return 0;
}
