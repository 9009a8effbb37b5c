// Copyright 2026 The invforge Authors
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

// Command-line front end. Every subcommand first resolves its flags into a
// self-contained JSON configuration, then executes from that configuration
// alone. The configuration is written into a manifest next to the output, and
// `--manifest` feeds a recorded configuration back in for a replay.

#ifndef INVFORGE_CLI_HPP
#define INVFORGE_CLI_HPP

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "invforge/circuit_json.hpp"
#include "invforge/decompose.hpp"
#include "invforge/errors.hpp"
#include "invforge/experiment.hpp"
#include "invforge/noisesim.hpp"
#include "invforge/pulse.hpp"
#include "invforge/synth.hpp"
#include "invforge/version.hpp"

namespace invforge::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kSimulationBound = 3, kIo = 4 };

inline constexpr const char* kBuiltinCalibration = "builtin";

inline std::string manifest_path_for(const std::string& out) { return out + ".manifest.json"; }

inline std::string resolve_calibration_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("INVFORGE_CAL"); env != nullptr && *env != '\0') return env;
  return kBuiltinCalibration;
}

inline CalibrationConfig calibration_at(const std::string& path) {
  if (path == kBuiltinCalibration) return default_calibration();
  return load_calibration(path);
}

/// "zero", "fixed", "default" (fixed plus seeded per-channel spread) or a JSON file.
inline json resolve_noise(const std::string& which, std::uint64_t seed, bool seed_given) {
  if (which == "zero") return noise_model_to_json(CoherentNoiseModel::zero());
  if (which == "fixed") return noise_model_to_json(CoherentNoiseModel::fixed_default());
  if (which == "default") return noise_model_to_json(CoherentNoiseModel::sampled_default(seed));
  CoherentNoiseModel nm = noise_model_from_json(read_json_file(which));
  if (seed_given && nm.sampling()) {
    NoiseSampling s = *nm.sampling();
    s.seed = seed;
    nm.set_sampling(s);
  }
  return noise_model_to_json(nm);
}

inline void check_format(const std::string& f) {
  if (f != "json" && f != "csv") throw ValidationError("--format must be json or csv");
}

inline std::string circuit_to_csv(const Circuit& c) {
  std::ostringstream os;
  os << "index,kind,qubits,params,variant,pair_id\n";
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    os << i << ',' << to_string(g.kind) << ',';
    for (std::size_t k = 0; k < g.qubits.size(); ++k) os << (k ? " " : "") << g.qubits[k];
    os << ',';
    for (std::size_t k = 0; k < g.params.size(); ++k) os << (k ? " " : "") << format_real(g.params[k]);
    os << ',' << (g.is_inverse() ? "inverse" : "standard") << ',';
    if (g.pair_id) os << *g.pair_id;
    os << '\n';
  }
  return os.str();
}

inline std::string render_circuit(const Circuit& c, const std::string& format) {
  return format == "csv" ? circuit_to_csv(c) : circuit_to_json(c).dump(2) + "\n";
}

// ---- executors: resolved configuration in, output text out ----

inline std::string exec_synth(const json& cfg) {
  const BenchmarkSpec spec = benchmark_spec_from_json(cfg.at("spec"));
  return render_circuit(build_benchmark(spec), cfg.at("format").get<std::string>());
}

inline std::string exec_compile(const json& cfg) {
  const Circuit in = circuit_from_json(read_json_file(cfg.at("circuit").get<std::string>()));
  PassConfig pc;
  pc.hidden_inverse = cfg.at("hidden_inverse").get<bool>();
  pc.peephole = cfg.at("peephole").get<bool>();
  pc.max_peephole_window = cfg.at("max_peephole_window").get<std::size_t>();
  return render_circuit(run_pipeline(in, pc), cfg.at("format").get<std::string>());
}

inline std::string exec_pulses(const json& cfg) {
  const Circuit c = circuit_from_json(read_json_file(cfg.at("circuit").get<std::string>()));
  const CalibrationConfig cal = calibration_at(cfg.at("calibration").get<std::string>());
  if (c.n_qubits > cal.n_qubits) throw ValidationError("calibration covers fewer qubits than the circuit");
  const auto schedules = circuit_to_schedule(c, cal);
  if (cfg.at("format").get<std::string>() == "csv") {
    std::ostringstream os;
    os << "schedule,gate,channel,t0,duration,amp_re,amp_im,phase,axis,qubits,angle\n";
    for (std::size_t s = 0; s < schedules.size(); ++s)
      for (const PulseInstruction& in : schedules[s].instructions) {
        os << s << ',' << to_string(schedules[s].gate_ref.kind) << ',' << in.channel.name() << ',' << in.t0 << ','
           << in.duration << ',' << format_real(in.amplitude.real()) << ',' << format_real(in.amplitude.imag())
           << ',' << format_real(in.phase) << ',' << to_string(in.primitive.axis) << ',';
        for (std::size_t k = 0; k < in.primitive.qubits.size(); ++k)
          os << (k ? " " : "") << in.primitive.qubits[k];
        os << ',' << format_real(in.primitive.angle) << '\n';
      }
    return os.str();
  }
  json j;
  j["n_qubits"] = c.n_qubits;
  json ss = json::array();
  for (const auto& s : schedules) ss.push_back(schedule_to_json(s));
  j["schedules"] = ss;
  json prims = json::array();
  for (const Primitive& p : schedules_to_primitives(schedules))
    prims.push_back({{"axis", std::string(to_string(p.axis))}, {"qubits", p.qubits}, {"angle", p.angle}});
  j["primitives"] = prims;
  return j.dump(2) + "\n";
}

inline std::string exec_simulate(const json& cfg) {
  const CoherentNoiseModel nm = noise_model_from_json(cfg.at("noise_model")).with_draw(cfg.at("draw").get<std::uint64_t>());
  std::vector<Primitive> prims;
  std::size_t n = 0;
  std::optional<Distribution> ideal;
  if (!cfg.at("circuit").is_null()) {
    const Circuit c = circuit_from_json(read_json_file(cfg.at("circuit").get<std::string>()));
    const CalibrationConfig cal = calibration_at(cfg.at("calibration").get<std::string>());
    if (c.n_qubits > cal.n_qubits) throw ValidationError("calibration covers fewer qubits than the circuit");
    n = c.n_qubits;
    prims = schedules_to_primitives(circuit_to_schedule(c, cal));
    ideal = distribution(simulate_ideal(c));
  } else {
    const json j = read_json_file(cfg.at("schedules").get<std::string>());
    std::vector<PulseSchedule> ss;
    try {
      n = j.at("n_qubits").get<std::size_t>();
      for (const json& s : j.at("schedules")) ss.push_back(schedule_from_json(s));
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed schedules file: ") + e.what());
    }
    prims = schedules_to_primitives(ss);
    ideal = distribution(simulate(prims, CoherentNoiseModel::zero(), Statevector(n)));
  }
  if (!cfg.at("reference").is_null()) {
    const Circuit ref = circuit_from_json(read_json_file(cfg.at("reference").get<std::string>()));
    if (ref.n_qubits != n) throw ValidationError("reference circuit width differs from the simulated one");
    ideal = distribution(simulate_ideal(ref));
  }
  const Statevector sv = simulate(prims, nm, Statevector(n));
  const std::uint64_t shots = cfg.at("shots").get<std::uint64_t>();
  const Distribution dist = shots == 0 ? distribution(sv) : sample(sv, shots, cfg.at("seed").get<std::uint64_t>());
  const double f = fidelity(*ideal, dist);

  if (cfg.at("format").get<std::string>() == "csv") {
    std::ostringstream os;
    os << "bitstring,probability,ideal\n";
    std::map<std::uint64_t, bool> keys;
    for (const auto& [k, p] : dist.probs) keys[k] = true;
    for (const auto& [k, p] : ideal->probs) keys[k] = true;
    for (const auto& [k, unused] : keys)
      os << dist.bitstring(k) << ',' << format_real(dist.at(k)) << ',' << format_real(ideal->at(k)) << '\n';
    os << "# fidelity," << format_real(f) << '\n';
    return os.str();
  }
  json j;
  j["n_qubits"] = n;
  j["fidelity"] = f;
  j["distribution"] = distribution_to_json(dist);
  j["ideal"] = distribution_to_json(*ideal);
  return j.dump(2) + "\n";
}

struct BenchOutput {
  std::string text;
  Report report;
};

inline BenchOutput exec_bench(const json& cfg, unsigned threads) {
  std::vector<BenchmarkSpec> specs;
  for (const json& s : cfg.at("specs")) specs.push_back(benchmark_spec_from_json(s));
  const CoherentNoiseModel nm = noise_model_from_json(cfg.at("noise_model"));
  PassConfig pc;
  pc.peephole = cfg.at("peephole").get<bool>();
  pc.max_peephole_window = cfg.at("max_peephole_window").get<std::size_t>();
  const CalibrationConfig cal = calibration_at(cfg.at("calibration").get<std::string>());
  BenchOutput out;
  out.report = run_suite(specs, nm, pc, cal, cfg.at("draws").get<std::size_t>(), threads);
  out.text = cfg.at("format").get<std::string>() == "csv" ? report_to_csv(out.report)
                                                           : report_to_json(out.report).dump(2) + "\n";
  return out;
}

// ---- driver ----

struct Invocation {
  std::string subcommand;
  json config;
  std::string out_path;
  std::string gnuplot_prefix;
  unsigned threads = 0;
};

inline json read_manifest_config(const std::string& path, const std::string& subcommand) {
  const json m = read_json_file(path);
  if (!m.contains("subcommand") || !m.contains("config")) throw ValidationError("'" + path + "' is not a manifest");
  if (m.at("subcommand").get<std::string>() != subcommand)
    throw ValidationError("manifest was recorded for '" + m.at("subcommand").get<std::string>() + "'");
  return m.at("config");
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"invforge: hidden-inverse compilation, pulse lowering and coherent-noise simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Invocation inv;
  std::string manifest_in;
  std::string format = "json";
  std::uint64_t seed = 0;

  const auto shared = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Seed for every random choice of the stage");
    sub->add_option("--out", inv.out_path, "Output file (stdout when omitted); a manifest is written next to it");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--manifest", manifest_in, "Replay the configuration recorded in a manifest");
  };

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a benchmark circuit");
  shared(synth);
  std::string spec_path, bench_name = "qaoa-maxcut";
  std::size_t n_qubits = 0;
  int n_folds = 0;
  synth->add_option("--spec", spec_path, "Benchmark spec JSON");
  synth->add_option("--name", bench_name, "Benchmark name when no spec file is given");
  synth->add_option("--n-qubits", n_qubits, "Register size");
  synth->add_option("--n-folds", n_folds, "Fold count for crz-folding");

  // compile
  auto* compile = app.add_subcommand("compile", "Decompose to basis gates and mark hidden-inverse pairs");
  shared(compile);
  std::string circuit_path;
  bool hidden_inverse = true, peephole = true;
  std::size_t window = PassConfig{}.max_peephole_window;
  compile->add_option("--circuit", circuit_path, "Input circuit JSON");
  compile->add_option("--hidden-inverse", hidden_inverse, "Emit inverse variants (true/false)");
  compile->add_option("--peephole", peephole, "Run the pairing peephole (true/false)");
  compile->add_option("--window", window, "Peephole search window in gates");

  // pulses
  auto* pulses = app.add_subcommand("pulses", "Lower a basis-gate circuit to pulse schedules");
  shared(pulses);
  std::string cal_flag;
  pulses->add_option("--circuit", circuit_path, "Input basis-gate circuit JSON");
  pulses->add_option("--cal", cal_flag, "Calibration JSON (default: $INVFORGE_CAL, then built-in)");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate under coherent noise and report fidelity");
  shared(simulate_cmd);
  std::string schedules_path, reference_path, noise = "zero";
  std::uint64_t draw = 0, shots = 0;
  simulate_cmd->add_option("--circuit", circuit_path, "Basis-gate circuit JSON");
  simulate_cmd->add_option("--schedules", schedules_path, "Schedules JSON written by `pulses`");
  simulate_cmd->add_option("--reference", reference_path, "Circuit defining the ideal distribution");
  simulate_cmd->add_option("--cal", cal_flag, "Calibration JSON (default: $INVFORGE_CAL, then built-in)");
  simulate_cmd->add_option("--noise", noise, "zero | fixed | default | <noise.json>");
  simulate_cmd->add_option("--draw", draw, "Noise draw index");
  simulate_cmd->add_option("--shots", shots, "Sample this many shots (0 = exact distribution)");

  // bench
  auto* bench = app.add_subcommand("bench", "Compare standard and hidden-inverse compilation on a suite");
  shared(bench);
  std::string suite, bench_noise = "default";
  std::size_t draws = 10;
  bench->add_option("--suite", suite, "standard | crz-folding")->check(CLI::IsMember({"standard", "crz-folding"}));
  bench->add_option("--spec", spec_path, "Benchmark spec JSON (object or array) instead of a suite");
  bench->add_option("--noise", bench_noise, "zero | fixed | default | <noise.json>");
  bench->add_option("--draws", draws, "Noise draws per benchmark");
  bench->add_option("--cal", cal_flag, "Calibration JSON (default: $INVFORGE_CAL, then built-in)");
  bench->add_option("--peephole", peephole, "Run the pairing peephole (true/false)");
  bench->add_option("--window", window, "Peephole search window in gates");
  bench->add_option("--threads", inv.threads, "Worker threads (0 = all cores)");
  bench->add_option("--emit-gnuplot", inv.gnuplot_prefix, "Write <prefix>.dat and <prefix>.gp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  inv.subcommand = sub->get_name();
  const bool seed_given = sub->count("--seed") > 0;
  const auto start = std::chrono::steady_clock::now();

  try {
    if (!manifest_in.empty()) {
      inv.config = read_manifest_config(manifest_in, inv.subcommand);
    } else {
      check_format(format);
      json& cfg = inv.config;
      if (inv.subcommand == "synth") {
        BenchmarkSpec spec;
        if (!spec_path.empty()) {
          spec = benchmark_spec_from_json(read_json_file(spec_path));
        } else {
          spec.name = bench_name;
          if (spec.name == "crz-folding") spec.n_qubits = 2;
        }
        if (n_qubits != 0) spec.n_qubits = n_qubits;
        if (n_folds != 0) spec.n_folds = n_folds;
        if (seed_given) spec.seed = seed;
        validate_benchmark_spec(spec);
        cfg["spec"] = benchmark_spec_to_json(spec);
      } else if (inv.subcommand == "compile") {
        if (circuit_path.empty()) throw ValidationError("compile needs --circuit");
        cfg["circuit"] = circuit_path;
        cfg["hidden_inverse"] = hidden_inverse;
        cfg["peephole"] = peephole;
        cfg["max_peephole_window"] = window;
      } else if (inv.subcommand == "pulses") {
        if (circuit_path.empty()) throw ValidationError("pulses needs --circuit");
        cfg["circuit"] = circuit_path;
        cfg["calibration"] = resolve_calibration_path(cal_flag);
      } else if (inv.subcommand == "simulate") {
        if (circuit_path.empty() == schedules_path.empty())
          throw ValidationError("simulate needs exactly one of --circuit and --schedules");
        cfg["circuit"] = circuit_path.empty() ? json(nullptr) : json(circuit_path);
        cfg["schedules"] = schedules_path.empty() ? json(nullptr) : json(schedules_path);
        cfg["reference"] = reference_path.empty() ? json(nullptr) : json(reference_path);
        cfg["calibration"] = resolve_calibration_path(cal_flag);
        cfg["noise_model"] = resolve_noise(noise, seed, seed_given);
        cfg["draw"] = draw;
        cfg["shots"] = shots;
        cfg["seed"] = seed;
      } else {
        if (suite.empty() == spec_path.empty()) throw ValidationError("bench needs exactly one of --suite and --spec");
        if (!seed_given) throw ValidationError("bench requires an explicit --seed");
        json specs = json::array();
        if (suite == "standard") {
          for (const auto& s : standard_suite()) specs.push_back(benchmark_spec_to_json(s));
        } else if (suite == "crz-folding") {
          for (const auto& s : crz_folding_suite({4, 8, 16, 32}, seed)) specs.push_back(benchmark_spec_to_json(s));
        } else {
          const json j = read_json_file(spec_path);
          for (const json& s : j.is_array() ? j : json::array({j}))
            specs.push_back(benchmark_spec_to_json(benchmark_spec_from_json(s)));
        }
        cfg["suite"] = suite.empty() ? "custom" : suite;
        cfg["specs"] = specs;
        cfg["noise"] = bench_noise;
        cfg["noise_model"] = resolve_noise(bench_noise, seed, true);
        cfg["draws"] = draws;
        cfg["seed"] = seed;
        cfg["peephole"] = peephole;
        cfg["max_peephole_window"] = window;
        cfg["calibration"] = resolve_calibration_path(cal_flag);
      }
      cfg["format"] = format;
    }

    std::string text;
    std::vector<std::string> outputs;
    const json& cfg = inv.config;
    if (inv.subcommand == "synth") {
      text = exec_synth(cfg);
    } else if (inv.subcommand == "compile") {
      text = exec_compile(cfg);
    } else if (inv.subcommand == "pulses") {
      text = exec_pulses(cfg);
    } else if (inv.subcommand == "simulate") {
      text = exec_simulate(cfg);
    } else {
      BenchOutput b = exec_bench(cfg, inv.threads);
      text = std::move(b.text);
      if (!inv.gnuplot_prefix.empty()) {
        const std::string dat = inv.gnuplot_prefix + ".dat", gp = inv.gnuplot_prefix + ".gp";
        write_text_file(dat, report_to_gnuplot_data(b.report));
        write_text_file(gp, gnuplot_script(dat, inv.gnuplot_prefix + ".png"));
        outputs.push_back(dat);
        outputs.push_back(gp);
      }
    }

    if (inv.out_path.empty()) {
      out << text;
    } else {
      write_text_file(inv.out_path, text);
      outputs.insert(outputs.begin(), inv.out_path);
      json manifest;
      manifest["tool"] = "invforge";
      manifest["version"] = kVersion;
      manifest["subcommand"] = inv.subcommand;
      manifest["config"] = inv.config;
      manifest["outputs"] = outputs;
      manifest["wall_clock_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_text_file(manifest_path_for(inv.out_path), manifest.dump(2) + "\n");
    }
    return kOk;
  } catch (const ValidationError& e) {
    err << "invforge " << inv.subcommand << ": validation error: " << e.what() << '\n';
    if (!inv.out_path.empty()) err << "manifest: " << manifest_path_for(inv.out_path) << '\n';
    return kValidation;
  } catch (const SimulationBoundError& e) {
    err << "invforge " << inv.subcommand << ": simulation bound: " << e.what() << '\n';
    if (!inv.out_path.empty()) err << "manifest: " << manifest_path_for(inv.out_path) << '\n';
    return kSimulationBound;
  } catch (const json::exception& e) {
    err << "invforge " << inv.subcommand << ": validation error: malformed configuration: " << e.what() << '\n';
    return kValidation;
  } catch (const IoError& e) {
    err << "invforge " << inv.subcommand << ": I/O error: " << e.what() << '\n';
    if (!inv.out_path.empty()) err << "manifest: " << manifest_path_for(inv.out_path) << '\n';
    return kIo;
  }
}

}  // namespace invforge::cli

#endif  // INVFORGE_CLI_HPP
