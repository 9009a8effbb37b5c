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

#ifndef INVFORGE_EXPERIMENT_HPP
#define INVFORGE_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "invforge/decompose.hpp"
#include "invforge/noisesim.hpp"
#include "invforge/pulse.hpp"
#include "invforge/synth.hpp"

namespace invforge {

struct ReportRow {
  std::string name;
  std::size_t n_qubits = 0;
  double f_std = 0.0;
  double f_hi = 0.0;
  double improvement = 0.0;  // mean over draws of (F_hi - F_std) / F_std
  std::uint64_t seeds = 0;   // number of noise draws averaged

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct Report {
  std::vector<ReportRow> rows;

  double mean_improvement() const {
    if (rows.empty()) return 0.0;
    double s = 0.0;
    for (const ReportRow& r : rows) s += r.improvement;
    return s / static_cast<double>(rows.size());
  }
};

struct DrawResult {
  double f_std = 0.0;
  double f_hi = 0.0;
};

/// Label used in reports: "<name>-<n>q", or "crz-folding-<n_folds>" for folding.
inline std::string benchmark_label(const BenchmarkSpec& s) {
  if (s.name == "crz-folding") return s.name + "-" + std::to_string(s.n_folds);
  return s.name + "-" + std::to_string(s.n_qubits) + "q";
}

/// One draw: compile both ways, simulate under nm.with_draw(draw), compare with
/// the ideal distribution. For crz-folding the angle seed is spec.seed + draw.
inline DrawResult run_draw(BenchmarkSpec spec, const CoherentNoiseModel& nm, const PassConfig& cfg,
                           const CalibrationConfig& cal, std::uint64_t draw) {
  if (spec.name == "crz-folding") spec.seed += draw;
  const Circuit logical = build_benchmark(spec);
  if (logical.n_qubits > cal.n_qubits) throw ValidationError("calibration covers fewer qubits than the benchmark");
  const Distribution ideal = distribution(simulate_ideal(logical));
  const CoherentNoiseModel noise = nm.with_draw(draw);

  PassConfig std_cfg = cfg;
  std_cfg.hidden_inverse = false;
  PassConfig hi_cfg = cfg;
  hi_cfg.hidden_inverse = true;
  const Circuit c_std = run_pipeline(logical, std_cfg);
  const Circuit c_hi = run_pipeline(logical, hi_cfg);

  DrawResult r;
  r.f_std = fidelity(ideal, distribution(simulate(c_std, cal, noise)));
  r.f_hi = fidelity(ideal, distribution(simulate(c_hi, cal, noise)));
  return r;
}

inline ReportRow summarize(const BenchmarkSpec& spec, const std::vector<DrawResult>& draws) {
  ReportRow row;
  row.name = benchmark_label(spec);
  row.n_qubits = spec.n_qubits;
  row.seeds = draws.size();
  for (const DrawResult& d : draws) {
    row.f_std += d.f_std;
    row.f_hi += d.f_hi;
    row.improvement += d.f_std > 0.0 ? (d.f_hi - d.f_std) / d.f_std : 0.0;
  }
  const double k = static_cast<double>(draws.size());
  row.f_std /= k;
  row.f_hi /= k;
  row.improvement /= k;
  return row;
}

/// Runs `fn(i)` for i in [0, count) on up to `threads` workers; the first
/// exception is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Evaluates every (spec, draw) pair; rows come back in spec order regardless
/// of scheduling.
inline Report run_suite(const std::vector<BenchmarkSpec>& specs, const CoherentNoiseModel& nm, const PassConfig& cfg,
                        const CalibrationConfig& cal, std::size_t draws, unsigned threads = 0) {
  if (draws == 0) throw ValidationError("draws must be positive");
  for (const BenchmarkSpec& s : specs) validate_benchmark_spec(s);
  std::vector<DrawResult> results(specs.size() * draws);
  parallel_for(results.size(), threads, [&](std::size_t i) {
    results[i] = run_draw(specs[i / draws], nm, cfg, cal, i % draws);
  });
  Report report;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const auto first = results.begin() + static_cast<std::ptrdiff_t>(s * draws);
    report.rows.push_back(summarize(specs[s], std::vector<DrawResult>(first, first + static_cast<std::ptrdiff_t>(draws))));
  }
  return report;
}

inline ReportRow run_experiment(const BenchmarkSpec& spec, const CoherentNoiseModel& nm, const PassConfig& cfg,
                                const CalibrationConfig& cal, std::size_t draws = 1, unsigned threads = 1) {
  return run_suite({spec}, nm, cfg, cal, draws, threads).rows.front();
}

/// The thirteen evaluation circuits: QAOA 4/6/8/10, Ising/XY/Heisenberg 6,
/// QFT-adder 5/7/9, QPE 5/6/7.
inline std::vector<BenchmarkSpec> standard_suite() {
  std::vector<BenchmarkSpec> out;
  const auto add = [&](const std::string& name, std::size_t n) {
    BenchmarkSpec s;
    s.name = name;
    s.n_qubits = n;
    out.push_back(s);
  };
  for (std::size_t n : {4, 6, 8, 10}) add("qaoa-maxcut", n);
  for (const char* m : {"ising", "xy", "heisenberg"}) add(m, 6);
  for (std::size_t n : {5, 7, 9}) add("qft-adder", n);
  for (std::size_t n : {5, 6, 7}) add("qpe", n);
  return out;
}

inline std::vector<BenchmarkSpec> crz_folding_suite(const std::vector<int>& folds = {4, 8, 16, 32},
                                                    std::uint64_t seed = 0) {
  std::vector<BenchmarkSpec> out;
  for (int n : folds) {
    BenchmarkSpec s;
    s.name = "crz-folding";
    s.n_qubits = 2;
    s.n_folds = n;
    s.seed = seed;
    out.push_back(s);
  }
  return out;
}

inline std::string format_real(double v) {
  char buf[64];
  if (std::abs(v) < 5e-13) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

inline std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os << "name,n_qubits,F_std,F_hi,improvement,seeds\n";
  for (const ReportRow& row : r.rows)
    os << row.name << ',' << row.n_qubits << ',' << format_real(row.f_std) << ',' << format_real(row.f_hi) << ','
       << format_real(row.improvement) << ',' << row.seeds << '\n';
  return os.str();
}

inline json report_to_json(const Report& r) {
  json rows = json::array();
  for (const ReportRow& row : r.rows)
    rows.push_back({{"name", row.name},
                    {"n_qubits", row.n_qubits},
                    {"F_std", row.f_std},
                    {"F_hi", row.f_hi},
                    {"improvement", row.improvement},
                    {"seeds", row.seeds}});
  return json{{"rows", rows}, {"mean_improvement", r.mean_improvement()}};
}

/// Whitespace-separated data file for gnuplot (index, label, F_std, F_hi).
inline std::string report_to_gnuplot_data(const Report& r) {
  std::ostringstream os;
  os << "# index name F_std F_hi improvement\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    os << i << ' ' << r.rows[i].name << ' ' << format_real(r.rows[i].f_std) << ' ' << format_real(r.rows[i].f_hi)
       << ' ' << format_real(r.rows[i].improvement) << '\n';
  return os.str();
}

/// Clustered bar chart of F_std vs F_hi per benchmark.
inline std::string gnuplot_script(const std::string& data_file, const std::string& png_file) {
  std::ostringstream os;
  os << "set terminal pngcairo size 1200,500\n"
     << "set output '" << png_file << "'\n"
     << "set style data histograms\n"
     << "set style histogram clustered gap 1\n"
     << "set style fill solid 0.8 border -1\n"
     << "set yrange [0:1.05]\n"
     << "set ylabel 'fidelity'\n"
     << "set xtics rotate by -45\n"
     << "set key top right\n"
     << "plot '" << data_file << "' using 3:xtic(2) title 'standard', '' using 4 title 'hidden inverse'\n";
  return os.str();
}

}  // namespace invforge

#endif  // INVFORGE_EXPERIMENT_HPP
