// Copyright 2026 The Sordor Authors
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

#ifndef SORDOR_MORPH_HPP
#define SORDOR_MORPH_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sordor/ensemble.hpp"
#include "sordor/io.hpp"
#include "sordor/optimize.hpp"
#include "sordor/targets.hpp"
#include "sordor/types.hpp"
#include "sordor/waveform.hpp"

namespace sordor {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  double beta = kPi;              // rotation angle, rad
  double bandwidth_hz = 40000.0;  // Omega
  double b_max = 18.0;
  double dq = 0.01;
  double db = 0.2;
  std::uint64_t seed = 1;
  int smoothing_count = 11;       // chain starts taken from the dF/dQ profile
  std::vector<double> extra_smoothing_b;  // optional smoothing rows besides b_max
  double init_perturbation = 0.1; // rad, on the chirp-like first guess
  int memory = 20;
  int max_iterations = 2000;
  std::optional<double> tolerance_override;  // default: convergence_tolerance(b)
  std::optional<int> k_override;

  OptimizerSettings optimizer_settings() const {
    OptimizerSettings s;
    s.memory = memory;
    s.max_iterations = max_iterations;
    s.tolerance = tolerance_override;
    return s;
  }
};

inline json run_config_to_json(const RunConfig& c) {
  json j{{"beta_rad", c.beta},
         {"bandwidth_hz", c.bandwidth_hz},
         {"b_max", c.b_max},
         {"dQ", c.dq},
         {"db", c.db},
         {"seed", c.seed},
         {"smoothing_count", c.smoothing_count},
         {"extra_smoothing_b", c.extra_smoothing_b},
         {"init_perturbation", c.init_perturbation},
         {"memory", c.memory},
         {"max_iterations", c.max_iterations}};
  if (c.tolerance_override) j["tolerance"] = *c.tolerance_override;
  if (c.k_override) j["K"] = *c.k_override;
  return j;
}

inline RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.beta = json_field<double>(j, "beta_rad", "config");
  c.bandwidth_hz = json_field<double>(j, "bandwidth_hz", "config");
  c.b_max = json_field<double>(j, "b_max", "config");
  c.dq = json_field<double>(j, "dQ", "config");
  c.db = json_field<double>(j, "db", "config");
  c.seed = json_field<std::uint64_t>(j, "seed", "config");
  c.smoothing_count = json_field<int>(j, "smoothing_count", "config");
  c.extra_smoothing_b = json_field<std::vector<double>>(j, "extra_smoothing_b", "config");
  c.init_perturbation = json_field<double>(j, "init_perturbation", "config");
  c.memory = json_field<int>(j, "memory", "config");
  c.max_iterations = json_field<int>(j, "max_iterations", "config");
  if (j.contains("tolerance")) c.tolerance_override = j.at("tolerance").get<double>();
  if (j.contains("K")) c.k_override = j.at("K").get<int>();
  return c;
}

inline std::string run_config_hash(const RunConfig& c) {
  return hex64(fnv1a64(run_config_to_json(c).dump()));
}

// ---------------------------------------------------------------------------
// Grid bookkeeping
// ---------------------------------------------------------------------------

struct CellResult {
  PulseWaveform waveform;
  double fidelity = -1.0;
  long grad_calls = 0;
  std::string stage;              // provenance: which stage produced it
  std::string optimizer_status;
  double grad_norm = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
};

using CellKey = std::pair<int, int>;  // (Q index, b index)

struct MorphGrid {
  std::vector<double> q_values;
  std::vector<double> b_values;
  std::map<CellKey, CellResult> cells;

  bool populated(const CellKey& key) const { return cells.count(key) != 0; }

  const CellResult& at(const CellKey& key) const {
    auto it = cells.find(key);
    if (it == cells.end()) {
      throw std::runtime_error("morph grid: missing dependency cell Q index " +
                               std::to_string(key.first) + ", b index " +
                               std::to_string(key.second));
    }
    return it->second;
  }

  // Strict-improvement merge; returns whether the stored result changed.
  bool improve(const CellKey& key, const CellResult& result) {
    auto it = cells.find(key);
    if (it != cells.end() && result.fidelity <= it->second.fidelity) return false;
    cells[key] = result;
    return true;
  }
};

// Pairs (p1, p2) of populated cells satisfying the matched-pulse relation
// b1 = m b2 with Q2 = m Q1 (to 1e-9 relative); m = 1 yields self-pairs.
struct MatchedPair {
  CellKey p1, p2;
};

inline std::vector<MatchedPair> matched_cells(const MorphGrid& grid, double m) {
  auto near = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  std::vector<MatchedPair> out;
  for (const auto& [k1, c1] : grid.cells) {
    const double q1 = grid.q_values[k1.first];
    const double b1 = grid.b_values[k1.second];
    for (const auto& [k2, c2] : grid.cells) {
      const double q2 = grid.q_values[k2.first];
      const double b2 = grid.b_values[k2.second];
      if (near(b1, m * b2) && near(q2, m * q1)) out.push_back({k1, k2});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Morph jobs
// ---------------------------------------------------------------------------

enum class MorphDirection { forward, backward, compressed, expanded, smoothing };

struct MorphJob {
  CellKey source;
  CellKey destination;
  MorphDirection direction;
  OptimizerSettings settings;
};

namespace detail {

inline int ceil_int(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

inline EnsembleSpec ensemble_for(const RunConfig& config, double b) {
  const int k = config.k_override ? *config.k_override
                                  : 1 + ceil_int(10.0 * b);
  return build_ensemble(b, config.bandwidth_hz, k);
}

struct JobOutput {
  CellResult result;
};

// Rebuilds targets at the destination (Q, b), resamples the seed when the
// slice count changes, and optimizes. Pure given (seed, destination, config).
inline JobOutput execute_morph(const RunConfig& config, const PulseWaveform& seed,
                               double dest_q, double dest_b, const std::string& stage) {
  const ScalingParams scaling = scaling_from_bandwidth(dest_b, config.beta, config.bandwidth_hz);
  PulseWaveform start = seed;
  if (seed.slice_count() != scaling.slice_count) {
    start = resample_waveform(seed, scaling.slice_count, scaling);
  } else {
    start.amplitude = scaling.amplitude;
    start.dt = scaling.dt;
    start.bandwidth_factor = scaling.bandwidth_factor;
    start.bandwidth_hz = scaling.bandwidth_hz;
    start.rotation_angle = scaling.rotation_angle;
  }
  start.q = dest_q;

  const EnsembleSpec ensemble = ensemble_for(config, dest_b);
  const TargetSet targets = build_targets(ensemble, dest_q, config.beta);
  const OptimizeResult opt = optimize(start, ensemble, targets, config.optimizer_settings());

  JobOutput out;
  out.result.waveform = opt.waveform;
  out.result.fidelity = opt.report.total;
  out.result.grad_calls = opt.gradient_evaluations;
  out.result.stage = stage;
  out.result.optimizer_status = to_string(opt.status);
  out.result.grad_norm = opt.report.gradient_norm.value_or(0.0);
  out.result.tolerance = opt.tolerance_used;
  out.result.iterations = opt.iterations;
  return out;
}

}  // namespace detail

// One morph step on the grid: seed from the stored source cell, optimize at
// the destination, keep the destination only on strict improvement.
inline bool morph_step(MorphGrid& grid, const RunConfig& config, const MorphJob& job) {
  const CellResult& source = grid.at(job.source);  // missing source throws
  const double dest_q = grid.q_values[job.destination.first];
  const double dest_b = grid.b_values[job.destination.second];
  const char* stage = job.direction == MorphDirection::forward ? "forward"
                      : job.direction == MorphDirection::backward ? "backward"
                      : job.direction == MorphDirection::compressed ? "compressed"
                      : job.direction == MorphDirection::expanded ? "expanded"
                                                                  : "smoothing";
  detail::JobOutput out = detail::execute_morph(config, source.waveform, dest_q, dest_b, stage);
  return grid.improve(job.destination, out.result);
}

// ---------------------------------------------------------------------------
// Smoothing starts: local maxima of |dF/dQ| (centered differences), endpoints
// excluded, ranked by magnitude. Plateau runs of equal magnitude count once;
// the start sits on the higher-fidelity flank of the run and the chain morphs
// toward the lower-fidelity side.
// ---------------------------------------------------------------------------

struct SmoothingStart {
  int q_index = 0;
  int direction = 0;  // +1: increasing Q, -1: decreasing Q
  double magnitude = 0.0;
};

inline std::vector<SmoothingStart> smoothing_starts(const std::vector<double>& f_of_q,
                                                    double dq, int count) {
  const int m = static_cast<int>(f_of_q.size());
  std::vector<SmoothingStart> found;
  if (m < 3 || count <= 0) return found;
  std::vector<double> mag(m, 0.0);  // |dF/dQ| on interior indices 1..m-2
  for (int i = 1; i + 1 < m; ++i) {
    mag[i] = std::abs((f_of_q[i + 1] - f_of_q[i - 1]) / (2.0 * dq));
  }
  int i = 1;
  while (i + 1 < m) {
    int j = i;
    while (j + 1 < m - 1 && mag[j + 1] == mag[i]) ++j;  // plateau run [i, j]
    const bool left_ok = (i == 1) ? false : mag[i] > mag[i - 1];
    const bool right_ok = (j == m - 2) ? false : mag[i] > mag[j + 1];
    if (left_ok && right_ok && mag[i] > 0.0) {
      const double f_left = f_of_q[i - 1];
      const double f_right = f_of_q[j + 1];
      SmoothingStart s;
      if (f_right >= f_left) {
        s.q_index = j;       // higher-fidelity side is the right flank
        s.direction = -1;
      } else {
        s.q_index = i;
        s.direction = +1;
      }
      s.magnitude = mag[i];
      found.push_back(s);
    }
    i = j + 1;
  }
  std::stable_sort(found.begin(), found.end(), [](const SmoothingStart& a, const SmoothingStart& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return a.q_index < b.q_index;
  });
  if (static_cast<int>(found.size()) > count) found.resize(count);
  return found;
}

// ---------------------------------------------------------------------------
// The ordered recipe with journaled checkpointing. Every optimization job is
// recorded under journal/ before its result is merged into the grid, so a
// killed run resumes by replaying the deterministic job sequence, loading
// recorded results instead of recomputing them. Grid cells live under
// grid/<beta_tag>/ and hold the best result seen for each (Q, b).
// ---------------------------------------------------------------------------

struct RecipeOutcome {
  MorphGrid grid;
  bool complete = false;
  long jobs_computed = 0;
  long jobs_loaded = 0;
  std::map<std::string, long> stage_grad_calls;
};

namespace detail {

struct StopRun {};

class RecipeRunner {
 public:
  RecipeRunner(const RunConfig& config, const fs::path& outdir, long job_limit)
      : config_(config), outdir_(outdir), job_limit_(job_limit) {
    grid_.q_values = q_axis(config);
    grid_.b_values = b_axis(config);
    bmax_index_ = static_cast<int>(grid_.b_values.size()) - 1;
  }

  // dQ = 0 collapses the Q grid to the single point {0}.
  static std::vector<double> q_axis(const RunConfig& config) {
    if (config.dq == 0.0) return {0.0};
    const int nq = static_cast<int>(std::lround(1.0 / config.dq));
    require(nq >= 1 && std::abs(nq * config.dq - 1.0) < 1e-9,
            "run_recipe: dQ must divide the Q range [0, 1]");
    std::vector<double> q(nq + 1);
    for (int i = 0; i <= nq; ++i) q[i] = i * config.dq;
    return q;
  }

  static std::vector<double> b_axis(const RunConfig& config) {
    const int nb = static_cast<int>(std::lround(config.b_max / config.db));
    require(nb >= 1 && std::abs(nb * config.db - config.b_max) < 1e-9,
            "run_recipe: db must divide b_max");
    std::vector<double> b(nb);
    for (int j = 0; j < nb; ++j) b[j] = (j + 1) * config.db;
    return b;
  }

  RecipeOutcome run() {
    prepare_directories();
    if (fs::exists(outdir_ / "run.log")) {
      log_ << read_file(outdir_ / "run.log");  // keep prior content on resume
    }
    try {
      stage_1a();
      stage_1b();
      stage_2();
      stage_3a();
      stage_3b();
      extra_smoothing();
      outcome_.complete = true;
      set_cursor("done");
    } catch (StopRun&) {
      outcome_.complete = false;
    }
    flush_log();
    write_manifest();
    outcome_.grid = grid_;
    return outcome_;
  }

 private:
  void prepare_directories() {
    fs::create_directories(outdir_ / "journal");
    fs::create_directories(grid_dir());
    const fs::path manifest = outdir_ / "manifest.json";
    if (fs::exists(manifest)) {
      const json j = parse_json_file(manifest);
      const std::string schema = json_field<std::string>(j, "schema", "manifest");
      if (schema != kManifestSchema) {
        throw std::runtime_error("manifest " + manifest.string() + ": unsupported schema '" + schema + "'");
      }
      const std::string stored_hash = json_field<std::string>(j, "config_hash", "manifest");
      if (stored_hash != run_config_hash(config_)) {
        throw std::runtime_error("manifest " + manifest.string() +
                                 ": configuration hash mismatch; refusing to resume "
                                 "(use a fresh output directory or the original config)");
      }
    } else {
      write_manifest();
    }
  }

  fs::path grid_dir() const { return outdir_ / "grid" / beta_tag(config_.beta); }

  void set_cursor(const std::string& stage) {
    cursor_ = stage;
    write_manifest();
  }

  void write_manifest() {
    json j{{"schema", kManifestSchema},
           {"tool", "sordor"},
           {"version", kVersion},
           {"config", run_config_to_json(config_)},
           {"config_hash", run_config_hash(config_)},
           {"seed", config_.seed},
           {"stage_cursor", cursor_},
           {"complete", outcome_.complete}};
    json calls = json::object();
    for (const auto& [stage, n] : outcome_.stage_grad_calls) calls[stage] = n;
    j["stage_grad_calls"] = calls;
    write_json_atomic(outdir_ / "manifest.json", j);
  }

  void log_line(const std::string& line) { log_ << line << "\n"; }

  void flush_log() { write_file_atomic(outdir_ / "run.log", log_.str()); }

  void banner(const std::string& stage) {
    log_line("=== stage " + stage + " ===");
    set_cursor(stage);
  }

  static std::string job_file_name(const std::string& job_id) {
    std::string s = job_id;
    for (char& c : s)
      if (c == '/') c = '_';
    return s + ".json";
  }

  CellResult run_job(const std::string& stage, const std::string& job_id,
                     const PulseWaveform& seed, const CellKey& dest) {
    const fs::path path = outdir_ / "journal" / job_file_name(job_id);
    CellResult result;
    if (fs::exists(path)) {
      const json j = parse_json_file(path);
      if (json_field<std::string>(j, "schema", job_id) != kJournalSchema ||
          json_field<std::string>(j, "job_id", job_id) != job_id) {
        throw std::runtime_error("journal entry " + path.string() + " is inconsistent");
      }
      result.waveform = waveform_from_json(j.at("waveform"), job_id);
      result.fidelity = json_field<double>(j, "fidelity", job_id);
      result.grad_calls = json_field<long>(j, "grad_calls", job_id);
      result.stage = json_field<std::string>(j, "stage", job_id);
      result.optimizer_status = json_field<std::string>(j, "optimizer_status", job_id);
      result.grad_norm = json_field<double>(j, "grad_norm", job_id);
      result.tolerance = json_field<double>(j, "tolerance", job_id);
      result.iterations = json_field<int>(j, "iterations", job_id);
      ++outcome_.jobs_loaded;
    } else {
      if (job_limit_ >= 0 && outcome_.jobs_computed >= job_limit_) throw StopRun{};
      const double dest_q = grid_.q_values[dest.first];
      const double dest_b = grid_.b_values[dest.second];
      result = execute_morph(config_, seed, dest_q, dest_b, stage).result;
      json j{{"schema", kJournalSchema},
             {"job_id", job_id},
             {"stage", result.stage},
             {"Q", dest_q},
             {"b", dest_b},
             {"fidelity", result.fidelity},
             {"grad_calls", result.grad_calls},
             {"optimizer_status", result.optimizer_status},
             {"grad_norm", result.grad_norm},
             {"tolerance", result.tolerance},
             {"iterations", result.iterations},
             {"waveform", waveform_to_json(result.waveform)}};
      write_json_atomic(path, j);
      ++outcome_.jobs_computed;
    }
    outcome_.stage_grad_calls[stage] += result.grad_calls;
    merge(dest, result);
    return result;
  }

  void merge(const CellKey& key, const CellResult& result) {
    const bool improved = grid_.improve(key, result);
    if (improved) {
      write_cell(key, result);
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "%s Q=%.4f b=%.4f F=%.12f grad_calls=%ld status=%s improved=%d",
                  result.stage.c_str(), grid_.q_values[key.first], grid_.b_values[key.second],
                  result.fidelity, result.grad_calls, result.optimizer_status.c_str(),
                  improved ? 1 : 0);
    log_line(buf);
  }

  void write_cell(const CellKey& key, const CellResult& cell) {
    const double q = grid_.q_values[key.first];
    const double b = grid_.b_values[key.second];
    json j{{"schema", kCellSchema},
           {"Q", q},
           {"b", b},
           {"beta_rad", config_.beta},
           {"bandwidth_hz", config_.bandwidth_hz},
           {"fidelity", cell.fidelity},
           {"grad_calls", cell.grad_calls},
           {"stage", cell.stage},
           {"optimizer_status", cell.optimizer_status},
           {"grad_norm", cell.grad_norm},
           {"tolerance", cell.tolerance},
           {"iterations", cell.iterations},
           {"waveform", waveform_to_json(cell.waveform)}};
    write_json_atomic(grid_dir() / cell_filename(q, b), j);
  }

  // Stage 1(a): forward morph, Q = 0 upward at b_max, seeded from the
  // chirp-like initial guess.
  void stage_1a() {
    banner("1a");
    const ScalingParams scaling =
        scaling_from_bandwidth(grid_.b_values[bmax_index_], config_.beta, config_.bandwidth_hz);
    PulseWaveform running =
        initial_waveform(scaling, 0.0, config_.seed, config_.init_perturbation);
    for (int qi = 0; qi < static_cast<int>(grid_.q_values.size()); ++qi) {
      running = run_job("1a", "1a_Q" + std::to_string(qi), running, {qi, bmax_index_}).waveform;
    }
  }

  // Stage 1(b): backward morph, Q = 1 downward at b_max, continuing from the
  // forward chain's endpoint.
  void stage_1b() {
    banner("1b");
    const int last = static_cast<int>(grid_.q_values.size()) - 1;
    PulseWaveform running = grid_.at({last, bmax_index_}).waveform;
    for (int qi = last - 1; qi >= 0; --qi) {
      running = run_job("1b", "1b_Q" + std::to_string(qi), running, {qi, bmax_index_}).waveform;
    }
  }

  // Stage 2: smoothing chains at b_max from the largest |dF/dQ| extrema.
  // Termination compares against a snapshot of the profile taken when the
  // stage starts, so the outcome does not depend on chain ordering.
  void stage_2() {
    banner("2");
    run_smoothing_row("2", bmax_index_);
  }

  void run_smoothing_row(const std::string& stage, int bi) {
    const int nq = static_cast<int>(grid_.q_values.size());
    std::vector<double> profile(nq);
    for (int qi = 0; qi < nq; ++qi) profile[qi] = grid_.at({qi, bi}).fidelity;
    const std::vector<SmoothingStart> starts =
        smoothing_starts(profile, config_.dq, config_.smoothing_count);
    for (size_t c = 0; c < starts.size(); ++c) {
      PulseWaveform running = grid_.at({starts[c].q_index, bi}).waveform;
      int qi = starts[c].q_index + starts[c].direction;
      int step = 0;
      while (qi >= 0 && qi < nq) {
        const std::string job_id =
            stage + "_c" + std::to_string(c) + "_s" + std::to_string(step);
        const CellResult result = run_job(stage, job_id, running, {qi, bi});
        if (result.fidelity <= profile[qi]) break;  // no improvement: chain done
        running = result.waveform;
        qi += starts[c].direction;
        ++step;
      }
    }
  }

  // Stage 3(a): compressed morph, per Q column from b_max downward.
  void stage_3a() {
    banner("3a");
    if (grid_.b_values.size() < 2) return;
    for (int qi = 0; qi < static_cast<int>(grid_.q_values.size()); ++qi) {
      PulseWaveform running = grid_.at({qi, bmax_index_}).waveform;
      for (int bi = bmax_index_ - 1; bi >= 0; --bi) {
        const std::string job_id = "3a_Q" + std::to_string(qi) + "_b" + std::to_string(bi);
        running = run_job("3a", job_id, running, {qi, bi}).waveform;
      }
    }
  }

  // Stage 3(b): expanded morph, per Q column from the smallest b upward.
  void stage_3b() {
    banner("3b");
    if (grid_.b_values.size() < 2) return;
    for (int qi = 0; qi < static_cast<int>(grid_.q_values.size()); ++qi) {
      PulseWaveform running = grid_.at({qi, 0}).waveform;
      for (int bi = 1; bi <= bmax_index_; ++bi) {
        const std::string job_id = "3b_Q" + std::to_string(qi) + "_b" + std::to_string(bi);
        running = run_job("3b", job_id, running, {qi, bi}).waveform;
      }
    }
  }

  // Optional smoothing on additional b rows (off unless configured).
  void extra_smoothing() {
    if (config_.extra_smoothing_b.empty()) return;
    banner("2x");
    for (double b : config_.extra_smoothing_b) {
      int bi = -1;
      for (size_t j = 0; j < grid_.b_values.size(); ++j) {
        if (std::abs(grid_.b_values[j] - b) < 1e-9) bi = static_cast<int>(j);
      }
      require(bi >= 0, "extra_smoothing_b value is not on the b grid");
      run_smoothing_row("2x_b" + std::to_string(bi), bi);
    }
  }

  RunConfig config_;
  fs::path outdir_;
  long job_limit_;
  MorphGrid grid_;
  int bmax_index_ = 0;
  std::string cursor_ = "start";
  std::ostringstream log_;
  RecipeOutcome outcome_;
};

}  // namespace detail

// Executes the ordered recipe (stages 1a, 1b, 2, 3a, 3b), checkpointing after
// every cell. job_limit >= 0 stops cleanly after that many newly computed
// jobs (testing/ops control); a later call resumes from the journal.
inline RecipeOutcome run_recipe(const RunConfig& config, const fs::path& outdir,
                                long job_limit = -1) {
  detail::RecipeRunner runner(config, outdir, job_limit);
  return runner.run();
}

// Loads the grid of a finished or partial run from its cell files.
inline MorphGrid load_grid(const RunConfig& config, const fs::path& outdir) {
  MorphGrid grid;
  grid.q_values = detail::RecipeRunner::q_axis(config);
  grid.b_values = detail::RecipeRunner::b_axis(config);
  const fs::path dir = outdir / "grid" / beta_tag(config.beta);
  for (int qi = 0; qi < static_cast<int>(grid.q_values.size()); ++qi) {
    for (int bi = 0; bi < static_cast<int>(grid.b_values.size()); ++bi) {
      const fs::path path = dir / cell_filename(grid.q_values[qi], grid.b_values[bi]);
      if (!fs::exists(path)) continue;
      const json j = parse_json_file(path);
      CellResult cell;
      cell.waveform = waveform_from_json(j.at("waveform"), path.string());
      cell.fidelity = json_field<double>(j, "fidelity", path.string());
      cell.grad_calls = json_field<long>(j, "grad_calls", path.string());
      cell.stage = json_field<std::string>(j, "stage", path.string());
      cell.optimizer_status = json_field<std::string>(j, "optimizer_status", path.string());
      cell.grad_norm = json_field<double>(j, "grad_norm", path.string());
      cell.tolerance = json_field<double>(j, "tolerance", path.string());
      cell.iterations = json_field<int>(j, "iterations", path.string());
      grid.cells[{qi, bi}] = std::move(cell);
    }
  }
  return grid;
}

}  // namespace sordor

#endif  // SORDOR_MORPH_HPP
