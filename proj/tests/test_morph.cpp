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

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "sordor/morph.hpp"
#include "test_util.hpp"

using namespace sordor;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sordor_morph_" + name);
  fs::remove_all(dir);
  return dir;
}

// Small enough to run many times in the unit suite: 3 x 2 grid at tiny b.
RunConfig desk_config() {
  RunConfig c;
  c.beta = kPi;
  c.bandwidth_hz = 40000.0;
  c.b_max = 0.4;
  c.db = 0.2;
  c.dq = 0.5;
  c.seed = 5;
  c.max_iterations = 60;
  c.smoothing_count = 3;
  return c;
}

}  // namespace

TEST_CASE("smoothing starts come from |dF/dQ| extrema", "[morph]") {
  SECTION("constant profile has none") {
    REQUIRE(smoothing_starts(std::vector<double>(11, 0.8), 0.1, 11).empty());
  }

  SECTION("a step discontinuity yields one start at the step") {
    std::vector<double> profile(11, 0.2);
    for (int i = 6; i < 11; ++i) profile[i] = 0.9;  // jump between index 5 and 6
    const auto starts = smoothing_starts(profile, 0.1, 11);
    REQUIRE(starts.size() == 1);
    REQUIRE(starts[0].q_index == 6);     // higher-fidelity flank of the jump
    REQUIRE(starts[0].direction == -1);  // morph toward the lower side
  }

  SECTION("a falling step morphs forward from the left flank") {
    std::vector<double> profile(11, 0.9);
    for (int i = 6; i < 11; ++i) profile[i] = 0.2;
    const auto starts = smoothing_starts(profile, 0.1, 11);
    REQUIRE(starts.size() == 1);
    REQUIRE(starts[0].q_index == 5);
    REQUIRE(starts[0].direction == +1);
  }

  SECTION("smooth strictly monotone profile has no interior extrema") {
    std::vector<double> profile(11);
    for (int i = 0; i < 11; ++i) profile[i] = 0.001 * i * i * i;  // |d| increasing
    REQUIRE(smoothing_starts(profile, 0.1, 11).empty());
  }

  SECTION("count caps the list, largest first") {
    std::vector<double> profile(21, 0.5);
    profile[5] = 0.80;   // one spike
    profile[15] = 0.95;  // a bigger spike
    const auto all = smoothing_starts(profile, 0.05, 11);
    REQUIRE(all.size() >= 2);
    const auto top = smoothing_starts(profile, 0.05, 1);
    REQUIRE(top.size() == 1);
    REQUIRE(top[0].magnitude >= all[1].magnitude);
  }
}

TEST_CASE("morph_step seeds from the stored source cell", "[morph][slow]") {
  RunConfig config = desk_config();
  MorphGrid grid;
  grid.q_values = {0.0, 0.5, 1.0};
  grid.b_values = {0.2, 0.4};

  SECTION("unpopulated source is a missing-dependency error") {
    MorphJob job{{0, 1}, {1, 1}, MorphDirection::forward, config.optimizer_settings()};
    REQUIRE_THROWS_AS(morph_step(grid, config, job), std::runtime_error);
  }

  SECTION("re-optimizing a converged cell changes nothing") {
    const ScalingParams scaling = scaling_from_bandwidth(0.4, kPi, 40000.0);
    const PulseWaveform seed = initial_waveform(scaling, 0.0, 5, 0.1);
    const EnsembleSpec e = build_ensemble(0.4, config.bandwidth_hz);
    const TargetSet t = build_targets(e, 0.0, kPi);
    OptimizerSettings settings = config.optimizer_settings();
    settings.max_iterations = 400;
    const OptimizeResult opt = optimize(seed, e, t, settings);
    REQUIRE(opt.status == OptimizeStatus::converged);

    CellResult cell;
    cell.waveform = opt.waveform;
    cell.fidelity = opt.report.total;
    cell.stage = "1a";
    grid.cells[{0, 1}] = cell;

    // Zero-displacement morph: destination equals source, no improvement.
    MorphJob job{{0, 1}, {0, 1}, MorphDirection::forward, settings};
    REQUIRE_FALSE(morph_step(grid, config, job));
    REQUIRE(grid.at({0, 1}).waveform.phases == cell.waveform.phases);
  }

  SECTION("a perfect destination is never replaced") {
    CellResult source;
    const ScalingParams scaling = scaling_from_bandwidth(0.4, kPi, 40000.0);
    source.waveform = initial_waveform(scaling, 0.0, 5, 0.1);
    source.fidelity = 0.5;
    grid.cells[{0, 1}] = source;
    CellResult perfect = source;
    perfect.fidelity = 1.0;
    grid.cells[{1, 1}] = perfect;

    MorphJob job{{0, 1}, {1, 1}, MorphDirection::forward, config.optimizer_settings()};
    REQUIRE_FALSE(morph_step(grid, config, job));
    REQUIRE(grid.at({1, 1}).fidelity == 1.0);
  }
}

TEST_CASE("recipe runs stages in order with checkpoints", "[morph][slow]") {
  const RunConfig config = desk_config();
  const fs::path dir = temp_dir("recipe");
  const RecipeOutcome outcome = run_recipe(config, dir);
  REQUIRE(outcome.complete);

  SECTION("every cell is populated and flagged") {
    REQUIRE(outcome.grid.cells.size() == 6);  // 3 Q x 2 b
    for (const auto& [key, cell] : outcome.grid.cells) {
      REQUIRE((cell.optimizer_status == "converged" ||
               cell.optimizer_status == "iteration_cap" ||
               cell.optimizer_status == "line_search_failure"));
      if (cell.optimizer_status == "converged") {
        REQUIRE(cell.grad_norm <= cell.tolerance);
      }
      const fs::path cell_file =
          dir / "grid" / "pi" /
          cell_filename(outcome.grid.q_values[key.first], outcome.grid.b_values[key.second]);
      REQUIRE(fs::exists(cell_file));
    }
  }

  SECTION("log lists stages in recipe order") {
    const std::string log = read_file(dir / "run.log");
    const size_t p1a = log.find("=== stage 1a ===");
    const size_t p1b = log.find("=== stage 1b ===");
    const size_t p2 = log.find("=== stage 2 ===");
    const size_t p3a = log.find("=== stage 3a ===");
    const size_t p3b = log.find("=== stage 3b ===");
    REQUIRE(p1a != std::string::npos);
    REQUIRE(p1b != std::string::npos);
    REQUIRE(p2 != std::string::npos);
    REQUIRE(p3a != std::string::npos);
    REQUIRE(p3b != std::string::npos);
    REQUIRE(p1a < p1b);
    REQUIRE(p1b < p2);
    REQUIRE(p2 < p3a);
    REQUIRE(p3a < p3b);
  }

  SECTION("grid reloads from cell files") {
    const MorphGrid loaded = load_grid(config, dir);
    REQUIRE(loaded.cells.size() == outcome.grid.cells.size());
    for (const auto& [key, cell] : outcome.grid.cells) {
      REQUIRE(loaded.at(key).fidelity == cell.fidelity);
      REQUIRE(loaded.at(key).waveform.phases == cell.waveform.phases);
    }
  }

  SECTION("matched-cell queries") {
    const auto self_pairs = matched_cells(outcome.grid, 1.0);
    REQUIRE(self_pairs.size() >= outcome.grid.cells.size());  // every cell pairs with itself
    bool found_self = false;
    for (const auto& p : self_pairs) {
      if (p.p1 == p.p2) found_self = true;
    }
    REQUIRE(found_self);

    // b1 = 2 b2 with Q2 = 2 Q1: ((0, 0.4), (0, 0.2)) and ((0.5, 0.4), (1, 0.2)).
    const auto doubled = matched_cells(outcome.grid, 2.0);
    bool found_origin = false, found_shifted = false;
    for (const auto& p : doubled) {
      if (p.p1 == CellKey{0, 1} && p.p2 == CellKey{0, 0}) found_origin = true;
      if (p.p1 == CellKey{1, 1} && p.p2 == CellKey{2, 0}) found_shifted = true;
    }
    REQUIRE(found_origin);
    REQUIRE(found_shifted);
  }

  SECTION("fidelity never decreases when the recipe is replayed") {
    const RecipeOutcome again = run_recipe(config, dir);
    REQUIRE(again.complete);
    REQUIRE(again.jobs_computed == 0);  // everything came from the journal
    for (const auto& [key, cell] : outcome.grid.cells) {
      REQUIRE(again.grid.at(key).fidelity == cell.fidelity);
    }
  }
}

TEST_CASE("interrupted recipes resume bit-identically", "[morph][slow]") {
  const RunConfig config = desk_config();
  const fs::path full_dir = temp_dir("full");
  const fs::path resumed_dir = temp_dir("resumed");

  const RecipeOutcome full = run_recipe(config, full_dir);
  REQUIRE(full.complete);

  // Interrupt after 3 jobs, then resume twice (second resume finishes).
  RecipeOutcome partial = run_recipe(config, resumed_dir, 3);
  REQUIRE_FALSE(partial.complete);
  partial = run_recipe(config, resumed_dir, 4);
  REQUIRE_FALSE(partial.complete);
  const RecipeOutcome resumed = run_recipe(config, resumed_dir);
  REQUIRE(resumed.complete);

  for (const auto& [key, cell] : full.grid.cells) {
    const fs::path name =
        fs::path("grid") / "pi" /
        cell_filename(full.grid.q_values[key.first], full.grid.b_values[key.second]);
    REQUIRE(read_file(full_dir / name) == read_file(resumed_dir / name));  // byte-identical
  }
}

TEST_CASE("corrupt checkpoints fail with an explicit report", "[morph][slow]") {
  const RunConfig config = desk_config();
  const fs::path dir = temp_dir("corrupt");
  REQUIRE_FALSE(run_recipe(config, dir, 2).complete);

  SECTION("corrupt journal entry") {
    // Clobber the first journal file.
    for (const auto& entry : fs::directory_iterator(dir / "journal")) {
      std::ofstream out(entry.path(), std::ios::trunc);
      out << "{ broken";
    }
    REQUIRE_THROWS_AS(run_recipe(config, dir), std::runtime_error);
  }

  SECTION("config mismatch refuses to resume") {
    RunConfig other = config;
    other.seed = 999;
    REQUIRE_THROWS_AS(run_recipe(other, dir), std::runtime_error);
  }
}

TEST_CASE("smoothing chains walk from the spike and stop on no improvement", "[morph][slow]") {
  // Stages 1a/1b are injected through the journal with a doctored fidelity
  // profile: a cliff after Q = 0.4 that a real optimization can beat (0.02)
  // followed by a cell it cannot (0.9). The smoothing chain must start at the
  // cliff edge, improve the 0.02 cell, then stop at the 0.9 cell.
  RunConfig config;
  config.beta = kPi;
  config.bandwidth_hz = 40000.0;
  config.b_max = 0.2;
  config.db = 0.2;
  config.dq = 0.2;
  config.seed = 5;
  config.max_iterations = 40;
  config.smoothing_count = 2;

  const fs::path dir = temp_dir("smoothing");
  fs::create_directories(dir / "journal");
  const ScalingParams scaling = scaling_from_bandwidth(0.2, kPi, 40000.0);
  const std::vector<double> profile = {0.5, 0.5, 0.5, 0.02, 0.9, 0.9};

  auto write_entry = [&](const std::string& job_id, double q, double fidelity) {
    const PulseWaveform w = initial_waveform(scaling, q, 1, 0.05);
    json j{{"schema", kJournalSchema},
           {"job_id", job_id},
           {"stage", job_id.substr(0, 2)},
           {"Q", q},
           {"b", 0.2},
           {"fidelity", fidelity},
           {"grad_calls", 1L},
           {"optimizer_status", "iteration_cap"},
           {"grad_norm", 1.0},
           {"tolerance", 1e-4},
           {"iterations", 0},
           {"waveform", waveform_to_json(w)}};
    write_json_atomic(dir / "journal" / (job_id + ".json"), j);
  };
  for (int qi = 0; qi < 6; ++qi) {
    write_entry("1a_Q" + std::to_string(qi), 0.2 * qi, profile[qi]);
  }
  for (int qi = 4; qi >= 0; --qi) {
    write_entry("1b_Q" + std::to_string(qi), 0.2 * qi, 0.0);  // never improves
  }

  const RecipeOutcome outcome = run_recipe(config, dir);
  REQUIRE(outcome.complete);
  REQUIRE(outcome.jobs_loaded == 11);
  REQUIRE(outcome.jobs_computed == 2);  // chain: improve Q=0.6, stop at Q=0.8

  const CellResult& improved = outcome.grid.at({3, 0});
  REQUIRE(improved.stage == "2");  // provenance: the smoothing stage
  REQUIRE(improved.fidelity > 0.02);
  REQUIRE(outcome.grid.at({4, 0}).fidelity == 0.9);  // stop cell untouched
  REQUIRE(outcome.grid.at({5, 0}).fidelity == 0.9);
  REQUIRE(outcome.grid.at({2, 0}).fidelity == 0.5);  // start cell itself untouched
  REQUIRE(outcome.stage_grad_calls.count("2") == 1);
}

TEST_CASE("single-cell grid degenerates to one optimization", "[morph][slow]") {
  RunConfig config = desk_config();
  config.dq = 0.0;  // Q grid = {0}
  config.b_max = 0.2;
  const fs::path dir = temp_dir("single");
  const RecipeOutcome outcome = run_recipe(config, dir);
  REQUIRE(outcome.complete);
  REQUIRE(outcome.grid.cells.size() == 1);
  REQUIRE(outcome.jobs_computed == 1);
}
