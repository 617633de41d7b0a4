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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sordor/sordor.hpp"

namespace fs = std::filesystem;
using sordor::json;

namespace {

// Accepts plain radians or pi expressions: "pi", "pi/2", "3pi/4", "2pi".
double parse_angle(const std::string& text) {
  std::string s = text;
  const size_t pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("cannot parse angle '" + text + "'");
    return v;
  }
  double coeff = 1.0;
  if (pi_pos > 0) coeff = std::stod(s.substr(0, pi_pos));
  double divisor = 1.0;
  std::string rest = s.substr(pi_pos + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw std::invalid_argument("cannot parse angle '" + text + "'");
    divisor = std::stod(rest.substr(1));
  }
  return coeff * sordor::kPi / divisor;
}

std::uint64_t file_hash(const fs::path& path) {
  return sordor::fnv1a64(sordor::read_file(path));
}

json input_record(const fs::path& path) {
  return json{{"path", path.string()}, {"fnv1a64", sordor::hex64(file_hash(path))}};
}

// Reproducibility manifest: everything needed to regenerate the outputs.
json manifest_json(const std::string& subcommand, const json& config,
                   const std::vector<fs::path>& inputs,
                   const std::vector<std::string>& outputs, const std::string& status) {
  json j{{"schema", sordor::kManifestSchema},
         {"tool", "sordor"},
         {"version", sordor::kVersion},
         {"subcommand", subcommand},
         {"config", config},
         {"status", status},
         {"conventions",
          {{"offset_columns", "Hz (omega / 2 pi)"},
           {"phases", "rad internally, degrees in shape files"},
           {"chirp_omega_c", "A / (2 pi), in Hz"}}}};
  json in = json::array();
  for (const fs::path& p : inputs) in.push_back(input_record(p));
  j["inputs"] = in;
  j["outputs"] = outputs;
  return j;
}

void write_manifest(const fs::path& outdir, const std::string& subcommand,
                    const json& config, const std::vector<fs::path>& inputs,
                    const std::vector<std::string>& outputs, const std::string& status) {
  sordor::write_json_atomic(outdir / "manifest.json",
                            manifest_json(subcommand, config, inputs, outputs, status));
}

// Single-file subcommands keep their manifest next to the output under
// <output>.manifest.json so they never clobber a run directory's manifest.
void write_sidecar_manifest(const fs::path& out_file, const std::string& subcommand,
                            const json& config, const std::vector<fs::path>& inputs,
                            const std::string& status) {
  fs::path side = out_file;
  side += ".manifest.json";
  sordor::write_json_atomic(
      side, manifest_json(subcommand, config, inputs, {out_file.filename().string()}, status));
}

json report_to_json(const sordor::OptimizeResult& result) {
  json trace = json::array();
  for (const auto& rec : result.trace) {
    trace.push_back({{"fidelity", rec.fidelity}, {"gradient_norm", rec.gradient_norm}});
  }
  return json{{"fidelity", result.report.total},
              {"per_member", result.report.per_member},
              {"gradient_norm", result.report.gradient_norm.value_or(0.0)},
              {"gradient_evaluations", result.gradient_evaluations},
              {"iterations", result.iterations},
              {"status", sordor::to_string(result.status)},
              {"tolerance", result.tolerance_used},
              {"trace", trace}};
}

struct SequenceTemplateEntry {
  int pulse_index;     // index into the --pulses list
  double axis_shift;   // rad
};

// Named templates; axis subscripts x, y, -x map to shifts 0, pi/2, pi.
std::vector<SequenceTemplateEntry> sequence_template(const std::string& name) {
  const double y = sordor::kPi / 2.0;
  const double mx = sordor::kPi;
  if (name == "single") return {{0, 0.0}};
  if (name == "hahn-echo" || name == "pi2-pi") return {{0, 0.0}, {1, 0.0}};
  if (name == "inept-block") return {{0, 0.0}, {1, 0.0}, {0, 0.0}};
  if (name == "perfect-echo") return {{0, 0.0}, {1, y}, {0, y}, {1, y}, {0, mx}};
  throw std::invalid_argument("unknown sequence '" + name +
                              "' (use single, hahn-echo, inept-block, perfect-echo or custom)");
}

std::vector<SequenceTemplateEntry> parse_custom_sequence(const std::string& text) {
  std::vector<SequenceTemplateEntry> entries;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("custom sequence entries are pulse_index:shift, got '" + item + "'");
    }
    entries.push_back({std::stoi(item.substr(0, colon)), parse_angle(item.substr(colon + 1))});
  }
  if (entries.empty()) throw std::invalid_argument("empty custom sequence");
  return entries;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

int cmd_optimize(double b, double q, const std::string& beta_text, double bandwidth,
                 std::optional<int> k_override, std::uint64_t seed, const std::string& init,
                 double perturb, int max_iter, int memory, std::optional<double> tol,
                 const fs::path& outdir) {
  const double beta = parse_angle(beta_text);
  fs::create_directories(outdir);
  const sordor::ScalingParams scaling = sordor::scaling_from_bandwidth(b, beta, bandwidth);
  const sordor::EnsembleSpec ensemble = sordor::build_ensemble(b, bandwidth, k_override);
  const sordor::TargetSet targets = sordor::build_targets(ensemble, q, beta);

  std::vector<fs::path> inputs;
  sordor::PulseWaveform start;
  if (init == "chirp") {
    start = sordor::initial_waveform(scaling, q, seed, perturb);
  } else if (init == "constant") {
    start = sordor::make_waveform(scaling, q, std::vector<double>(scaling.slice_count, 0.0));
  } else if (init.rfind("file:", 0) == 0) {
    const fs::path path = init.substr(5);
    inputs.push_back(path);
    sordor::PulseWaveform loaded = sordor::load_waveform(path);
    if (loaded.slice_count() != scaling.slice_count) {
      loaded = sordor::resample_waveform(loaded, scaling.slice_count, scaling);
    }
    loaded.q = q;
    start = loaded;
  } else {
    throw std::invalid_argument("unknown --init '" + init + "' (chirp, constant, file:<path>)");
  }

  sordor::OptimizerSettings settings;
  settings.memory = memory;
  settings.max_iterations = max_iter;
  settings.tolerance = tol;
  const sordor::OptimizeResult result = sordor::optimize(start, ensemble, targets, settings);

  sordor::save_waveform(outdir / "waveform.json", result.waveform);
  sordor::write_json_atomic(outdir / "fidelity_report.json", report_to_json(result));

  const bool finite = std::isfinite(result.report.total);
  json config{{"b", b},           {"Q", q},
              {"beta_rad", beta}, {"bandwidth_hz", bandwidth},
              {"seed", seed},     {"init", init},
              {"perturbation", perturb}, {"max_iterations", max_iter},
              {"memory", memory}, {"K", ensemble.member_count()}};
  if (tol) config["tolerance"] = *tol;
  write_manifest(outdir, "optimize", config, inputs,
                 {"waveform.json", "fidelity_report.json"}, finite ? "ok" : "failed");
  std::cout << "fidelity " << result.report.total << " after " << result.iterations
            << " iterations (" << result.gradient_evaluations << " gradient evaluations, "
            << sordor::to_string(result.status) << ")\n";
  return finite ? 0 : 3;
}

int cmd_simulate(const std::string& sequence_name, const std::string& pulses_text,
                 const std::string& custom, bool ideal_only, bool trajectory,
                 std::optional<int> k_override, const fs::path& outdir) {
  fs::create_directories(outdir);
  const std::vector<std::string> pulse_files = split_commas(pulses_text);
  sordor::require(!pulse_files.empty(), "simulate: --pulses requires at least one file");
  std::vector<sordor::PulseWaveform> pulses;
  std::vector<fs::path> inputs;
  for (const std::string& f : pulse_files) {
    inputs.push_back(f);
    pulses.push_back(sordor::load_waveform(f));
  }

  const std::vector<SequenceTemplateEntry> entries =
      sequence_name == "custom" ? parse_custom_sequence(custom)
                                : sequence_template(sequence_name);
  sordor::SequenceSpec actual, ideal;
  for (const auto& e : entries) {
    sordor::require(e.pulse_index >= 0 && e.pulse_index < static_cast<int>(pulses.size()),
                    "sequence references pulse index beyond --pulses list");
    actual.pulses.push_back({pulses[e.pulse_index], e.axis_shift, false});
    ideal.pulses.push_back({pulses[e.pulse_index], e.axis_shift, true});
  }

  const sordor::PulseWaveform& first = pulses.front();
  const int k = k_override ? *k_override
                           : sordor::default_member_count(first.bandwidth_factor);
  const sordor::EnsembleSpec ensemble =
      sordor::build_ensemble(first.bandwidth_factor, first.bandwidth_hz, k);

  const std::vector<std::string> header = {
      "offset_hz",  "from_x_x", "from_x_y", "from_x_z", "from_y_x", "from_y_y",
      "from_y_z",   "from_z_x", "from_z_y", "from_z_z"};
  auto bloch_rows = [&](const sordor::SequenceSpec& seq) {
    const sordor::BlochTrajectory tx = sordor::bloch_trajectory(seq, sordor::bloch_x(), ensemble);
    const sordor::BlochTrajectory ty = sordor::bloch_trajectory(seq, sordor::bloch_y(), ensemble);
    const sordor::BlochTrajectory tz = sordor::bloch_trajectory(seq, sordor::bloch_z(), ensemble);
    for (const std::string& w : tx.warnings) std::cerr << "warning: " << w << "\n";
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < ensemble.member_count(); ++i) {
      rows.push_back({ensemble.offsets[i] / (2.0 * sordor::kPi), tx.final_states[i].x,
                      tx.final_states[i].y, tx.final_states[i].z, ty.final_states[i].x,
                      ty.final_states[i].y, ty.final_states[i].z, tz.final_states[i].x,
                      tz.final_states[i].y, tz.final_states[i].z});
    }
    return rows;
  };

  std::vector<std::string> outputs;
  double total_f = 1.0;
  if (trajectory) {
    const sordor::SequenceSpec& seq = ideal_only ? ideal : actual;
    const struct {
      const char* tag;
      sordor::BlochState state;
    } initials[] = {{"x", sordor::bloch_x()}, {"y", sordor::bloch_y()}, {"z", sordor::bloch_z()}};
    for (const auto& init : initials) {
      const sordor::TimeResolvedTrajectory path =
          sordor::bloch_path(seq, init.state, ensemble);
      std::vector<std::vector<double>> rows;
      for (int k = 0; k < ensemble.member_count(); ++k) {
        for (size_t s = 0; s < path.times.size(); ++s) {
          rows.push_back({ensemble.offsets[k] / (2.0 * sordor::kPi), path.times[s],
                          path.states[k][s].x, path.states[k][s].y, path.states[k][s].z});
        }
      }
      const std::string name = std::string("trajectory_from_") + init.tag + ".csv";
      sordor::write_csv(outdir / name, {"offset_hz", "time_s", "x", "y", "z"}, rows);
      outputs.push_back(name);
    }
  }
  if (ideal_only) {
    sordor::write_csv(outdir / "bloch.csv", header, bloch_rows(ideal));
    outputs.push_back("bloch.csv");
  } else {
    sordor::write_csv(outdir / "bloch.csv", header, bloch_rows(actual));
    sordor::write_csv(outdir / "bloch_ideal.csv", header, bloch_rows(ideal));
    const sordor::SequenceFidelity sf = sordor::sequence_fidelity(actual, ideal, ensemble);
    total_f = sf.total;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < ensemble.member_count(); ++i) {
      rows.push_back({ensemble.offsets[i] / (2.0 * sordor::kPi), sf.per_member[i]});
    }
    sordor::write_csv(outdir / "sequence_fidelity.csv", {"offset_hz", "fidelity"}, rows);
    outputs.push_back("bloch.csv");
    outputs.push_back("bloch_ideal.csv");
    outputs.push_back("sequence_fidelity.csv");
    std::cout << "sequence fidelity " << sf.total << " over " << ensemble.member_count()
              << " offsets\n";
  }

  json config{{"sequence", sequence_name}, {"pulses", pulse_files},
              {"custom", custom},          {"ideal", ideal_only},
              {"trajectory", trajectory},  {"K", ensemble.member_count()}};
  const bool finite = std::isfinite(total_f);
  write_manifest(outdir, "simulate", config, inputs, outputs, finite ? "ok" : "failed");
  return finite ? 0 : 3;
}

int cmd_profile(const fs::path& pulse_file, int k, const fs::path& outdir) {
  fs::create_directories(outdir);
  const sordor::PulseWaveform pulse = sordor::load_waveform(pulse_file);
  const sordor::EnsembleSpec ensemble =
      sordor::build_ensemble(pulse.bandwidth_factor, pulse.bandwidth_hz, k);
  const sordor::TargetSet targets =
      sordor::build_targets(ensemble, pulse.q, pulse.rotation_angle);
  const sordor::FidelityReport report =
      sordor::fidelity(sordor::propagate(pulse, ensemble, targets), targets);

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < ensemble.member_count(); ++i) {
    rows.push_back({ensemble.offsets[i] / (2.0 * sordor::kPi), targets.alphas[i],
                    report.per_member[i]});
  }
  sordor::write_csv(outdir / "profile.csv", {"offset_hz", "alpha_rad", "fidelity"}, rows);
  write_manifest(outdir, "profile",
                 json{{"pulse", pulse_file.string()}, {"K", k}}, {pulse_file},
                 {"profile.csv"}, std::isfinite(report.total) ? "ok" : "failed");
  std::cout << "mean fidelity " << report.total << " over " << k << " offsets\n";
  return std::isfinite(report.total) ? 0 : 3;
}

int cmd_export(const std::string& format, const fs::path& in_file, fs::path out_file,
               const std::string& title) {
  if (format == "shape") {
    const sordor::PulseWaveform w = sordor::load_waveform(in_file);
    if (out_file.empty()) out_file = fs::path(in_file).replace_extension(".shape");
    sordor::write_file_atomic(out_file, sordor::shape_export(w, title));
  } else if (format == "json") {
    const sordor::PulseWaveform w =
        sordor::shape_import(sordor::read_file(in_file), in_file.string());
    if (out_file.empty()) out_file = fs::path(in_file).replace_extension(".json");
    sordor::save_waveform(out_file, w);
  } else {
    throw std::invalid_argument("unknown --format '" + format + "' (shape or json)");
  }
  write_sidecar_manifest(out_file, "export",
                         json{{"format", format}, {"file", in_file.string()}}, {in_file}, "ok");
  std::cout << "wrote " << out_file.string() << "\n";
  return 0;
}

int cmd_chirp_compare(const fs::path& pulse_file, const fs::path& outdir) {
  fs::create_directories(outdir);
  const sordor::PulseWaveform pulse = sordor::load_waveform(pulse_file);
  const std::vector<double> unwrapped = sordor::unwrap_phases(pulse.phases);
  const std::vector<double> residual = sordor::chirp_residual(pulse);
  std::vector<std::vector<double>> rows;
  const double duration = pulse.duration();
  for (int n = 0; n < pulse.slice_count(); ++n) {
    const double t = (n + 0.5) * pulse.dt;
    rows.push_back({t - duration / 2.0, unwrapped[n],
                    sordor::chirp_reference_phase(t, duration, pulse.amplitude), residual[n]});
  }
  sordor::write_csv(outdir / "chirp_compare.csv",
                    {"time_from_center_s", "phase_rad", "reference_rad", "residual_rad"},
                    rows);
  write_manifest(outdir, "chirp-compare",
                 json{{"pulse", pulse_file.string()},
                      {"omega_c_hz", sordor::chirp_omega_c_hz(pulse.amplitude)}},
                 {pulse_file}, {"chirp_compare.csv"}, "ok");
  return 0;
}

int cmd_grid_report(const fs::path& grid_dir, const fs::path& out_file) {
  const json manifest = sordor::parse_json_file(grid_dir / "manifest.json");
  const sordor::RunConfig config = sordor::run_config_from_json(manifest.at("config"));
  const sordor::MorphGrid grid = sordor::load_grid(config, grid_dir);

  std::ostringstream out;
  out << "Q,b,fidelity,grad_calls,iterations,grad_norm,tolerance,stage,status\n";
  char buf[160];
  for (const auto& [key, cell] : grid.cells) {
    std::snprintf(buf, sizeof(buf), "%.4f,%.4f,%.12g,%ld,%d,%.12g,%.12g,%s,%s\n",
                  grid.q_values[key.first], grid.b_values[key.second], cell.fidelity,
                  cell.grad_calls, cell.iterations, cell.grad_norm, cell.tolerance,
                  cell.stage.c_str(), cell.optimizer_status.c_str());
    out << buf;
  }
  sordor::write_file_atomic(out_file, out.str());
  write_sidecar_manifest(out_file, "grid-report", json{{"grid", grid_dir.string()}},
                         {grid_dir / "manifest.json"}, "ok");
  std::cout << "wrote " << out_file.string() << " (" << grid.cells.size() << " cells)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Broadband universal-rotation pulse synthesis and verification"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker count (overrides SORDOR_THREADS)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "optimize a single (Q, b) cell");
  double opt_b = 1.0, opt_q = 0.0, opt_bandwidth = 40000.0, opt_perturb = 0.1;
  std::string opt_beta = "pi", opt_init = "chirp";
  int opt_k = 0, opt_max_iter = 2000, opt_memory = 20;
  std::uint64_t opt_seed = 1;
  double opt_tol = -1.0;
  std::string opt_out = ".";
  opt->add_option("--b", opt_b, "bandwidth factor")->required();
  opt->add_option("--Q", opt_q, "quadratic dispersion coefficient");
  opt->add_option("--beta", opt_beta, "rotation angle (rad or pi expression)");
  opt->add_option("--bandwidth", opt_bandwidth, "bandwidth in Hz");
  opt->add_option("--K", opt_k, "ensemble member count (default 1 + ceil(10 b))");
  opt->add_option("--seed", opt_seed, "random seed for the initial guess");
  opt->add_option("--init", opt_init, "initial guess: chirp, constant, or file:<path>");
  opt->add_option("--perturb", opt_perturb, "random perturbation on the initial guess, rad");
  opt->add_option("--max-iter", opt_max_iter, "iteration cap");
  opt->add_option("--memory", opt_memory, "stored gradient pairs");
  opt->add_option("--tol", opt_tol, "gradient-norm tolerance (default from b)");
  opt->add_option("--out,-o", opt_out, "output directory");

  // morph
  auto* morph = app.add_subcommand("morph", "run the full morphing recipe over (Q, b)");
  std::string morph_config_file, morph_beta = "pi", morph_out;
  double morph_bandwidth = 40000.0, morph_bmax = 18.0, morph_dq = 0.01, morph_db = 0.2,
         morph_perturb = 0.1, morph_tol = -1.0;
  std::uint64_t morph_seed = 1;
  int morph_smooth = 11, morph_memory = 20, morph_max_iter = 2000, morph_k = 0;
  long morph_job_limit = -1;
  morph->add_option("--config", morph_config_file, "JSON config file (flags override)");
  morph->add_option("--beta", morph_beta, "rotation angle");
  morph->add_option("--bandwidth", morph_bandwidth, "bandwidth in Hz");
  morph->add_option("--b-max", morph_bmax, "largest bandwidth factor");
  morph->add_option("--dQ", morph_dq, "Q grid spacing (0 collapses the Q grid to {0})");
  morph->add_option("--db", morph_db, "b grid spacing");
  morph->add_option("--seed", morph_seed, "random seed");
  morph->add_option("--smooth-starts", morph_smooth, "smoothing chain starts");
  morph->add_option("--perturb", morph_perturb, "initial-guess perturbation, rad");
  morph->add_option("--memory", morph_memory, "stored gradient pairs");
  morph->add_option("--max-iter", morph_max_iter, "iteration cap per cell");
  morph->add_option("--tol", morph_tol, "tolerance override");
  morph->add_option("--K", morph_k, "ensemble member count override");
  morph->add_option("--job-limit", morph_job_limit, "stop after this many new jobs (resumable)");
  morph->add_option("--out,-o", morph_out, "output directory")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "propagate a pulse sequence to Bloch CSV");
  std::string sim_sequence = "single", sim_pulses, sim_custom, sim_out = ".";
  bool sim_ideal = false, sim_trajectory = false;
  int sim_k = 0;
  sim->add_option("--sequence", sim_sequence,
                  "single, hahn-echo, inept-block, perfect-echo, custom");
  sim->add_option("--pulses", sim_pulses, "comma-separated waveform JSON files")->required();
  sim->add_option("--custom", sim_custom, "custom sequence: pulse_index:shift,...");
  sim->add_flag("--ideal", sim_ideal, "simulate ideal targets only");
  sim->add_flag("--trajectory", sim_trajectory, "also write time-resolved Bloch paths");
  sim->add_option("--K", sim_k, "offset count (default 1 + ceil(10 b))");
  sim->add_option("--out,-o", sim_out, "output directory");

  // profile
  auto* prof = app.add_subcommand("profile", "fidelity vs offset for one pulse");
  std::string prof_pulse, prof_out = ".";
  int prof_k = 451;
  prof->add_option("--pulse", prof_pulse, "waveform JSON file")->required();
  prof->add_option("--K", prof_k, "validation offset count");
  prof->add_option("--out,-o", prof_out, "output directory");

  // export
  auto* exp = app.add_subcommand("export", "convert between waveform JSON and shape text");
  std::string exp_format = "shape", exp_file, exp_out, exp_title = "sordor pulse";
  exp->add_option("--format", exp_format, "shape (json -> shape) or json (shape -> json)");
  exp->add_option("--file", exp_file, "input file")->required();
  exp->add_option("--out,-o", exp_out, "output file");
  exp->add_option("--title", exp_title, "shape header title");

  // grid-report
  auto* report = app.add_subcommand("grid-report", "fidelity surface CSV from a morph run");
  std::string report_grid, report_out = "surface.csv";
  report->add_option("--grid", report_grid, "morph output directory")->required();
  report->add_option("--out,-o", report_out, "output CSV file");

  // chirp-compare
  auto* chirp = app.add_subcommand("chirp-compare", "residual phase against the reference chirp");
  std::string chirp_pulse, chirp_out = ".";
  chirp->add_option("--pulse", chirp_pulse, "waveform JSON file")->required();
  chirp->add_option("--out,-o", chirp_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) {
    setenv("SORDOR_THREADS", std::to_string(threads).c_str(), 1);
  }

  try {
    if (opt->parsed()) {
      return cmd_optimize(opt_b, opt_q, opt_beta, opt_bandwidth,
                          opt_k > 0 ? std::optional<int>(opt_k) : std::nullopt, opt_seed,
                          opt_init, opt_perturb, opt_max_iter, opt_memory,
                          opt_tol > 0 ? std::optional<double>(opt_tol) : std::nullopt,
                          opt_out);
    }
    if (morph->parsed()) {
      sordor::RunConfig config;
      const bool from_file = !morph_config_file.empty();
      if (from_file) {
        config = sordor::run_config_from_json(sordor::parse_json_file(morph_config_file));
      }
      // Without a config file every flag (or its default) applies; with one,
      // only flags given explicitly override the file.
      if (!from_file || morph->count("--beta")) config.beta = parse_angle(morph_beta);
      if (!from_file || morph->count("--bandwidth")) config.bandwidth_hz = morph_bandwidth;
      if (!from_file || morph->count("--b-max")) config.b_max = morph_bmax;
      if (!from_file || morph->count("--dQ")) config.dq = morph_dq;
      if (!from_file || morph->count("--db")) config.db = morph_db;
      if (!from_file || morph->count("--seed")) config.seed = morph_seed;
      if (!from_file || morph->count("--smooth-starts")) config.smoothing_count = morph_smooth;
      if (!from_file || morph->count("--perturb")) config.init_perturbation = morph_perturb;
      if (!from_file || morph->count("--memory")) config.memory = morph_memory;
      if (!from_file || morph->count("--max-iter")) config.max_iterations = morph_max_iter;
      if (morph->count("--tol") && morph_tol > 0) config.tolerance_override = morph_tol;
      if (morph->count("--K") && morph_k > 0) config.k_override = morph_k;
      const sordor::RecipeOutcome outcome =
          sordor::run_recipe(config, morph_out, morph_job_limit);
      std::cout << (outcome.complete ? "recipe complete: " : "recipe paused: ")
                << outcome.jobs_computed << " jobs computed, " << outcome.jobs_loaded
                << " loaded from checkpoints, " << outcome.grid.cells.size()
                << " cells populated\n";
      return 0;
    }
    if (sim->parsed()) {
      return cmd_simulate(sim_sequence, sim_pulses, sim_custom, sim_ideal, sim_trajectory,
                          sim_k > 0 ? std::optional<int>(sim_k) : std::nullopt, sim_out);
    }
    if (prof->parsed()) return cmd_profile(prof_pulse, prof_k, prof_out);
    if (exp->parsed()) return cmd_export(exp_format, exp_file, exp_out, exp_title);
    if (report->parsed()) return cmd_grid_report(report_grid, report_out);
    if (chirp->parsed()) return cmd_chirp_compare(chirp_pulse, chirp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
