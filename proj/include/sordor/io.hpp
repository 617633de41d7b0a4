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

#ifndef SORDOR_IO_HPP
#define SORDOR_IO_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sordor/types.hpp"
#include "sordor/waveform.hpp"

namespace sordor {

using json = nlohmann::json;

inline constexpr const char* kWaveformSchema = "sordor-waveform/1";
inline constexpr const char* kCellSchema = "sordor-cell/1";
inline constexpr const char* kManifestSchema = "sordor-manifest/1";
inline constexpr const char* kJournalSchema = "sordor-journal/1";

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed = 14695981039346656037ull) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// All file writes go through a temp-then-rename so readers never observe a
// partially written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("corrupt JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json_atomic(const std::filesystem::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

template <typename T>
T json_field(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) {
    throw std::runtime_error(context + ": missing required field '" + key + "'");
  }
  return j.at(key).get<T>();
}

// ---------------------------------------------------------------------------
// Waveform JSON (exact round trip)
// ---------------------------------------------------------------------------

inline json waveform_to_json(const PulseWaveform& w) {
  return json{{"schema", kWaveformSchema},
              {"phases_rad", w.phases},
              {"amplitude_rad_per_s", w.amplitude},
              {"dt_s", w.dt},
              {"meta",
               {{"b", w.bandwidth_factor},
                {"Q", w.q},
                {"beta_rad", w.rotation_angle},
                {"bandwidth_hz", w.bandwidth_hz}}}};
}

inline PulseWaveform waveform_from_json(const json& j, const std::string& context = "waveform") {
  const std::string schema = json_field<std::string>(j, "schema", context);
  if (schema != kWaveformSchema) {
    throw std::runtime_error(context + ": unsupported schema version '" + schema +
                             "' (expected " + kWaveformSchema + ")");
  }
  PulseWaveform w;
  w.phases = json_field<std::vector<double>>(j, "phases_rad", context);
  w.amplitude = json_field<double>(j, "amplitude_rad_per_s", context);
  w.dt = json_field<double>(j, "dt_s", context);
  const json meta = json_field<json>(j, "meta", context);
  w.bandwidth_factor = json_field<double>(meta, "b", context + ".meta");
  w.q = json_field<double>(meta, "Q", context + ".meta");
  w.rotation_angle = json_field<double>(meta, "beta_rad", context + ".meta");
  w.bandwidth_hz = json_field<double>(meta, "bandwidth_hz", context + ".meta");
  return w;
}

inline void save_waveform(const std::filesystem::path& path, const PulseWaveform& w) {
  write_json_atomic(path, waveform_to_json(w));
}

inline PulseWaveform load_waveform(const std::filesystem::path& path) {
  return waveform_from_json(parse_json_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Shape files: line-oriented text, '#'-prefixed header, then one
// "amplitude_percent phase_degrees" line per slice. Phases are wrapped into
// [0, 360) degrees; these pulses are constant amplitude so every line carries
// 100.0 percent of the header amplitude.
// ---------------------------------------------------------------------------

inline std::string shape_export(const PulseWaveform& w, const std::string& title = "sordor pulse") {
  std::ostringstream out;
  out << "# " << title << "\n";
  out << "# npoints " << w.slice_count() << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", w.duration() * 1e6);
  out << "# duration_us " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.9f", w.amplitude / (2.0 * kPi));
  out << "# max_amplitude_hz " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %.9g", w.bandwidth_factor, w.q,
                w.rotation_angle, w.bandwidth_hz);
  out << "# meta_b_Q_beta_bandwidth " << buf << "\n";
  for (double phase : w.phases) {
    double deg = std::fmod(phase * 180.0 / kPi, 360.0);
    if (deg < 0.0) deg += 360.0;
    std::snprintf(buf, sizeof(buf), "%.6f %.9f", 100.0, deg);
    out << buf << "\n";
  }
  return out.str();
}

inline PulseWaveform shape_import(const std::string& text, const std::string& context = "shape") {
  std::istringstream in(text);
  std::string line;
  int npoints = -1;
  double duration_us = 0.0, max_amp_hz = 0.0;
  double meta_b = 0.0, meta_q = 0.0, meta_beta = 0.0, meta_bw = 0.0;
  std::vector<double> amplitude_percent, phase_deg;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string key;
      header >> key;
      if (key == "npoints") header >> npoints;
      else if (key == "duration_us") header >> duration_us;
      else if (key == "max_amplitude_hz") header >> max_amp_hz;
      else if (key == "meta_b_Q_beta_bandwidth") header >> meta_b >> meta_q >> meta_beta >> meta_bw;
      continue;
    }
    std::istringstream row(line);
    double amp = 0.0, deg = 0.0;
    if (!(row >> amp >> deg)) throw std::runtime_error(context + ": malformed data line: " + line);
    amplitude_percent.push_back(amp);
    phase_deg.push_back(deg);
  }
  if (amplitude_percent.empty()) throw std::runtime_error(context + ": no data lines");
  if (npoints >= 0 && npoints != static_cast<int>(amplitude_percent.size())) {
    throw std::runtime_error(context + ": npoints header disagrees with data line count");
  }
  if (duration_us <= 0.0 || max_amp_hz <= 0.0) {
    throw std::runtime_error(context + ": missing duration_us or max_amplitude_hz header");
  }
  for (double a : amplitude_percent) {
    if (std::abs(a - amplitude_percent.front()) > 1e-9) {
      throw std::runtime_error(context + ": amplitude modulation not supported (constant-amplitude pulses only)");
    }
  }
  PulseWaveform w;
  const int n = static_cast<int>(phase_deg.size());
  w.phases.resize(n);
  for (int i = 0; i < n; ++i) w.phases[i] = phase_deg[i] * kPi / 180.0;
  w.amplitude = 2.0 * kPi * max_amp_hz * amplitude_percent.front() / 100.0;
  w.dt = duration_us * 1e-6 / n;
  w.bandwidth_factor = meta_b;
  w.q = meta_q;
  w.rotation_angle = meta_beta;
  w.bandwidth_hz = meta_bw;
  return w;
}

// ---------------------------------------------------------------------------
// CSV: one header row naming columns and units, numeric cells in %.12g.
// ---------------------------------------------------------------------------

inline std::string csv_format(const std::vector<std::string>& header,
                              const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ",";
    out << header[i];
  }
  out << "\n";
  char buf[40];
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      std::snprintf(buf, sizeof(buf), "%.12g", row[i]);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  write_file_atomic(path, csv_format(header, rows));
}

// ---------------------------------------------------------------------------
// Grid cell naming: Q scaled by 1000 and b by 100, both as 4-digit fields,
// e.g. (Q=0.78, b=18) -> "Q0780_b1800.json".
// ---------------------------------------------------------------------------

inline std::string beta_tag(double beta) {
  if (std::abs(beta - kPi) < 1e-12) return "pi";
  if (std::abs(beta - kPi / 2.0) < 1e-12) return "pi2";
  if (std::abs(beta - 2.0 * kPi) < 1e-12) return "2pi";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "rad%.6g", beta);
  std::string tag = buf;
  for (char& c : tag) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return tag;
}

inline std::string cell_filename(double q, double b) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "Q%04d_b%04d.json", static_cast<int>(std::lround(q * 1000.0)),
                static_cast<int>(std::lround(b * 100.0)));
  return buf;
}

}  // namespace sordor

#endif  // SORDOR_IO_HPP
