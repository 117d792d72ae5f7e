/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The tgw-shm Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// tgw: command-line front end over the tgw C API.
//
//   tgw simulate --scenario S --out DIR
//   tgw locate   --scenario S --baseline B --damage D --out DIR
//                [--truncate-us T] [--window-samples W] [--grid RxC] [--threads N]
//   tgw sweep    --scenario S --out DIR [--position Z:THETA ...] [--positions-file F]
//                [--grid RxC] [--jobs N]
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tgw/tgw.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct CliError : std::runtime_error {
  CliError(int code, const std::string& message) : std::runtime_error(message), exit_code(code) {}
  int exit_code;
};

struct ScenarioDeleter {
  void operator()(tgw_scenario* p) const { tgw_scenario_free(p); }
};
struct WaveformsDeleter {
  void operator()(tgw_waveforms* p) const { tgw_waveforms_free(p); }
};
struct MapDeleter {
  void operator()(tgw_dimap* p) const { tgw_dimap_free(p); }
};
using Scenario = std::unique_ptr<tgw_scenario, ScenarioDeleter>;
using Waveforms = std::unique_ptr<tgw_waveforms, WaveformsDeleter>;
using Map = std::unique_ptr<tgw_dimap, MapDeleter>;

std::string status_message(tgw_status status, const std::string& context) {
  return context + ": " + tgw_status_name(status) + ": " + tgw_last_error();
}

void check(tgw_status status, const std::string& context) {
  if (status == TGW_OK) return;
  throw CliError(status == TGW_E_INTERNAL ? kExitInternal : kExitData,
                 status_message(status, context));
}

Scenario load_scenario(const std::string& path) {
  tgw_scenario* raw = nullptr;
  check(tgw_scenario_load(path.c_str(), &raw), "scenario " + path);
  return Scenario(raw);
}

Scenario parse_scenario(const std::string& text) {
  tgw_scenario* raw = nullptr;
  check(tgw_scenario_parse(text.c_str(), &raw), "scenario");
  return Scenario(raw);
}

Waveforms simulate(const tgw_scenario* scenario, tgw_label label) {
  tgw_waveforms* raw = nullptr;
  check(tgw_simulate(scenario, label, &raw),
        label == TGW_LABEL_DAMAGE ? "simulating damage" : "simulating baseline");
  return Waveforms(raw);
}

Waveforms read_capture(const std::string& path) {
  tgw_waveforms* raw = nullptr;
  check(tgw_capture_read(path.c_str(), &raw), path);
  return Waveforms(raw);
}

std::uintmax_t write_capture(const tgw_waveforms* w, const fs::path& path) {
  std::uint64_t bytes = 0;
  check(tgw_capture_write(w, path.string().c_str(), &bytes), path.string());
  return bytes;
}

// ---------------------------------------------------------------------------
// Run manifest

/// Wall-clock time in UTC, or SOURCE_DATE_EPOCH when set so that repeated
/// runs produce byte-identical manifests.
std::string timestamp_utc() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      t = static_cast<std::time_t>(std::stoll(epoch));
    } catch (const std::exception&) {
      throw CliError(kExitUsage, "SOURCE_DATE_EPOCH is not an integer: " + std::string(epoch));
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args) {
    doc_["tool"] = "tgw";
    doc_["version"] = tgw_version();
    doc_["command"] = std::move(command);
    doc_["arguments"] = args;
    doc_["started_utc"] = timestamp_utc();
    doc_["outputs"] = json::array();
  }

  void set(const std::string& key, json value) { doc_[key] = std::move(value); }

  void add_output(const fs::path& dir, const fs::path& file) {
    doc_["outputs"].push_back(
        {{"file", fs::relative(file, dir).generic_string()}, {"bytes", fs::file_size(file)}});
  }

  void write(const fs::path& dir) {
    doc_["finished_utc"] = timestamp_utc();
    write_text(dir / "manifest.json", doc_.dump(2) + "\n");
  }

  static void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw CliError(kExitData, "cannot write " + path.string());
  }

 private:
  json doc_;
};

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError(kExitData, "cannot create " + dir.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Shared analysis step

struct AnalysisFlags {
  std::string grid;
  double truncate_us = 0.0;
  unsigned window_samples = 0;
  unsigned threads = 1;
};

tgw_di_options to_options(const AnalysisFlags& flags) {
  tgw_di_options opts{};
  if (!flags.grid.empty()) {
    unsigned rows = 0, cols = 0;
    char sep = 0, extra = 0;
    std::istringstream in(flags.grid);
    if (!(in >> rows >> sep >> cols) || (sep != 'x' && sep != 'X') || (in >> extra) ||
        rows < 2 || cols < 2) {
      throw CliError(kExitUsage, "--grid expects ROWSxCOLS with both at least 2, got '" +
                                     flags.grid + "'");
    }
    opts.rows = rows;
    opts.cols = cols;
  }
  opts.truncate_us = flags.truncate_us;
  opts.window_samples = flags.window_samples;
  opts.threads = flags.threads;
  return opts;
}

json report_json(const tgw_report& r, const tgw_dimap* map) {
  json j;
  j["status"] = r.damage_detected ? "damage_detected" : "no_damage_detected";
  j["grid"] = {{"rows", tgw_dimap_rows(map)}, {"cols", tgw_dimap_cols(map)}};
  j["window_samples"] = tgw_dimap_window_samples(map);
  j["peak_value"] = r.peak_value;
  j["estimated"] = r.damage_detected
                       ? json{{"row", r.row}, {"col", r.col}, {"z_mm", r.z_mm},
                              {"theta_deg", r.theta_deg}}
                       : json(nullptr);
  j["truth"] = r.has_truth ? json{{"z_mm", r.truth_z_mm}, {"theta_deg", r.truth_theta_deg}}
                           : json(nullptr);
  j["error_mm"] = r.has_truth && r.damage_detected ? json(r.error_mm) : json(nullptr);
  return j;
}

/// Builds the map, writes di_map.csv / di_map.pgm / report.json into `dir`
/// and returns the localization report.
tgw_report analyze(const tgw_scenario* scenario, const tgw_waveforms* baseline,
                   const tgw_waveforms* damage, const tgw_di_options& opts, const fs::path& dir,
                   json extra, Manifest* manifest, const fs::path& manifest_dir) {
  tgw_dimap* raw = nullptr;
  check(tgw_di_map(scenario, baseline, damage, &opts, &raw), "damage index map");
  Map map(raw);
  const fs::path csv = dir / "di_map.csv";
  const fs::path pgm = dir / "di_map.pgm";
  const fs::path report_path = dir / "report.json";
  check(tgw_dimap_export(map.get(), TGW_MAP_CSV, csv.string().c_str()), csv.string());
  check(tgw_dimap_export(map.get(), TGW_MAP_PGM, pgm.string().c_str()), pgm.string());
  tgw_report report{};
  check(tgw_localize(map.get(), scenario, &report), "localization");
  json doc = report_json(report, map.get());
  doc["truncate_us"] = opts.truncate_us > 0.0 ? json(opts.truncate_us) : json(nullptr);
  for (auto& [key, value] : extra.items()) doc[key] = value;
  Manifest::write_text(report_path, doc.dump(2) + "\n");
  if (manifest) {
    manifest->add_output(manifest_dir, csv);
    manifest->add_output(manifest_dir, pgm);
    manifest->add_output(manifest_dir, report_path);
  }
  return report;
}

void print_summary(const tgw_report& r) {
  if (!r.damage_detected) {
    std::printf("no damage detected\n");
    return;
  }
  std::printf("damage at z = %.1f mm, theta = %.2f deg (pixel %u,%u), peak %.6g\n", r.z_mm,
              r.theta_deg, r.row, r.col, r.peak_value);
  if (r.has_truth) {
    std::printf("truth  at z = %.1f mm, theta = %.2f deg, surface error %.2f mm\n",
                r.truth_z_mm, r.truth_theta_deg, r.error_mm);
  }
}

// ---------------------------------------------------------------------------
// Commands

struct Common {
  std::string scenario;
  std::string out;
  std::vector<std::string> args;
};

int cmd_simulate(const Common& c) {
  Manifest manifest("simulate", c.args);
  const Scenario scenario = load_scenario(c.scenario);
  const fs::path dir = c.out;
  make_dir(dir);
  manifest.set("scenario", c.scenario);
  manifest.set("output_dir", c.out);
  manifest.set("seed", tgw_scenario_seed(scenario.get()));

  const Waveforms baseline = simulate(scenario.get(), TGW_LABEL_BASELINE);
  write_capture(baseline.get(), dir / "baseline.tgwc");
  manifest.add_output(dir, dir / "baseline.tgwc");
  std::printf("wrote %s (%u channels x %u samples)\n", (dir / "baseline.tgwc").string().c_str(),
              tgw_waveforms_channels(baseline.get()), tgw_waveforms_samples(baseline.get()));

  if (tgw_scenario_has_defect(scenario.get())) {
    const Waveforms damage = simulate(scenario.get(), TGW_LABEL_DAMAGE);
    write_capture(damage.get(), dir / "damage.tgwc");
    manifest.add_output(dir, dir / "damage.tgwc");
    std::printf("wrote %s (%u channels x %u samples)\n", (dir / "damage.tgwc").string().c_str(),
                tgw_waveforms_channels(damage.get()), tgw_waveforms_samples(damage.get()));
  } else {
    std::fprintf(stderr,
                 "warning: scenario has no defect; only the baseline was written and locate "
                 "needs a damage capture\n");
  }
  manifest.write(dir);
  return 0;
}

int cmd_locate(const Common& c, const std::string& baseline_path, const std::string& damage_path,
               const AnalysisFlags& flags) {
  Manifest manifest("locate", c.args);
  const tgw_di_options opts = to_options(flags);
  const Scenario scenario = load_scenario(c.scenario);
  const Waveforms baseline = read_capture(baseline_path);
  const Waveforms damage = read_capture(damage_path);
  check(tgw_capture_check(scenario.get(), baseline.get(), "baseline"), baseline_path);
  check(tgw_capture_check(scenario.get(), damage.get(), "damage"), damage_path);

  const fs::path dir = c.out;
  make_dir(dir);
  manifest.set("scenario", c.scenario);
  manifest.set("output_dir", c.out);
  manifest.set("seed", tgw_scenario_seed(scenario.get()));
  manifest.set("inputs", {{"baseline", baseline_path}, {"damage", damage_path}});

  const tgw_report report =
      analyze(scenario.get(), baseline.get(), damage.get(), opts, dir,
              {{"baseline", baseline_path}, {"damage", damage_path}}, &manifest, dir);
  print_summary(report);
  manifest.write(dir);
  return 0;
}

struct Position {
  double z_mm;
  double theta_deg;
};

Position parse_position(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
    std::size_t used_z = 0, used_t = 0;
    const std::string zs = text.substr(0, colon);
    const std::string ts = text.substr(colon + 1);
    Position p{std::stod(zs, &used_z), std::stod(ts, &used_t)};
    if (used_z != zs.size() || used_t != ts.size()) throw std::invalid_argument("trailing text");
    return p;
  } catch (const std::exception&) {
    throw CliError(kExitUsage, "position '" + text + "' is not Z_MM:THETA_DEG");
  }
}

std::vector<Position> collect_positions(const std::vector<std::string>& items,
                                        const std::string& file) {
  std::vector<Position> positions;
  for (const auto& item : items) {
    std::istringstream parts(item);
    std::string one;
    while (std::getline(parts, one, ',')) {
      if (!one.empty()) positions.push_back(parse_position(one));
    }
  }
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw CliError(kExitData, "cannot open positions file " + file);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream words(line);
      std::string word;
      while (words >> word) positions.push_back(parse_position(word));
    }
  }
  return positions;
}

struct SweepRow {
  bool ok = false;
  tgw_report report{};
  std::string error;
};

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += (ch == '\n') ? ' ' : ch;
  }
  return out + "\"";
}

int cmd_sweep(const Common& c, const std::vector<Position>& positions,
              const AnalysisFlags& flags, unsigned jobs) {
  Manifest manifest("sweep", c.args);
  const tgw_di_options opts = to_options(flags);
  Scenario scenario = load_scenario(c.scenario);
  const std::string template_json = tgw_scenario_json(scenario.get());

  const fs::path dir = c.out;
  make_dir(dir);
  manifest.set("scenario", c.scenario);
  manifest.set("output_dir", c.out);
  manifest.set("seed", tgw_scenario_seed(scenario.get()));

  const Waveforms baseline = simulate(scenario.get(), TGW_LABEL_BASELINE);
  write_capture(baseline.get(), dir / "baseline.tgwc");

  std::vector<SweepRow> rows(positions.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < positions.size(); k = next++) {
      try {
        // Each position works on its own scenario copy; outputs go to
        // independent directories.
        Scenario local = parse_scenario(template_json);
        check(tgw_scenario_set_defect_position(local.get(), positions[k].z_mm,
                                               positions[k].theta_deg),
              "position " + std::to_string(k));
        char name[32];
        std::snprintf(name, sizeof name, "pos_%03zu", k);
        const fs::path pos_dir = dir / name;
        make_dir(pos_dir);
        const Waveforms damage = simulate(local.get(), TGW_LABEL_DAMAGE);
        write_capture(damage.get(), pos_dir / "damage.tgwc");
        rows[k].report = analyze(local.get(), baseline.get(), damage.get(), opts, pos_dir,
                                 {{"position_index", k}}, nullptr, dir);
        rows[k].ok = true;
      } catch (const std::exception& e) {
        rows[k].error = e.what();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, positions.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }

  std::ostringstream table;
  table << "index,true_z_mm,true_theta_deg,est_z_mm,est_theta_deg,error_mm,status\n";
  int failures = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    char line[256];
    const auto& r = rows[k].report;
    if (rows[k].ok && r.damage_detected) {
      std::snprintf(line, sizeof line, "%zu,%.6g,%.6g,%.6g,%.6g,%.3f,ok\n", k, positions[k].z_mm,
                    positions[k].theta_deg, r.z_mm, r.theta_deg, r.error_mm);
      table << line;
    } else if (rows[k].ok) {
      std::snprintf(line, sizeof line, "%zu,%.6g,%.6g,,,,no_damage_detected\n", k,
                    positions[k].z_mm, positions[k].theta_deg);
      table << line;
    } else {
      ++failures;
      std::snprintf(line, sizeof line, "%zu,%.6g,%.6g,,,,", k, positions[k].z_mm,
                    positions[k].theta_deg);
      table << line << csv_quote("error: " + rows[k].error) << '\n';
      std::fprintf(stderr, "position %zu failed: %s\n", k, rows[k].error.c_str());
    }
  }
  Manifest::write_text(dir / "sweep.csv", table.str());
  std::fputs(table.str().c_str(), stdout);

  manifest.add_output(dir, dir / "baseline.tgwc");
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (!rows[k].ok) continue;
    char name[32];
    std::snprintf(name, sizeof name, "pos_%03zu", k);
    for (const char* file : {"damage.tgwc", "di_map.csv", "di_map.pgm", "report.json"}) {
      manifest.add_output(dir, dir / name / file);
    }
  }
  manifest.add_output(dir, dir / "sweep.csv");
  json listed = json::array();
  for (const auto& p : positions) listed.push_back({{"z_mm", p.z_mm}, {"theta_deg", p.theta_deg}});
  manifest.set("positions", listed);
  manifest.write(dir);
  return failures == 0 ? 0 : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torsional guided-wave damage imaging for pipes"};
  app.set_version_flag("--version", std::string(tgw_version()));
  app.require_subcommand(1);

  Common common;
  for (int k = 0; k < argc; ++k) common.args.emplace_back(argv[k]);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-s,--scenario", common.scenario, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", common.out, "Output directory")->required();
  };
  AnalysisFlags flags;
  auto add_analysis = [&](CLI::App* sub) {
    sub->add_option("--grid", flags.grid, "Pixel grid as ROWSxCOLS (default: scenario grid)");
    sub->add_option("--truncate-us", flags.truncate_us,
                    "Keep only the first T microseconds of every trace")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", flags.threads, "Worker threads for the map")
        ->check(CLI::Range(1u, 256u));
  };

  CLI::App* sim = app.add_subcommand("simulate", "Simulate baseline and damage captures");
  add_common(sim);

  CLI::App* loc = app.add_subcommand("locate", "Build the damage index map and localize");
  add_common(loc);
  add_analysis(loc);
  std::string baseline_path, damage_path;
  loc->add_option("-b,--baseline", baseline_path, "Baseline capture")->required();
  loc->add_option("-d,--damage", damage_path, "Damage capture")->required();
  loc->add_option("--window-samples", flags.window_samples,
                  "Window length in samples at the capture rate")
      ->check(CLI::Range(1u, 10'000'000u));

  CLI::App* swp = app.add_subcommand("sweep", "Localize a defect at a list of positions");
  add_common(swp);
  add_analysis(swp);
  std::vector<std::string> position_items;
  std::string positions_file;
  unsigned jobs = 1;
  swp->add_option("-p,--position", position_items,
                  "Defect position Z_MM:THETA_DEG (repeatable, or comma-separated)");
  swp->add_option("--positions-file", positions_file,
                  "File of whitespace-separated Z_MM:THETA_DEG entries");
  swp->add_option("-j,--jobs", jobs, "Positions processed in parallel")
      ->check(CLI::Range(1u, 256u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(common);
    if (*loc) return cmd_locate(common, baseline_path, damage_path, flags);
    return cmd_sweep(common, collect_positions(position_items, positions_file), flags, jobs);
  } catch (const CliError& e) {
    std::fprintf(stderr, "tgw: error: %s\n", e.what());
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tgw: internal error: %s\n", e.what());
    return kExitInternal;
  }
}
