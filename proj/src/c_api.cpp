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

#include "tgw/tgw.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>

#include "tgw/capture_io.hpp"
#include "tgw/di_engine.hpp"
#include "tgw/error.hpp"
#include "tgw/map_export.hpp"
#include "tgw/scenario.hpp"
#include "tgw/simulator.hpp"

struct tgw_scenario {
  tgw::ScenarioConfig config;
  std::string json_cache;
};

struct tgw_waveforms {
  tgw::WaveformSet set;
};

struct tgw_dimap {
  tgw::DIMap map;
  tgw::PipeSpec pipe;
};

namespace {

thread_local std::string last_error;

tgw_status to_status(tgw::ErrorCode code) {
  switch (code) {
    case tgw::ErrorCode::InvalidArgument: return TGW_E_INVALID_ARGUMENT;
    case tgw::ErrorCode::Config: return TGW_E_CONFIG;
    case tgw::ErrorCode::Io: return TGW_E_IO;
    case tgw::ErrorCode::NotCaptureFile: return TGW_E_NOT_CAPTURE;
    case tgw::ErrorCode::CorruptCapture: return TGW_E_CORRUPT_CAPTURE;
    case tgw::ErrorCode::UnsupportedVersion: return TGW_E_UNSUPPORTED_VERSION;
    case tgw::ErrorCode::Incompatible: return TGW_E_INCOMPATIBLE;
    case tgw::ErrorCode::Internal: return TGW_E_INTERNAL;
  }
  return TGW_E_INTERNAL;
}

template <typename F>
tgw_status guarded(F&& body) {
  try {
    body();
    return TGW_OK;
  } catch (const tgw::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TGW_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TGW_E_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return TGW_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) tgw::fail(tgw::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

tgw_status make_map(const tgw_scenario* scenario, const tgw_waveforms* baseline,
                    const tgw_waveforms* damage, const tgw_di_options* options,
                    bool reference, tgw_dimap** out) {
  return guarded([&] {
    need(scenario, "scenario");
    need(baseline, "baseline");
    need(damage, "damage");
    need(out, "out");
    const auto& cfg = scenario->config;
    const tgw_di_options opts = options ? *options : tgw_di_options{};

    tgw::GridSpec grid = cfg.grid;
    if (opts.rows) grid.rows = opts.rows;
    if (opts.cols) grid.cols = opts.cols;

    const double rate = baseline->set.sampling_rate;
    tgw::DIParams params = cfg.analysis_params(
        rate, opts.window_samples ? std::optional<std::size_t>(opts.window_samples)
                                  : std::nullopt);
    params.threads = opts.threads ? opts.threads : 1;

    const tgw::WaveformSet* b = &baseline->set;
    const tgw::WaveformSet* d = &damage->set;
    tgw::WaveformSet bt, dt;
    if (opts.truncate_us > 0.0) {
      const auto keep = static_cast<std::size_t>(std::floor(opts.truncate_us * 1e-6 * rate));
      tgw::require(keep >= 1, "truncation leaves no samples");
      bt = b->truncated(keep);
      dt = d->truncated(keep);
      b = &bt;
      d = &dt;
    }
    auto* result = new tgw_dimap{
        reference ? tgw::reference_di_map(*b, *d, cfg.layout, cfg.pipe, grid, params)
                  : tgw::compute_di_map(*b, *d, cfg.layout, cfg.pipe, grid, params),
        cfg.pipe};
    *out = result;
  });
}

}  // namespace

extern "C" {

const char* tgw_version(void) { return "1.0.0"; }

const char* tgw_last_error(void) { return last_error.c_str(); }

const char* tgw_status_name(tgw_status status) {
  switch (status) {
    case TGW_OK: return "ok";
    case TGW_E_INVALID_ARGUMENT: return "invalid argument";
    case TGW_E_CONFIG: return "configuration error";
    case TGW_E_IO: return "i/o error";
    case TGW_E_NOT_CAPTURE: return "not a capture file";
    case TGW_E_CORRUPT_CAPTURE: return "corrupt capture";
    case TGW_E_UNSUPPORTED_VERSION: return "unsupported version";
    case TGW_E_INCOMPATIBLE: return "incompatible data";
    case TGW_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

tgw_status tgw_scenario_load(const char* path, tgw_scenario** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new tgw_scenario{tgw::load_scenario(path), {}};
  });
}

tgw_status tgw_scenario_parse(const char* json_text, tgw_scenario** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    *out = new tgw_scenario{tgw::parse_scenario(json_text), {}};
  });
}

void tgw_scenario_free(tgw_scenario* scenario) { delete scenario; }

const char* tgw_scenario_json(tgw_scenario* scenario) {
  if (!scenario) return "";
  scenario->json_cache = tgw::scenario_to_json(scenario->config);
  return scenario->json_cache.c_str();
}

int tgw_scenario_has_defect(const tgw_scenario* scenario) {
  return scenario && scenario->config.defect ? 1 : 0;
}

tgw_status tgw_scenario_defect_position(const tgw_scenario* scenario, double* z_mm,
                                        double* theta_deg) {
  return guarded([&] {
    need(scenario, "scenario");
    need(z_mm, "z_mm");
    need(theta_deg, "theta_deg");
    if (!scenario->config.defect) tgw::fail(tgw::ErrorCode::Config, "scenario has no defect");
    *z_mm = scenario->config.defect->position.z() * 1e3;
    *theta_deg = scenario->config.defect->position.theta();
  });
}

tgw_status tgw_scenario_set_defect_position(tgw_scenario* scenario, double z_mm,
                                            double theta_deg) {
  return guarded([&] {
    need(scenario, "scenario");
    tgw::DefectSpec defect = scenario->config.defect.value_or(tgw::DefectSpec{});
    defect.position = tgw::SurfacePoint(z_mm / 1e3, theta_deg);
    defect.validate(scenario->config.layout);
    scenario->config.defect = defect;
  });
}

uint64_t tgw_scenario_seed(const tgw_scenario* scenario) {
  return scenario ? scenario->config.rng_seed : 0;
}

uint32_t tgw_scenario_receivers(const tgw_scenario* scenario) {
  return scenario ? static_cast<uint32_t>(scenario->config.layout.rx.count) : 0;
}

double tgw_surface_error_mm(const tgw_scenario* scenario, double z1_mm, double theta1_deg,
                            double z2_mm, double theta2_deg) {
  if (!scenario) return NAN;
  return tgw::surface_error({z1_mm / 1e3, theta1_deg}, {z2_mm / 1e3, theta2_deg},
                            scenario->config.pipe) * 1e3;
}

tgw_status tgw_simulate(const tgw_scenario* scenario, tgw_label label, tgw_waveforms** out) {
  return guarded([&] {
    need(scenario, "scenario");
    need(out, "out");
    const auto& cfg = scenario->config;
    if (label == TGW_LABEL_DAMAGE) {
      if (!cfg.defect) tgw::fail(tgw::ErrorCode::Config, "scenario has no defect to simulate");
      *out = new tgw_waveforms{tgw::simulate(cfg.simulation_setup(), cfg.defect, cfg.damage_seed())};
    } else {
      *out = new tgw_waveforms{
          tgw::simulate(cfg.simulation_setup(), std::nullopt, cfg.baseline_seed())};
    }
  });
}

void tgw_waveforms_free(tgw_waveforms* waveforms) { delete waveforms; }

uint32_t tgw_waveforms_channels(const tgw_waveforms* w) {
  return w ? static_cast<uint32_t>(w->set.num_receivers()) : 0;
}

uint32_t tgw_waveforms_samples(const tgw_waveforms* w) {
  return w ? static_cast<uint32_t>(w->set.num_samples()) : 0;
}

double tgw_waveforms_sampling_rate(const tgw_waveforms* w) { return w ? w->set.sampling_rate : 0.0; }

tgw_label tgw_waveforms_label(const tgw_waveforms* w) {
  return w && w->set.label == tgw::Label::Damage ? TGW_LABEL_DAMAGE : TGW_LABEL_BASELINE;
}

const double* tgw_waveforms_channel(const tgw_waveforms* w, uint32_t channel) {
  if (!w || channel >= w->set.num_receivers()) return nullptr;
  return w->set.channel(channel).data();
}

tgw_status tgw_capture_write(const tgw_waveforms* waveforms, const char* path,
                             uint64_t* bytes_written) {
  return guarded([&] {
    need(waveforms, "waveforms");
    need(path, "path");
    const std::size_t n = tgw::write_capture(waveforms->set, std::filesystem::path(path));
    if (bytes_written) *bytes_written = n;
  });
}

tgw_status tgw_capture_read(const char* path, tgw_waveforms** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new tgw_waveforms{tgw::parse_capture(std::filesystem::path(path))};
  });
}

tgw_status tgw_capture_decode(const uint8_t* data, size_t size, tgw_waveforms** out) {
  return guarded([&] {
    if (size) need(data, "data");
    need(out, "out");
    *out = new tgw_waveforms{tgw::decode_capture({data, size})};
  });
}

tgw_status tgw_capture_check(const tgw_scenario* scenario, const tgw_waveforms* waveforms,
                             const char* name) {
  return guarded([&] {
    need(scenario, "scenario");
    need(waveforms, "waveforms");
    tgw::check_capture(scenario->config, waveforms->set, name ? name : "capture");
  });
}

tgw_status tgw_di_map(const tgw_scenario* scenario, const tgw_waveforms* baseline,
                      const tgw_waveforms* damage, const tgw_di_options* options,
                      tgw_dimap** out) {
  return make_map(scenario, baseline, damage, options, false, out);
}

tgw_status tgw_di_map_reference(const tgw_scenario* scenario, const tgw_waveforms* baseline,
                                const tgw_waveforms* damage, const tgw_di_options* options,
                                tgw_dimap** out) {
  return make_map(scenario, baseline, damage, options, true, out);
}

void tgw_dimap_free(tgw_dimap* map) { delete map; }

uint32_t tgw_dimap_rows(const tgw_dimap* map) {
  return map ? static_cast<uint32_t>(map->map.values.rows()) : 0;
}

uint32_t tgw_dimap_cols(const tgw_dimap* map) {
  return map ? static_cast<uint32_t>(map->map.values.cols()) : 0;
}

uint32_t tgw_dimap_window_samples(const tgw_dimap* map) {
  return map ? static_cast<uint32_t>(map->map.window_length_samples) : 0;
}

const double* tgw_dimap_values(const tgw_dimap* map) {
  return map ? map->map.values.data().data() : nullptr;
}

tgw_status tgw_dimap_export(const tgw_dimap* map, tgw_map_format format, const char* path) {
  return guarded([&] {
    need(map, "map");
    need(path, "path");
    if (format != TGW_MAP_CSV && format != TGW_MAP_PGM) {
      tgw::fail(tgw::ErrorCode::InvalidArgument, "unknown map format");
    }
    tgw::export_map(map->map, format == TGW_MAP_CSV ? tgw::MapFormat::Csv : tgw::MapFormat::Pgm,
                    std::filesystem::path(path));
  });
}

tgw_status tgw_localize(const tgw_dimap* map, const tgw_scenario* truth_from, tgw_report* out) {
  return guarded([&] {
    need(map, "map");
    need(out, "out");
    tgw::LocalizationReport r = tgw::localize(map->map);
    if (truth_from && truth_from->config.defect) {
      r.set_truth(truth_from->config.defect->position, map->pipe);
    }
    *out = tgw_report{};
    out->damage_detected = r.damage_detected ? 1 : 0;
    out->row = static_cast<uint32_t>(r.row);
    out->col = static_cast<uint32_t>(r.col);
    out->peak_value = r.peak_value;
    if (r.estimated) {
      out->z_mm = r.estimated->z() * 1e3;
      out->theta_deg = r.estimated->theta();
    }
    if (r.truth) {
      out->has_truth = 1;
      out->truth_z_mm = r.truth->z() * 1e3;
      out->truth_theta_deg = r.truth->theta();
      out->error_mm = r.error ? *r.error * 1e3 : NAN;
    }
  });
}

}  // extern "C"
