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

#include "tgw/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tgw/capture_io.hpp"
#include "tgw/error.hpp"

namespace tgw {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) { fail(ErrorCode::Config, message); }

void expect_object(const json& node, const std::string& path,
                   std::initializer_list<const char*> allowed) {
  if (!node.is_object()) config_error(path + ": expected an object");
  for (const auto& [key, value] : node.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) config_error((path.empty() ? key : path + "." + key) + ": unknown field");
  }
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

double number(const json& node, const std::string& path, const char* key, double fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number()) config_error(join(path, key) + ": expected a number");
  return v.get<double>();
}

double required_number(const json& node, const std::string& path, const char* key) {
  if (!node.contains(key)) config_error(join(path, key) + ": missing required field");
  return number(node, path, key, 0.0);
}

long long integer(const json& node, const std::string& path, const char* key,
                  long long fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number_integer()) config_error(join(path, key) + ": expected an integer");
  return v.get<long long>();
}

void read_pipe(const json& node, PipeSpec& pipe) {
  expect_object(node, "pipe", {"outer_diameter_mm", "wall_thickness_mm", "length_mm",
                               "density_kg_m3", "youngs_modulus_gpa", "poisson_ratio"});
  pipe.outer_diameter = number(node, "pipe", "outer_diameter_mm", pipe.outer_diameter * 1e3) / 1e3;
  pipe.wall_thickness = number(node, "pipe", "wall_thickness_mm", pipe.wall_thickness * 1e3) / 1e3;
  pipe.length = number(node, "pipe", "length_mm", pipe.length * 1e3) / 1e3;
  pipe.density = number(node, "pipe", "density_kg_m3", *pipe.density);
  pipe.youngs_modulus = number(node, "pipe", "youngs_modulus_gpa", *pipe.youngs_modulus / 1e9) * 1e9;
  pipe.poisson_ratio = number(node, "pipe", "poisson_ratio", *pipe.poisson_ratio);
}

void read_ring(const json& node, const std::string& path, Ring& ring) {
  expect_object(node, path, {"z_mm", "count"});
  ring.z = number(node, path, "z_mm", ring.z * 1e3) / 1e3;
  const long long count = integer(node, path, "count", ring.count);
  if (count < 1 || count > 255) config_error(path + ".count: must be in [1, 255]");
  ring.count = static_cast<int>(count);
}

void read_layout(const json& node, ArrayLayout& layout) {
  expect_object(node, "layout", {"tx", "rx"});
  if (node.contains("tx")) read_ring(node.at("tx"), "layout.tx", layout.tx);
  if (node.contains("rx")) read_ring(node.at("rx"), "layout.rx", layout.rx);
}

void read_excitation(const json& node, ExcitationSpec& ex) {
  expect_object(node, "excitation", {"frequency_khz", "cycles", "amplitude_scale"});
  ex.center_frequency = number(node, "excitation", "frequency_khz", ex.center_frequency / 1e3) * 1e3;
  ex.cycles = static_cast<int>(integer(node, "excitation", "cycles", ex.cycles));
  ex.amplitude_scale = number(node, "excitation", "amplitude_scale", ex.amplitude_scale);
}

void read_propagation(const json& node, PropagationSpec& prop, bool& ends_given) {
  expect_object(node, "propagation",
                {"group_velocity_m_s", "boundary", "edge_reflection_coefficient", "pipe_ends_mm",
                 "mode_leakage_snr_db", "direct_amplitude_mv", "geometric_spreading"});
  const std::string p = "propagation";
  prop.group_velocity = number(node, p, "group_velocity_m_s", prop.group_velocity);
  if (node.contains("boundary")) {
    const json& b = node.at("boundary");
    if (b == "reflective") {
      prop.boundary = BoundaryMode::Reflective;
    } else if (b == "low_reflecting") {
      prop.boundary = BoundaryMode::LowReflecting;
    } else {
      config_error("propagation.boundary: expected \"reflective\" or \"low_reflecting\"");
    }
  }
  prop.edge_reflection_coefficient =
      number(node, p, "edge_reflection_coefficient", prop.edge_reflection_coefficient);
  if (node.contains("pipe_ends_mm")) {
    const json& ends = node.at("pipe_ends_mm");
    if (!ends.is_array() || ends.size() != 2 || !ends[0].is_number() || !ends[1].is_number()) {
      config_error("propagation.pipe_ends_mm: expected two numbers");
    }
    prop.pipe_ends = {ends[0].get<double>() / 1e3, ends[1].get<double>() / 1e3};
    ends_given = true;
  }
  if (node.contains("mode_leakage_snr_db")) {
    const json& snr = node.at("mode_leakage_snr_db");
    if (snr.is_null()) {
      prop.mode_leakage_snr_db.reset();
    } else if (snr.is_number()) {
      prop.mode_leakage_snr_db = snr.get<double>();
    } else {
      config_error("propagation.mode_leakage_snr_db: expected a number or null");
    }
  }
  prop.direct_amplitude = number(node, p, "direct_amplitude_mv", prop.direct_amplitude * 1e3) / 1e3;
  if (node.contains("geometric_spreading")) {
    if (!node.at("geometric_spreading").is_boolean()) {
      config_error("propagation.geometric_spreading: expected true or false");
    }
    prop.geometric_spreading = node.at("geometric_spreading").get<bool>();
  }
}

void read_acquisition(const json& node, AcquisitionSpec& acq) {
  const std::string p = "acquisition";
  expect_object(node, p, {"sampling_rate_mhz", "samples_per_channel", "num_averages",
                          "decimation_factor", "adc_bits", "adc_full_scale_v"});
  acq.sampling_rate = number(node, p, "sampling_rate_mhz", acq.sampling_rate / 1e6) * 1e6;
  const long long samples = integer(node, p, "samples_per_channel",
                                    static_cast<long long>(acq.samples_per_channel));
  if (samples < 1) config_error("acquisition.samples_per_channel: must be positive");
  acq.samples_per_channel = static_cast<std::size_t>(samples);
  acq.num_averages = static_cast<int>(integer(node, p, "num_averages", acq.num_averages));
  acq.decimation_factor = static_cast<int>(integer(node, p, "decimation_factor", acq.decimation_factor));
  if (node.contains("adc_bits")) {
    const json& bits = node.at("adc_bits");
    if (bits.is_null()) {
      acq.adc_bits.reset();
    } else if (bits.is_number_integer()) {
      acq.adc_bits = bits.get<int>();
    } else {
      config_error("acquisition.adc_bits: expected an integer or null");
    }
  }
  acq.adc_full_scale = capture_full_scale(number(node, p, "adc_full_scale_v", acq.adc_full_scale));
}

void read_defect(const json& node, std::optional<DefectSpec>& defect) {
  if (node.is_null()) {
    defect.reset();
    return;
  }
  const std::string p = "defect";
  expect_object(node, p, {"kind", "z_mm", "theta_deg", "scatter_amplitude", "transmission_loss"});
  DefectSpec d;
  if (node.contains("kind")) {
    const json& k = node.at("kind");
    if (k == "notch") {
      d.kind = DefectKind::Notch;
    } else if (k == "added_mass") {
      d.kind = DefectKind::AddedMass;
    } else {
      config_error("defect.kind: expected \"notch\" or \"added_mass\"");
    }
  }
  d.position = SurfacePoint(required_number(node, p, "z_mm") / 1e3,
                            required_number(node, p, "theta_deg"));
  d.scatter_amplitude = number(node, p, "scatter_amplitude", d.scatter_amplitude);
  d.transmission_loss = number(node, p, "transmission_loss", d.transmission_loss);
  defect = d;
}

void read_grid(const json& node, GridSpec& grid) {
  expect_object(node, "grid", {"rows", "cols"});
  const long long rows = integer(node, "grid", "rows", static_cast<long long>(grid.rows));
  const long long cols = integer(node, "grid", "cols", static_cast<long long>(grid.cols));
  if (rows < 2) config_error("grid.rows: must be at least 2");
  if (cols < 2) config_error("grid.cols: must be at least 2");
  grid.rows = static_cast<std::size_t>(rows);
  grid.cols = static_cast<std::size_t>(cols);
}

void read_di(const json& node, DIParams& di, bool& velocity_given) {
  expect_object(node, "di", {"window_samples", "group_velocity_m_s"});
  const long long w = integer(node, "di", "window_samples",
                              static_cast<long long>(di.window_length_samples));
  if (w < 1) config_error("di.window_samples: must be at least 1");
  di.window_length_samples = static_cast<std::size_t>(w);
  if (node.contains("group_velocity_m_s")) {
    di.group_velocity = number(node, "di", "group_velocity_m_s", di.group_velocity);
    velocity_given = true;
  }
}

// Default pipe ends split the slack beyond the rings 1:2, which keeps the
// two edge echoes at distinct arrival times.
std::array<double, 2> default_pipe_ends(const PipeSpec& pipe, const ArrayLayout& layout) {
  const double slack = pipe.length - layout.separation();
  return {layout.tx.z - slack / 3.0, layout.rx.z + 2.0 * slack / 3.0};
}

template <typename F>
void wrap_validation(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) config_error(e.what());
    throw;
  }
}

std::string format_mm(double meters) {
  std::ostringstream os;
  os << meters * 1e3;
  return os.str();
}

}  // namespace

void ScenarioConfig::validate() const {
  wrap_validation([&] {
    pipe.validate();
    layout.validate();
    excitation.validate();
    propagation.validate();
    acquisition.validate();
    grid.validate();
    if (defect) defect->validate(layout);
  });
  if (excitation.sampling_rate != acquisition.sampling_rate) {
    config_error("excitation sampling rate must equal acquisition.sampling_rate_mhz");
  }
  if (layout.separation() >= pipe.length) {
    config_error("layout ring separation (" + format_mm(layout.separation()) +
                 " mm) must be shorter than pipe.length_mm (" + format_mm(pipe.length) + ")");
  }
  if (propagation.pipe_ends[0] > layout.tx.z || propagation.pipe_ends[1] < layout.rx.z) {
    config_error("propagation.pipe_ends_mm must enclose layout.tx.z_mm and layout.rx.z_mm");
  }
  const double span = propagation.pipe_ends[1] - propagation.pipe_ends[0];
  if (std::fabs(span - pipe.length) > 1e-6) {
    config_error("propagation.pipe_ends_mm span (" + format_mm(span) +
                 " mm) must equal pipe.length_mm (" + format_mm(pipe.length) + ")");
  }
  if (acquisition.adc_bits && *acquisition.adc_bits > 16) {
    config_error("acquisition.adc_bits: captures hold at most 16-bit codes");
  }
  if (di_params.group_velocity <= 0.0) config_error("di.group_velocity_m_s: must be positive");
}

SimulationSetup ScenarioConfig::simulation_setup() const {
  return {pipe, layout, excitation, propagation, acquisition};
}

DIParams ScenarioConfig::analysis_params(double effective_rate,
                                         std::optional<std::size_t> window_override) const {
  DIParams p = di_params;
  p.sampling_rate = effective_rate;
  p.window_length_samples =
      window_override ? *window_override
                      : duration_preserving_window(di_params.window_length_samples,
                                                   acquisition.sampling_rate, effective_rate);
  return p;
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("scenario is not valid JSON: ") + e.what());
  }
  expect_object(root, "", {"pipe", "layout", "excitation", "propagation", "acquisition",
                           "defect", "grid", "di", "seed"});

  ScenarioConfig cfg;
  bool ends_given = false;
  bool velocity_given = false;
  if (root.contains("pipe")) read_pipe(root.at("pipe"), cfg.pipe);
  if (root.contains("layout")) read_layout(root.at("layout"), cfg.layout);
  if (root.contains("excitation")) read_excitation(root.at("excitation"), cfg.excitation);
  if (root.contains("propagation")) read_propagation(root.at("propagation"), cfg.propagation, ends_given);
  if (root.contains("acquisition")) read_acquisition(root.at("acquisition"), cfg.acquisition);
  if (root.contains("defect")) read_defect(root.at("defect"), cfg.defect);
  if (root.contains("grid")) read_grid(root.at("grid"), cfg.grid);
  if (root.contains("di")) read_di(root.at("di"), cfg.di_params, velocity_given);
  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      config_error("seed: expected a non-negative integer");
    }
    cfg.rng_seed = s.get<std::uint64_t>();
  }

  cfg.excitation.sampling_rate = cfg.acquisition.sampling_rate;
  cfg.di_params.sampling_rate = cfg.acquisition.effective_sampling_rate();
  if (!velocity_given) cfg.di_params.group_velocity = cfg.propagation.group_velocity;
  if (!ends_given) cfg.propagation.pipe_ends = default_pipe_ends(cfg.pipe, cfg.layout);

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open scenario " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["pipe"] = {{"outer_diameter_mm", c.pipe.outer_diameter * 1e3},
               {"wall_thickness_mm", c.pipe.wall_thickness * 1e3},
               {"length_mm", c.pipe.length * 1e3},
               {"density_kg_m3", c.pipe.density.value_or(0.0)},
               {"youngs_modulus_gpa", c.pipe.youngs_modulus.value_or(0.0) / 1e9},
               {"poisson_ratio", c.pipe.poisson_ratio.value_or(0.0)}};
  j["layout"] = {{"tx", {{"z_mm", c.layout.tx.z * 1e3}, {"count", c.layout.tx.count}}},
                 {"rx", {{"z_mm", c.layout.rx.z * 1e3}, {"count", c.layout.rx.count}}}};
  j["excitation"] = {{"frequency_khz", c.excitation.center_frequency / 1e3},
                     {"cycles", c.excitation.cycles},
                     {"amplitude_scale", c.excitation.amplitude_scale}};
  j["propagation"] = {
      {"group_velocity_m_s", c.propagation.group_velocity},
      {"boundary",
       c.propagation.boundary == BoundaryMode::Reflective ? "reflective" : "low_reflecting"},
      {"edge_reflection_coefficient", c.propagation.edge_reflection_coefficient},
      {"pipe_ends_mm", {c.propagation.pipe_ends[0] * 1e3, c.propagation.pipe_ends[1] * 1e3}},
      {"mode_leakage_snr_db", c.propagation.mode_leakage_snr_db
                                  ? json(*c.propagation.mode_leakage_snr_db)
                                  : json(nullptr)},
      {"direct_amplitude_mv", c.propagation.direct_amplitude * 1e3},
      {"geometric_spreading", c.propagation.geometric_spreading}};
  j["acquisition"] = {
      {"sampling_rate_mhz", c.acquisition.sampling_rate / 1e6},
      {"samples_per_channel", c.acquisition.samples_per_channel},
      {"num_averages", c.acquisition.num_averages},
      {"decimation_factor", c.acquisition.decimation_factor},
      {"adc_bits", c.acquisition.adc_bits ? json(*c.acquisition.adc_bits) : json(nullptr)},
      {"adc_full_scale_v", c.acquisition.adc_full_scale}};
  if (c.defect) {
    j["defect"] = {{"kind", c.defect->kind == DefectKind::Notch ? "notch" : "added_mass"},
                   {"z_mm", c.defect->position.z() * 1e3},
                   {"theta_deg", c.defect->position.theta()},
                   {"scatter_amplitude", c.defect->scatter_amplitude},
                   {"transmission_loss", c.defect->transmission_loss}};
  } else {
    j["defect"] = nullptr;
  }
  j["grid"] = {{"rows", c.grid.rows}, {"cols", c.grid.cols}};
  j["di"] = {{"window_samples", c.di_params.window_length_samples},
             {"group_velocity_m_s", c.di_params.group_velocity}};
  j["seed"] = c.rng_seed;
  return j.dump(2);
}

void check_capture(const ScenarioConfig& config, const WaveformSet& set,
                   const std::string& name) {
  if (set.num_receivers() != static_cast<std::size_t>(config.layout.rx.count)) {
    fail(ErrorCode::Incompatible,
         "scenario layout.rx.count is " + std::to_string(config.layout.rx.count) + " but " +
             name + " capture has " + std::to_string(set.num_receivers()) + " channels");
  }
  if (set.layout_digest != layout_digest(config.layout)) {
    fail(ErrorCode::Incompatible, name + " capture was recorded with a different ring layout");
  }
}

}  // namespace tgw
