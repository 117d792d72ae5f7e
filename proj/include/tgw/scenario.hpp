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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "tgw/di_engine.hpp"
#include "tgw/simulator.hpp"

namespace tgw {

/// One complete run description: physics for the simulator plus the
/// analysis grid and window. Loaded from JSON; every key is optional and
/// falls back to the documented defaults (see README).
struct ScenarioConfig {
  PipeSpec pipe;
  ArrayLayout layout = ArrayLayout::simulation16();
  ExcitationSpec excitation;
  PropagationSpec propagation;
  AcquisitionSpec acquisition;
  std::optional<DefectSpec> defect;
  GridSpec grid;
  DIParams di_params;  // window_length_samples is at acquisition.sampling_rate
  std::uint64_t rng_seed = 1;

  /// Cross-field checks; throws Config naming the offending fields.
  void validate() const;

  SimulationSetup simulation_setup() const;

  /// Analysis parameters for data sampled at `effective_rate`, with the
  /// window rescaled to keep its duration unless `window_override` is given.
  DIParams analysis_params(double effective_rate,
                           std::optional<std::size_t> window_override = std::nullopt) const;

  /// Seeds used for the baseline and damage acquisitions.
  std::uint64_t baseline_seed() const { return rng_seed; }
  std::uint64_t damage_seed() const { return rng_seed + 1; }
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical JSON rendering (mm / degrees / kHz units, all keys present).
std::string scenario_to_json(const ScenarioConfig& config);

/// Throws Incompatible when a capture does not belong to this scenario.
void check_capture(const ScenarioConfig& config, const WaveformSet& set,
                   const std::string& name);

}  // namespace tgw
