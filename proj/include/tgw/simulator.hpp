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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tgw/excitation.hpp"
#include "tgw/geometry.hpp"
#include "tgw/waveform.hpp"

namespace tgw {

enum class DefectKind { Notch, AddedMass };

/// A defect reduced to its two observable effects on the torsional wave: a
/// scattered copy of the incident burst, and an amplitude drop of the direct
/// arrival.
struct DefectSpec {
  DefectKind kind = DefectKind::Notch;
  SurfacePoint position{0.2, 90.0};
  double scatter_amplitude = 0.1;   // fraction of the direct amplitude
  double transmission_loss = 0.0;   // fractional drop of the direct arrival

  void validate(const ArrayLayout& layout) const;
};

/// transmission_loss that takes a direct arrival from `baseline` to `loaded`.
inline double transmission_loss_for(double baseline, double loaded) {
  return 1.0 - loaded / baseline;
}

enum class BoundaryMode { Reflective, LowReflecting };

struct PropagationSpec {
  double group_velocity = 3130.0;  // m/s
  BoundaryMode boundary = BoundaryMode::Reflective;
  double edge_reflection_coefficient = 1.0;
  std::array<double, 2> pipe_ends{-0.2, 0.8};  // axial positions, m
  std::optional<double> mode_leakage_snr_db;   // none: noise off
  double direct_amplitude = 0.0825;            // volts at the receivers
  bool geometric_spreading = false;            // 1/sqrt(distance) on scatter

  void validate() const;
};

struct AcquisitionSpec {
  double sampling_rate = 10e6;  // Hz, before decimation
  std::size_t samples_per_channel = 6000;
  int num_averages = 10;
  int decimation_factor = 1;
  std::optional<int> adc_bits = 10;  // none: keep floating-point samples
  double adc_full_scale = 0.33;      // volts, peak to peak

  void validate() const;
  double effective_sampling_rate() const { return sampling_rate / decimation_factor; }
};

/// Everything the simulator needs besides the defect and seed.
struct SimulationSetup {
  PipeSpec pipe;
  ArrayLayout layout;
  ExcitationSpec excitation;
  PropagationSpec propagation;
  AcquisitionSpec acquisition;
};

/// Unit-peak received burst shape: the excitation burst divided by its peak.
double unit_burst(const ExcitationSpec& excitation, double t);

/// Noise-free trace of receiver m before any acquisition processing.
std::vector<double> clean_trace(const SimulationSetup& setup,
                                const std::optional<DefectSpec>& defect, int receiver);

/// Full synthetic acquisition: ray-traced arrivals, per-realization noise,
/// averaging, ADC quantization and decimation. Deterministic in rng_seed; each
/// receiver draws from its own stream so channel order does not matter.
WaveformSet simulate(const SimulationSetup& setup, const std::optional<DefectSpec>& defect,
                     std::uint64_t rng_seed);

/// LSB size of a mid-tread converter spanning full_scale volts.
double adc_lsb(int bits, double full_scale);

/// Mid-tread uniform quantizer over [-full_scale/2, +full_scale/2) with
/// saturation at the end codes.
std::vector<double> apply_adc(std::span<const double> trace, int bits, double full_scale);

/// Keeps samples 0, factor, 2*factor, ... ; output length floor(len/factor).
std::vector<double> decimate(std::span<const double> trace, int factor);

/// Element-wise mean. Uses a running mean so identical inputs reproduce the
/// input exactly.
std::vector<double> average_traces(std::span<const std::vector<double>> realizations);

}  // namespace tgw
