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

#include "tgw/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "tgw/error.hpp"

namespace tgw {

void DefectSpec::validate(const ArrayLayout& layout) const {
  require(position.z() > layout.tx.z && position.z() < layout.rx.z,
          "defect.z must lie strictly between the transmitter and receiver rings");
  require(scatter_amplitude >= 0.0 && scatter_amplitude <= 1.0,
          "defect.scatter_amplitude must be in [0, 1]");
  require(transmission_loss >= 0.0 && transmission_loss <= 1.0,
          "defect.transmission_loss must be in [0, 1]");
}

void PropagationSpec::validate() const {
  require(group_velocity > 0.0, "propagation.group_velocity must be positive");
  require(edge_reflection_coefficient >= 0.0 && edge_reflection_coefficient <= 1.0,
          "propagation.edge_reflection_coefficient must be in [0, 1]");
  require(pipe_ends[0] < pipe_ends[1], "propagation.pipe_ends must be increasing");
  require(direct_amplitude > 0.0, "propagation.direct_amplitude must be positive");
}

void AcquisitionSpec::validate() const {
  require(sampling_rate > 0.0, "acquisition.sampling_rate must be positive");
  require(samples_per_channel >= 1, "acquisition.samples_per_channel must be positive");
  require(num_averages >= 1, "acquisition.num_averages must be positive");
  require(decimation_factor >= 1, "acquisition.decimation_factor must be positive");
  require(static_cast<std::size_t>(decimation_factor) <= samples_per_channel,
          "acquisition.decimation_factor exceeds samples_per_channel");
  if (adc_bits) {
    require(*adc_bits >= 2 && *adc_bits <= 24, "acquisition.adc_bits must be in [2, 24]");
  }
  require(adc_full_scale > 0.0, "acquisition.adc_full_scale must be positive");
}

double unit_burst(const ExcitationSpec& excitation, double t) {
  // The peak search is the only expensive part; cache per frequency/cycles.
  thread_local double cached_f = -1.0;
  thread_local int cached_cycles = -1;
  thread_local double cached_peak = 1.0;
  if (excitation.center_frequency != cached_f || excitation.cycles != cached_cycles) {
    cached_peak = toneburst_peak(excitation);
    cached_f = excitation.center_frequency;
    cached_cycles = excitation.cycles;
  }
  ExcitationSpec unit = excitation;
  unit.amplitude_scale = 1.0;
  return toneburst_value(unit, t) / cached_peak;
}

namespace {

void add_burst(std::vector<double>& trace, const ExcitationSpec& excitation, double fs,
               double delay, double amplitude) {
  if (amplitude == 0.0) return;
  const double first = std::ceil(delay * fs);
  const double last = std::floor((delay + excitation.duration()) * fs);
  if (last < 0.0 || first >= static_cast<double>(trace.size())) return;
  const auto n0 = static_cast<std::size_t>(std::max(first, 0.0));
  const auto n1 = std::min(static_cast<std::size_t>(last), trace.size() - 1);
  for (std::size_t n = n0; n <= n1; ++n) {
    trace[n] += amplitude * unit_burst(excitation, static_cast<double>(n) / fs - delay);
  }
}

double noise_sigma(const SimulationSetup& setup, double snr_db) {
  const auto& ex = setup.excitation;
  const double fs = setup.acquisition.sampling_rate;
  const auto support = static_cast<std::size_t>(std::floor(ex.duration() * fs)) + 1;
  double power = 0.0;
  for (std::size_t n = 0; n < support; ++n) {
    const double v = unit_burst(ex, static_cast<double>(n) / fs);
    power += v * v;
  }
  power *= setup.propagation.direct_amplitude * setup.propagation.direct_amplitude /
           static_cast<double>(support);
  return std::sqrt(power / std::pow(10.0, snr_db / 10.0));
}

}  // namespace

std::vector<double> clean_trace(const SimulationSetup& setup,
                                const std::optional<DefectSpec>& defect, int receiver) {
  const auto& layout = setup.layout;
  const auto& prop = setup.propagation;
  const double fs = setup.acquisition.sampling_rate;
  const double c = prop.group_velocity;
  const double a0 = prop.direct_amplitude;
  const SurfacePoint rx = layout.rx.element(receiver);

  std::vector<double> trace(setup.acquisition.samples_per_channel, 0.0);

  const double direct_gain = defect ? 1.0 - defect->transmission_loss : 1.0;
  add_burst(trace, setup.excitation, fs, layout.separation() / c, a0 * direct_gain);

  if (defect) {
    const double d_tx = tx_distance(defect->position, layout);
    const double d_rx = rx_distance(defect->position, rx, setup.pipe);
    double gain = defect->scatter_amplitude;
    if (prop.geometric_spreading) {
      gain *= std::sqrt(layout.separation() / std::max(d_rx, 1e-3));
    }
    add_burst(trace, setup.excitation, fs, (d_tx + d_rx) / c, a0 * gain);
  }

  if (prop.boundary == BoundaryMode::Reflective) {
    for (double z_end : prop.pipe_ends) {
      const double path = std::fabs(z_end - layout.tx.z) + std::fabs(z_end - layout.rx.z);
      add_burst(trace, setup.excitation, fs, path / c, a0 * prop.edge_reflection_coefficient);
    }
  }
  return trace;
}

WaveformSet simulate(const SimulationSetup& setup, const std::optional<DefectSpec>& defect,
                     std::uint64_t rng_seed) {
  setup.pipe.validate();
  setup.layout.validate();
  setup.excitation.validate();
  setup.propagation.validate();
  setup.acquisition.validate();
  if (defect) defect->validate(setup.layout);

  const auto& acq = setup.acquisition;
  const double direct_end =
      (setup.layout.separation() / setup.propagation.group_velocity +
       setup.excitation.duration()) * acq.sampling_rate;
  if (std::ceil(direct_end) >= static_cast<double>(acq.samples_per_channel)) {
    fail(ErrorCode::InvalidArgument,
         "acquisition.samples_per_channel (" + std::to_string(acq.samples_per_channel) +
             ") too short to hold the direct arrival (needs " +
             std::to_string(static_cast<long long>(std::ceil(direct_end)) + 1) + ")");
  }

  const std::optional<double> sigma =
      setup.propagation.mode_leakage_snr_db
          ? std::optional<double>(noise_sigma(setup, *setup.propagation.mode_leakage_snr_db))
          : std::nullopt;

  const int receivers = setup.layout.rx.count;
  const std::size_t out_samples = acq.samples_per_channel / acq.decimation_factor;

  WaveformSet set;
  set.channels = Matrix(receivers, out_samples);
  set.sampling_rate = acq.effective_sampling_rate();
  set.adc_bits = acq.adc_bits;
  set.adc_full_scale = acq.adc_full_scale;
  set.label = defect ? Label::Damage : Label::Baseline;
  set.layout_digest = layout_digest(setup.layout);

  for (int m = 0; m < receivers; ++m) {
    std::vector<double> trace = clean_trace(setup, defect, m);

    if (sigma) {
      std::seed_seq seq{static_cast<std::uint32_t>(rng_seed),
                        static_cast<std::uint32_t>(rng_seed >> 32),
                        static_cast<std::uint32_t>(m)};
      std::mt19937_64 gen(seq);
      std::normal_distribution<double> noise(0.0, *sigma);
      std::vector<std::vector<double>> realizations(acq.num_averages, trace);
      for (auto& r : realizations) {
        for (double& v : r) v += noise(gen);
      }
      trace = average_traces(realizations);
    }
    if (acq.adc_bits) trace = apply_adc(trace, *acq.adc_bits, acq.adc_full_scale);
    if (acq.decimation_factor > 1) trace = decimate(trace, acq.decimation_factor);

    std::copy(trace.begin(), trace.end(), set.channels.row(m).begin());
  }
  return set;
}

double adc_lsb(int bits, double full_scale) { return full_scale / std::ldexp(1.0, bits); }

std::vector<double> apply_adc(std::span<const double> trace, int bits, double full_scale) {
  require(bits >= 2 && bits <= 24, "adc bits must be in [2, 24]");
  require(full_scale > 0.0, "adc full scale must be positive");
  const double lsb = adc_lsb(bits, full_scale);
  const double top = std::ldexp(1.0, bits - 1) - 1.0;
  const double bottom = -std::ldexp(1.0, bits - 1);
  std::vector<double> out(trace.size());
  for (std::size_t n = 0; n < trace.size(); ++n) {
    // Adding +0.0 folds -0.0 into +0.0 so samples match their decoded codes bit for bit.
    const double code = std::clamp(std::round(trace[n] / lsb), bottom, top) + 0.0;
    out[n] = code * lsb;
  }
  return out;
}

std::vector<double> decimate(std::span<const double> trace, int factor) {
  require(factor >= 1, "decimation factor must be at least 1");
  require(static_cast<std::size_t>(factor) <= trace.size(),
          "decimation factor exceeds trace length");
  std::vector<double> out(trace.size() / factor);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = trace[k * factor];
  return out;
}

std::vector<double> average_traces(std::span<const std::vector<double>> realizations) {
  require(!realizations.empty(), "cannot average an empty list of traces");
  const std::size_t len = realizations.front().size();
  for (const auto& r : realizations) {
    require(r.size() == len, "cannot average traces of different lengths");
  }
  std::vector<double> mean = realizations.front();
  for (std::size_t k = 1; k < realizations.size(); ++k) {
    const double inv = 1.0 / static_cast<double>(k + 1);
    const auto& r = realizations[k];
    for (std::size_t n = 0; n < len; ++n) mean[n] += (r[n] - mean[n]) * inv;
  }
  return mean;
}

}  // namespace tgw
