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

#include "tgw/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tgw/error.hpp"

namespace tgw {

void ExcitationSpec::validate() const {
  require(center_frequency > 0.0, "excitation.center_frequency must be positive");
  require(sampling_rate > 0.0, "excitation.sampling_rate must be positive");
  require(cycles >= 1, "excitation.cycles must be at least 1");
  require(sampling_rate >= 10.0 * center_frequency,
          "excitation.sampling_rate must be at least 10x the center frequency");
}

double toneburst_value(const ExcitationSpec& spec, double t) {
  if (t < 0.0 || t > spec.duration()) return 0.0;
  const double w = 2.0 * std::numbers::pi * spec.center_frequency * t;
  return spec.amplitude_scale * (spec.cycles / 2.0) * (1.0 - std::cos(w / spec.cycles)) *
         std::sin(w);
}

std::vector<double> hanning_toneburst(const ExcitationSpec& spec) {
  spec.validate();
  const auto support = static_cast<std::size_t>(
      std::ceil(spec.cycles * spec.sampling_rate / spec.center_frequency));
  std::vector<double> out(support + 1);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = toneburst_value(spec, static_cast<double>(n) / spec.sampling_rate);
  }
  return out;
}

double toneburst_peak(const ExcitationSpec& spec) {
  ExcitationSpec unit = spec;
  unit.amplitude_scale = 1.0;
  constexpr int kPointsPerCycle = 20000;
  const int points = kPointsPerCycle * unit.cycles;
  double peak = 0.0;
  for (int k = 0; k <= points; ++k) {
    const double t = unit.duration() * k / points;
    peak = std::max(peak, std::fabs(toneburst_value(unit, t)));
  }
  return peak;
}

double amplitude_scale_for_peak_to_peak(const ExcitationSpec& spec, double volts) {
  require(volts > 0.0, "peak-to-peak target must be positive");
  ExcitationSpec unit = spec;
  unit.amplitude_scale = 1.0;
  double hi = 0.0;
  double lo = 0.0;
  constexpr int kPointsPerCycle = 20000;
  const int points = kPointsPerCycle * unit.cycles;
  for (int k = 0; k <= points; ++k) {
    const double v = toneburst_value(unit, unit.duration() * k / points);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return volts / (hi - lo);
}

}  // namespace tgw
