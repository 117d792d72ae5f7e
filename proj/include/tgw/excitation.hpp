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

#include <vector>

namespace tgw {

/// Hanning-windowed sinusoidal tone burst:
///
///   H(t) = scale * (cycles/2) * (1 - cos(2 pi f t / cycles)) * sin(2 pi f t)
///
/// on 0 <= t <= cycles/f and zero elsewhere. With cycles = 5 the prefactor is
/// the familiar 2.5 and the peak-to-peak swing is about 9.76 * scale.
struct ExcitationSpec {
  double center_frequency = 85e3;  // Hz
  int cycles = 5;
  double amplitude_scale = 1.0;
  double sampling_rate = 10e6;  // Hz

  void validate() const;
  double duration() const { return cycles / center_frequency; }
};

/// Continuous-time burst value; zero outside [0, duration].
double toneburst_value(const ExcitationSpec& spec, double t);

/// Sampled burst, t_n = n / sampling_rate, length ceil(duration * fs) + 1.
std::vector<double> hanning_toneburst(const ExcitationSpec& spec);

/// Largest |H(t)| at amplitude_scale = 1, found by dense evaluation.
double toneburst_peak(const ExcitationSpec& spec);

/// amplitude_scale that makes the burst swing `volts` peak to peak.
double amplitude_scale_for_peak_to_peak(const ExcitationSpec& spec, double volts);

}  // namespace tgw
