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

#include <cstddef>
#include <optional>
#include <string>

#include "tgw/geometry.hpp"
#include "tgw/waveform.hpp"

namespace tgw {

/// Pixel grid over the unrolled segment between the rings. Rows run around
/// the circumference, columns along the axis. Pixel (i, j) is centered at
///   theta = (i + 0.5) * 360 / rows,   z = tx.z + (j + 0.5) * separation / cols.
struct GridSpec {
  std::size_t rows = 360;
  std::size_t cols = 400;

  void validate() const;
  double row_theta(std::size_t i) const;
  double col_z(std::size_t j, const ArrayLayout& layout) const;
  SurfacePoint pixel_center(std::size_t i, std::size_t j, const ArrayLayout& layout) const {
    return {col_z(j, layout), row_theta(i)};
  }
  double axial_pitch(const ArrayLayout& layout) const { return layout.separation() / cols; }
  double circumferential_pitch(const PipeSpec& pipe) const { return circumference(pipe) / rows; }
};

struct DIParams {
  double group_velocity = 3130.0;           // m/s
  std::size_t window_length_samples = 600;  // at the input sampling rate
  double sampling_rate = 10e6;              // Hz, effective rate of the inputs
  unsigned threads = 1;                     // compute_di_map only

  void validate() const;
};

/// Damage-index image; every value is a sum of squares.
struct DIMap {
  Matrix values;  // [rows x cols]
  GridSpec grid;
  double z_start = 0.0;  // transmitter ring plane
  double z_end = 0.0;    // receiver ring plane
  std::size_t window_length_samples = 0;
  double group_velocity = 0.0;
  std::string baseline_id;
  std::string damage_id;

  SurfacePoint pixel_center(std::size_t i, std::size_t j) const;
};

struct LocalizationReport {
  bool damage_detected = false;
  std::size_t row = 0;
  std::size_t col = 0;
  std::optional<SurfacePoint> estimated;
  double peak_value = 0.0;
  std::optional<SurfacePoint> truth;
  std::optional<double> error;  // meters, present iff truth is

  /// Attaches ground truth and the surface error of the estimate.
  void set_truth(const SurfacePoint& point, const PipeSpec& pipe);
};

/// Optimized damage-index computation. Per pixel and receiver m the window
/// start is sn = round((d_tx + d_rx) / C * fs); windows are summed across
/// receivers for baseline and damage separately, and the pixel value is the
/// sum over the window of the squared difference. Samples past the end of a
/// trace read as zero. Output does not depend on `params.threads`.
DIMap compute_di_map(const WaveformSet& baseline, const WaveformSet& damage,
                     const ArrayLayout& layout, const PipeSpec& pipe, const GridSpec& grid,
                     const DIParams& params);

/// Literal triple loop over rows, columns and receivers. Slow; kept as the
/// equivalence oracle for compute_di_map.
DIMap reference_di_map(const WaveformSet& baseline, const WaveformSet& damage,
                       const ArrayLayout& layout, const PipeSpec& pipe, const GridSpec& grid,
                       const DIParams& params);

/// Window start index for a time of flight (round half up).
std::size_t window_start(double time_of_flight, double sampling_rate);

/// Argmax pixel; ties go to the lowest row, then the lowest column. An
/// all-zero map reports no damage.
LocalizationReport localize(const DIMap& map);

/// Map divided by its maximum; an all-zero map is returned unchanged.
DIMap normalize(const DIMap& map);

/// Window length that keeps the same duration at a different sampling rate.
std::size_t duration_preserving_window(std::size_t window_samples, double reference_rate,
                                       double effective_rate);

}  // namespace tgw
