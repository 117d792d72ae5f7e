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

#include "tgw/di_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "tgw/error.hpp"

namespace tgw {

void GridSpec::validate() const {
  require(rows >= 2, "grid.rows must be at least 2");
  require(cols >= 2, "grid.cols must be at least 2");
}

double GridSpec::row_theta(std::size_t i) const {
  return (static_cast<double>(i) + 0.5) * (360.0 / static_cast<double>(rows));
}

double GridSpec::col_z(std::size_t j, const ArrayLayout& layout) const {
  return layout.tx.z +
         (static_cast<double>(j) + 0.5) * (layout.separation() / static_cast<double>(cols));
}

void DIParams::validate() const {
  require(group_velocity > 0.0, "di.group_velocity must be positive");
  require(window_length_samples >= 1, "di.window_samples must be at least 1");
  require(sampling_rate > 0.0, "di.sampling_rate must be positive");
}

SurfacePoint DIMap::pixel_center(std::size_t i, std::size_t j) const {
  const double z = z_start + (static_cast<double>(j) + 0.5) *
                                 ((z_end - z_start) / static_cast<double>(grid.cols));
  return {z, grid.row_theta(i)};
}

void LocalizationReport::set_truth(const SurfacePoint& point, const PipeSpec& pipe) {
  truth = point;
  if (estimated) {
    error = surface_error(*estimated, point, pipe);
  } else {
    error.reset();
  }
}

std::size_t window_start(double time_of_flight, double sampling_rate) {
  const double sn = std::floor(time_of_flight * sampling_rate + 0.5);
  return sn <= 0.0 ? 0 : static_cast<std::size_t>(sn);
}

std::size_t duration_preserving_window(std::size_t window_samples, double reference_rate,
                                       double effective_rate) {
  require(reference_rate > 0.0 && effective_rate > 0.0, "sampling rates must be positive");
  const double w = std::round(static_cast<double>(window_samples) * effective_rate /
                              reference_rate);
  return std::max<std::size_t>(1, static_cast<std::size_t>(w));
}

namespace {

std::string describe_rate(double hz) {
  return std::to_string(static_cast<long long>(std::llround(hz))) + " Hz";
}

void check_inputs(const WaveformSet& baseline, const WaveformSet& damage,
                  const ArrayLayout& layout, const PipeSpec& pipe, const GridSpec& grid,
                  const DIParams& params) {
  pipe.validate();
  layout.validate();
  grid.validate();
  params.validate();
  if (baseline.num_receivers() != damage.num_receivers() ||
      baseline.num_samples() != damage.num_samples()) {
    fail(ErrorCode::Incompatible,
         "baseline is " + std::to_string(baseline.num_receivers()) + "x" +
             std::to_string(baseline.num_samples()) + " but damage is " +
             std::to_string(damage.num_receivers()) + "x" +
             std::to_string(damage.num_samples()) + " (channels x samples)");
  }
  if (baseline.sampling_rate != damage.sampling_rate) {
    fail(ErrorCode::Incompatible, "baseline sampled at " +
                                      describe_rate(baseline.sampling_rate) +
                                      " but damage at " + describe_rate(damage.sampling_rate));
  }
  if (baseline.num_receivers() != static_cast<std::size_t>(layout.rx.count)) {
    fail(ErrorCode::Incompatible,
         "layout has " + std::to_string(layout.rx.count) + " receivers but data has " +
             std::to_string(baseline.num_receivers()) + " channels");
  }
  if (params.sampling_rate != baseline.sampling_rate) {
    fail(ErrorCode::Incompatible, "di.sampling_rate is " + describe_rate(params.sampling_rate) +
                                      " but data is sampled at " +
                                      describe_rate(baseline.sampling_rate));
  }
  require(baseline.num_samples() >= 1, "waveforms must contain at least one sample");
}

// Accumulates, for every column of a row, the energy of the receiver-summed
// window over samples [s_begin, s_end), which must be a multiple of kLanes
// long. `src` holds `receivers` start pointers per column. Within each lane
// the receiver sum always runs in the order of `src` and blocks are visited
// in increasing s, so the result does not depend on how the window is tiled.
constexpr std::size_t kLanes = 8;

// Wider vectors where the CPU has them. The clones perform the same IEEE
// additions and multiplications in the same order, so they agree bit for bit.
#if defined(__x86_64__) && defined(__GNUC__) && !defined(__clang__)
__attribute__((target_clones("avx2", "default")))
#endif
void accumulate_lanes(const double* const* src, std::size_t cols, std::size_t receivers,
                      std::size_t s_begin, std::size_t s_end, double* lane_energy) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* const* col_src = src + j * receivers;
    double* energy = lane_energy + j * kLanes;
    for (std::size_t s = s_begin; s < s_end; s += kLanes) {
      double sum[kLanes];
      for (std::size_t t = 0; t < kLanes; ++t) sum[t] = col_src[0][s + t];
      for (std::size_t k = 1; k < receivers; ++k) {
        const double* p = col_src[k] + s;
        for (std::size_t t = 0; t < kLanes; ++t) sum[t] += p[t];
      }
      for (std::size_t t = 0; t < kLanes; ++t) energy[t] += sum[t] * sum[t];
    }
  }
}

// Energy of the samples [s_begin, window) left over after the lane blocks.
double tail_energy(const double* const* src, std::size_t receivers, std::size_t s_begin,
                   std::size_t window) {
  double tail = 0.0;
  for (std::size_t s = s_begin; s < window; ++s) {
    double sum = src[0][s];
    for (std::size_t k = 1; k < receivers; ++k) sum += src[k][s];
    tail += sum * sum;
  }
  return tail;
}

DIMap empty_map(const WaveformSet& baseline, const WaveformSet& damage,
                const ArrayLayout& layout, const GridSpec& grid, const DIParams& params) {
  DIMap map;
  map.values = Matrix(grid.rows, grid.cols);
  map.grid = grid;
  map.z_start = layout.tx.z;
  map.z_end = layout.rx.z;
  map.window_length_samples = params.window_length_samples;
  map.group_velocity = params.group_velocity;
  map.baseline_id = baseline.label == Label::Baseline ? "baseline" : "damage";
  map.damage_id = damage.label == Label::Baseline ? "baseline" : "damage";
  return map;
}

}  // namespace

DIMap reference_di_map(const WaveformSet& baseline, const WaveformSet& damage,
                       const ArrayLayout& layout, const PipeSpec& pipe, const GridSpec& grid,
                       const DIParams& params) {
  check_inputs(baseline, damage, layout, pipe, grid, params);
  DIMap map = empty_map(baseline, damage, layout, grid, params);

  const std::size_t window = params.window_length_samples;
  const std::size_t samples = baseline.num_samples();
  const int receivers = layout.rx.count;

  for (std::size_t i = 0; i < grid.rows; ++i) {
    for (std::size_t j = 0; j < grid.cols; ++j) {
      const SurfacePoint pixel = grid.pixel_center(i, j, layout);
      std::vector<double> window_bs(window, 0.0);
      std::vector<double> window_dm(window, 0.0);
      for (int m = 0; m < receivers; ++m) {
        const auto t_bs = baseline.channel(m);
        const auto t_dm = damage.channel(m);
        const double d_tx = tx_distance(pixel, layout);
        const double d_rx = rx_distance(pixel, layout.rx.element(m), pipe);
        const double tof = (d_tx + d_rx) / params.group_velocity;
        const std::size_t sn = window_start(tof, params.sampling_rate);
        for (std::size_t s = 0; s < window; ++s) {
          if (sn + s < samples) {
            window_bs[s] += t_bs[sn + s];
            window_dm[s] += t_dm[sn + s];
          }
        }
      }
      double di = 0.0;
      for (std::size_t s = 0; s < window; ++s) {
        const double delta = window_bs[s] - window_dm[s];
        di += delta * delta;
      }
      map.values(i, j) = di;
    }
  }
  return map;
}

DIMap compute_di_map(const WaveformSet& baseline, const WaveformSet& damage,
                     const ArrayLayout& layout, const PipeSpec& pipe, const GridSpec& grid,
                     const DIParams& params) {
  check_inputs(baseline, damage, layout, pipe, grid, params);
  DIMap map = empty_map(baseline, damage, layout, grid, params);

  const std::size_t window = params.window_length_samples;
  const std::size_t samples = baseline.num_samples();
  const std::size_t receivers = static_cast<std::size_t>(layout.rx.count);
  const std::size_t stride = samples + window;

  // Baseline-minus-damage per receiver, followed by `window` zeros so any
  // start index clamped to `samples` reads a full window of padding.
  std::vector<double> diff(receivers * stride, 0.0);
  for (std::size_t m = 0; m < receivers; ++m) {
    const auto b = baseline.channel(m);
    const auto d = damage.channel(m);
    double* out = diff.data() + m * stride;
    for (std::size_t n = 0; n < samples; ++n) out[n] = b[n] - d[n];
  }

  std::vector<double> col_dtx(grid.cols);
  for (std::size_t j = 0; j < grid.cols; ++j) {
    col_dtx[j] = tx_distance(grid.pixel_center(0, j, layout), layout);
  }

  constexpr std::size_t kTile = 128;  // window samples per tile, a multiple of kLanes
  const std::size_t blocked = window - window % kLanes;

  auto do_rows = [&](std::size_t row_begin, std::size_t row_end) {
    std::vector<const double*> starts(grid.cols * receivers);
    std::vector<double> lane_energy(grid.cols * kLanes);
    for (std::size_t i = row_begin; i < row_end; ++i) {
      // Receivers are accumulated starting from the one angularly nearest the
      // pixel row, so rotating the data by one element spacing reproduces
      // the same floating-point sums on the shifted rows.
      const std::size_t first =
          ((2 * i + 1) * receivers / (2 * grid.rows)) % receivers;
      for (std::size_t k = 0; k < receivers; ++k) {
        const std::size_t m = (first + k) % receivers;
        const SurfacePoint rx = layout.rx.element(static_cast<int>(m));
        const double* base = diff.data() + m * stride;
        for (std::size_t j = 0; j < grid.cols; ++j) {
          const SurfacePoint pixel = grid.pixel_center(i, j, layout);
          const double tof = (col_dtx[j] + rx_distance(pixel, rx, pipe)) / params.group_velocity;
          const std::size_t sn = std::min(window_start(tof, params.sampling_rate), samples);
          starts[j * receivers + k] = base + sn;
        }
      }
      // Tile the window so neighbouring columns, whose windows nearly
      // coincide, reuse the same cached stretch of every receiver trace.
      std::fill(lane_energy.begin(), lane_energy.end(), 0.0);
      for (std::size_t s0 = 0; s0 < blocked; s0 += kTile) {
        accumulate_lanes(starts.data(), grid.cols, receivers, s0, std::min(s0 + kTile, blocked),
                         lane_energy.data());
      }
      for (std::size_t j = 0; j < grid.cols; ++j) {
        double di = tail_energy(starts.data() + j * receivers, receivers, blocked, window);
        for (std::size_t t = 0; t < kLanes; ++t) di += lane_energy[j * kLanes + t];
        map.values(i, j) = di;
      }
    }
  };

  const std::size_t threads =
      std::clamp<std::size_t>(params.threads == 0 ? 1 : params.threads, 1, grid.rows);
  if (threads == 1) {
    do_rows(0, grid.rows);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (grid.rows + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(grid.rows, lo + chunk);
      if (lo < hi) pool.emplace_back(do_rows, lo, hi);
    }
  }
  return map;
}

LocalizationReport localize(const DIMap& map) {
  require(!map.values.empty(), "cannot localize on an empty map");
  LocalizationReport report;
  double best = 0.0;
  for (std::size_t i = 0; i < map.values.rows(); ++i) {
    for (std::size_t j = 0; j < map.values.cols(); ++j) {
      const double v = map.values(i, j);
      if (v > best) {
        best = v;
        report.row = i;
        report.col = j;
      }
    }
  }
  report.peak_value = best;
  report.damage_detected = best > 0.0;
  if (report.damage_detected) report.estimated = map.pixel_center(report.row, report.col);
  return report;
}

DIMap normalize(const DIMap& map) {
  DIMap out = map;
  double peak = 0.0;
  for (double v : map.values.data()) peak = std::max(peak, v);
  if (peak == 0.0) return out;
  for (double& v : out.values.data()) v /= peak;
  return out;
}

}  // namespace tgw
