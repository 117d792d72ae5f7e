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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tgw {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Label : std::uint8_t { Baseline = 0, Damage = 1 };

/// One acquisition: a voltage trace per receiver, sample 0 at excitation onset.
struct WaveformSet {
  Matrix channels;               // [receivers x samples], volts
  double sampling_rate = 0.0;    // Hz, effective (after any decimation)
  std::optional<int> adc_bits;   // set when samples sit on an ADC grid
  double adc_full_scale = 0.0;   // volts, peak to peak span of the converter
  Label label = Label::Baseline;
  std::uint32_t layout_digest = 0;

  std::size_t num_receivers() const noexcept { return channels.rows(); }
  std::size_t num_samples() const noexcept { return channels.cols(); }
  std::span<const double> channel(std::size_t m) const { return channels.row(m); }

  /// Copy keeping only the first `samples` samples of every channel.
  WaveformSet truncated(std::size_t samples) const;
  /// Copy with every sample multiplied by k. The result is no longer tied to
  /// an ADC grid.
  WaveformSet scaled(double k) const;

  bool operator==(const WaveformSet&) const = default;
};

}  // namespace tgw
