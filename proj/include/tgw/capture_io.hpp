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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tgw/waveform.hpp"

namespace tgw {

/// Capture file layout, all fields little-endian:
///
///   offset  size  field
///        0     4  magic "TGWC"
///        4     2  format_version (currently 1)
///        6     1  channel_count
///        7     1  bits 0-6: adc_bits, bit 7: label (0 baseline, 1 damage)
///        8     4  samples_per_channel
///       12     4  sampling_rate, Hz (effective, after decimation)
///       16     4  full_scale, microvolts
///       20     4  layout digest (CRC-32)
///       24     .  channel-major int16 ADC codes
inline constexpr std::size_t kCaptureHeaderSize = 24;
inline constexpr std::uint16_t kCaptureVersion = 1;

struct CaptureHeader {
  std::uint16_t format_version = kCaptureVersion;
  std::uint8_t channel_count = 0;
  std::uint8_t adc_bits = 0;
  Label label = Label::Baseline;
  std::uint32_t samples_per_channel = 0;
  std::uint32_t sampling_rate = 0;
  std::uint32_t full_scale_microvolts = 0;
  std::uint32_t layout_digest = 0;
};

/// Full scale rounded to the microvolt grid the capture header can carry.
double capture_full_scale(double volts);

/// Serializes a set whose samples lie on its ADC grid. Throws
/// InvalidArgument when a sample, rate or full scale cannot be represented.
std::vector<std::uint8_t> encode_capture(const WaveformSet& set);

/// Exact inverse of encode_capture. Throws NotCaptureFile, UnsupportedVersion
/// or CorruptCapture; never reads outside `bytes`.
WaveformSet decode_capture(std::span<const std::uint8_t> bytes);

CaptureHeader decode_capture_header(std::span<const std::uint8_t> bytes);

std::size_t write_capture(const WaveformSet& set, std::ostream& out);
std::size_t write_capture(const WaveformSet& set, const std::filesystem::path& path);
WaveformSet parse_capture(std::istream& in);
WaveformSet parse_capture(const std::filesystem::path& path);

}  // namespace tgw
