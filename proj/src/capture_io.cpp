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

#include "tgw/capture_io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>

#include "tgw/error.hpp"
#include "tgw/simulator.hpp"

namespace tgw {

namespace {

constexpr std::uint8_t kMagic[4] = {'T', 'G', 'W', 'C'};

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  const auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  }
}

template <typename T>
T get(std::span<const std::uint8_t> bytes, std::size_t offset) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u = static_cast<U>(u | static_cast<U>(static_cast<U>(bytes[offset + i]) << (8 * i)));
  }
  return static_cast<T>(u);
}

}  // namespace

double capture_full_scale(double volts) {
  return static_cast<double>(std::llround(volts * 1e6)) / 1e6;
}

std::vector<std::uint8_t> encode_capture(const WaveformSet& set) {
  if (!set.adc_bits) {
    fail(ErrorCode::InvalidArgument, "capture requires ADC-quantized samples (adc_bits unset)");
  }
  const int bits = *set.adc_bits;
  require(bits >= 2 && bits <= 16, "capture adc_bits must be in [2, 16]");
  require(set.num_receivers() >= 1 && set.num_receivers() <= 255,
          "capture channel count must be in [1, 255]");
  require(set.num_samples() >= 1 &&
              set.num_samples() <= std::numeric_limits<std::uint32_t>::max(),
          "capture samples per channel out of range");
  require(set.sampling_rate >= 1.0 && set.sampling_rate == std::floor(set.sampling_rate) &&
              set.sampling_rate <= std::numeric_limits<std::uint32_t>::max(),
          "capture sampling rate must be a whole number of Hz");
  const double micro = std::round(set.adc_full_scale * 1e6);
  require(micro >= 1.0 && micro <= std::numeric_limits<std::uint32_t>::max() &&
              capture_full_scale(set.adc_full_scale) == set.adc_full_scale,
          "capture full scale must be a whole number of microvolts");

  const double lsb = adc_lsb(bits, set.adc_full_scale);
  const long long lo = -(1LL << (bits - 1));
  const long long hi = (1LL << (bits - 1)) - 1;

  std::vector<std::uint8_t> out;
  out.reserve(kCaptureHeaderSize + 2 * set.channels.data().size());
  for (std::uint8_t b : kMagic) out.push_back(b);
  put<std::uint16_t>(out, kCaptureVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(set.num_receivers()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(bits | (static_cast<int>(set.label) << 7)));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(set.num_samples()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(set.sampling_rate));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(micro));
  put<std::uint32_t>(out, set.layout_digest);

  for (double v : set.channels.data()) {
    const double code = std::round(v / lsb);
    if (!(code >= static_cast<double>(lo) && code <= static_cast<double>(hi)) ||
        code * lsb != v) {
      fail(ErrorCode::InvalidArgument,
           "sample " + std::to_string(v) + " V is not a " + std::to_string(bits) +
               "-bit ADC level");
    }
    put<std::int16_t>(out, static_cast<std::int16_t>(code));
  }
  return out;
}

CaptureHeader decode_capture_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    fail(ErrorCode::NotCaptureFile, "not a capture file (bad magic)");
  }
  if (bytes.size() < 6) fail(ErrorCode::CorruptCapture, "corrupt capture: truncated header");
  CaptureHeader h;
  h.format_version = get<std::uint16_t>(bytes, 4);
  if (h.format_version != kCaptureVersion) {
    fail(ErrorCode::UnsupportedVersion,
         "unsupported version " + std::to_string(h.format_version) + " (expected " +
             std::to_string(kCaptureVersion) + ")");
  }
  if (bytes.size() < kCaptureHeaderSize) {
    fail(ErrorCode::CorruptCapture, "corrupt capture: truncated header");
  }
  h.channel_count = bytes[6];
  h.adc_bits = static_cast<std::uint8_t>(bytes[7] & 0x7f);
  h.label = (bytes[7] & 0x80) ? Label::Damage : Label::Baseline;
  h.samples_per_channel = get<std::uint32_t>(bytes, 8);
  h.sampling_rate = get<std::uint32_t>(bytes, 12);
  h.full_scale_microvolts = get<std::uint32_t>(bytes, 16);
  h.layout_digest = get<std::uint32_t>(bytes, 20);

  if (h.channel_count < 1) fail(ErrorCode::CorruptCapture, "corrupt capture: zero channels");
  if (h.samples_per_channel < 1) fail(ErrorCode::CorruptCapture, "corrupt capture: zero samples");
  if (h.adc_bits < 2 || h.adc_bits > 16) {
    fail(ErrorCode::CorruptCapture,
         "corrupt capture: adc_bits " + std::to_string(h.adc_bits) + " out of range");
  }
  if (h.sampling_rate < 1) fail(ErrorCode::CorruptCapture, "corrupt capture: zero sampling rate");
  if (h.full_scale_microvolts < 1) {
    fail(ErrorCode::CorruptCapture, "corrupt capture: zero full scale");
  }
  return h;
}

WaveformSet decode_capture(std::span<const std::uint8_t> bytes) {
  const CaptureHeader h = decode_capture_header(bytes);
  const std::uint64_t expected =
      kCaptureHeaderSize + 2ULL * h.channel_count * static_cast<std::uint64_t>(h.samples_per_channel);
  if (bytes.size() != expected) {
    fail(ErrorCode::CorruptCapture, "corrupt capture: payload is " +
                                        std::to_string(bytes.size() - kCaptureHeaderSize) +
                                        " bytes, header declares " +
                                        std::to_string(expected - kCaptureHeaderSize));
  }

  WaveformSet set;
  set.channels = Matrix(h.channel_count, h.samples_per_channel);
  set.sampling_rate = static_cast<double>(h.sampling_rate);
  set.adc_bits = h.adc_bits;
  set.adc_full_scale = static_cast<double>(h.full_scale_microvolts) / 1e6;
  set.label = h.label;
  set.layout_digest = h.layout_digest;

  const double lsb = adc_lsb(h.adc_bits, set.adc_full_scale);
  const long long lo = -(1LL << (h.adc_bits - 1));
  const long long hi = (1LL << (h.adc_bits - 1)) - 1;
  auto samples = set.channels.data();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto code = get<std::int16_t>(bytes, kCaptureHeaderSize + 2 * k);
    if (code < lo || code > hi) {
      fail(ErrorCode::CorruptCapture, "corrupt capture: code " + std::to_string(code) +
                                          " outside " + std::to_string(h.adc_bits) +
                                          "-bit range");
    }
    samples[k] = static_cast<double>(code) * lsb;
  }
  return set;
}

std::size_t write_capture(const WaveformSet& set, std::ostream& out) {
  const auto bytes = encode_capture(set);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::Io, "failed writing capture stream");
  return bytes.size();
}

std::size_t write_capture(const WaveformSet& set, const std::filesystem::path& path) {
  const auto bytes = encode_capture(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
  return bytes.size();
}

WaveformSet parse_capture(std::istream& in) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return decode_capture(bytes);
}

WaveformSet parse_capture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return parse_capture(in);
}

}  // namespace tgw
