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

#include "tgw/geometry.hpp"

#include <zlib.h>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "tgw/error.hpp"

namespace tgw {

void PipeSpec::validate() const {
  require(wall_thickness > 0.0, "pipe.wall_thickness must be positive");
  require(outer_diameter > 2.0 * wall_thickness,
          "pipe.outer_diameter must exceed twice the wall thickness");
  require(length > 0.0, "pipe.length must be positive");
}

double normalize_degrees(double theta_deg) {
  double t = std::fmod(theta_deg, 360.0);
  if (t < 0.0) t += 360.0;
  // fmod of a tiny negative value plus 360 can round up to 360 itself.
  if (t >= 360.0) t = 0.0;
  return t;
}

SurfacePoint::SurfacePoint(double z, double theta_deg)
    : z_(z), theta_(normalize_degrees(theta_deg)) {}

double angular_separation(double a_deg, double b_deg) {
  double d = std::fabs(normalize_degrees(a_deg) - normalize_degrees(b_deg));
  return d > 180.0 ? 360.0 - d : d;
}

double Ring::element_angle(int k) const { return 360.0 * k / count; }

void ArrayLayout::validate() const {
  require(tx.count > 0, "layout.tx.count must be positive");
  require(rx.count > 0, "layout.rx.count must be positive");
  require(rx.z > tx.z, "layout.rx.z must lie beyond layout.tx.z");
}

ArrayLayout ArrayLayout::simulation16() { return {{0.0, 16}, {0.4, 16}}; }

ArrayLayout ArrayLayout::bench8() { return {{0.0, 8}, {0.4, 8}}; }

double circumference(const PipeSpec& pipe) {
  return std::numbers::pi * pipe.outer_diameter;
}

double tx_distance(const SurfacePoint& pixel, const ArrayLayout& layout) {
  return std::fabs(pixel.z() - layout.tx.z);
}

double rx_distance(const SurfacePoint& pixel, const SurfacePoint& rx_element,
                   const PipeSpec& pipe) {
  const double dz = pixel.z() - rx_element.z();
  const double dy = angular_separation(pixel.theta(), rx_element.theta()) / 360.0 *
                    circumference(pipe);
  return std::hypot(dz, dy);
}

double surface_error(const SurfacePoint& a, const SurfacePoint& b, const PipeSpec& pipe) {
  return rx_distance(a, b, pipe);
}

namespace {

void put_le(std::array<unsigned char, 24>& buf, std::size_t offset, std::uint64_t v,
            int bytes) {
  for (int i = 0; i < bytes; ++i) buf[offset + i] = static_cast<unsigned char>(v >> (8 * i));
}

}  // namespace

std::uint32_t layout_digest(const ArrayLayout& layout) {
  std::array<unsigned char, 24> buf{};
  put_le(buf, 0, static_cast<std::uint64_t>(std::llround(layout.tx.z * 1e6)), 8);
  put_le(buf, 8, static_cast<std::uint32_t>(layout.tx.count), 4);
  put_le(buf, 12, static_cast<std::uint64_t>(std::llround(layout.rx.z * 1e6)), 8);
  put_le(buf, 20, static_cast<std::uint32_t>(layout.rx.count), 4);
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, buf.data(), static_cast<uInt>(buf.size()));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace tgw
