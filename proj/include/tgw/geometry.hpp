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

#include <cstdint>
#include <optional>

namespace tgw {

/// Hollow cylinder. Lengths in meters.
struct PipeSpec {
  double outer_diameter = 0.1146;
  double wall_thickness = 0.004;
  double length = 1.0;
  // Material metadata; carried through configuration, unused by the imaging.
  std::optional<double> density = 7850.0;            // kg/m^3
  std::optional<double> youngs_modulus = 200e9;      // Pa
  std::optional<double> poisson_ratio = 0.3;

  void validate() const;
};

/// A point on the outer pipe surface: axial position z (m) measured in the
/// same frame as the transducer rings, and angle theta in degrees, always
/// normalized into [0, 360).
class SurfacePoint {
 public:
  SurfacePoint() = default;
  SurfacePoint(double z, double theta_deg);

  double z() const noexcept { return z_; }
  double theta() const noexcept { return theta_; }

  SurfacePoint rotated(double delta_deg) const { return {z_, theta_ + delta_deg}; }

 private:
  double z_ = 0.0;
  double theta_ = 0.0;
};

/// Normalizes an angle in degrees into [0, 360).
double normalize_degrees(double theta_deg);

/// Smallest angle between two directions, in [0, 180] degrees.
double angular_separation(double a_deg, double b_deg);

/// Ring of uniformly spaced transducers; element k sits at 360*k/count degrees.
struct Ring {
  double z = 0.0;
  int count = 16;

  double element_angle(int k) const;
  SurfacePoint element(int k) const { return {z, element_angle(k)}; }
};

struct ArrayLayout {
  Ring tx{0.0, 16};
  Ring rx{0.4, 16};

  void validate() const;
  double separation() const noexcept { return rx.z - tx.z; }

  /// 16 + 16 elements, rings 400 mm apart (simulation layout).
  static ArrayLayout simulation16();
  /// 8 + 8 elements, rings 400 mm apart (bench layout).
  static ArrayLayout bench8();
};

double circumference(const PipeSpec& pipe);

/// Axial distance from the transmitter ring. All transmitters fire together,
/// so the ring acts as a plane source and theta plays no part.
double tx_distance(const SurfacePoint& pixel, const ArrayLayout& layout);

/// Shortest path on the unrolled outer surface between a pixel and a
/// receiver, taking the shorter way around the circumference.
double rx_distance(const SurfacePoint& pixel, const SurfacePoint& rx_element,
                   const PipeSpec& pipe);

/// Same wrap-aware surface metric, used to score localization estimates.
double surface_error(const SurfacePoint& a, const SurfacePoint& b, const PipeSpec& pipe);

/// CRC-32 over a canonical encoding of the ring positions (micrometers) and
/// element counts. Stored in capture headers to tie data to a layout.
std::uint32_t layout_digest(const ArrayLayout& layout);

}  // namespace tgw
