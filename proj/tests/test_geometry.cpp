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

#include "doctest.h"
#include "test_support.hpp"
#include "tgw/error.hpp"
#include "tgw/geometry.hpp"

using namespace tgw;
using tgw::testing::image_distance;
using tgw::testing::Rng;

namespace {
const PipeSpec kPipe{};  // 114.6 mm OD, 4 mm wall, 1000 mm
}

TEST_CASE("circumference uses the outer diameter") {
  CHECK(circumference(kPipe) * 1e3 == doctest::Approx(360.0265).epsilon(1e-6));
  PipeSpec unit;
  unit.outer_diameter = 1.0 / std::numbers::pi;
  unit.wall_thickness = 0.01;
  CHECK(circumference(unit) == doctest::Approx(1.0).epsilon(1e-15));
  PipeSpec doubled = kPipe;
  doubled.outer_diameter = 0.2292;
  CHECK(circumference(doubled) == doctest::Approx(2.0 * circumference(kPipe)).epsilon(1e-15));
  CHECK(circumference(doubled) * 1e3 == doctest::Approx(720.053).epsilon(1e-6));
}

TEST_CASE("pipe validation") {
  PipeSpec p;
  CHECK_NOTHROW(p.validate());
  p.wall_thickness = 0.06;
  CHECK_THROWS_AS(p.validate(), Error);
  p = PipeSpec{};
  p.length = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = PipeSpec{};
  p.wall_thickness = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("surface points normalize theta into [0, 360)") {
  CHECK(SurfacePoint(0.1, 360.0).theta() == 0.0);
  CHECK(SurfacePoint(0.1, -90.0).theta() == 270.0);
  CHECK(SurfacePoint(0.1, 725.5).theta() == 5.5);
  CHECK(SurfacePoint(0.1, -1e-20).theta() < 360.0);
  CHECK(SurfacePoint(0.1, -1e-20).theta() >= 0.0);
}

TEST_CASE("layout presets and validation") {
  const auto sim = ArrayLayout::simulation16();
  CHECK(sim.tx.count == 16);
  CHECK(sim.rx.count == 16);
  CHECK(sim.separation() == doctest::Approx(0.4));
  CHECK(ArrayLayout::bench8().rx.count == 8);
  CHECK(sim.rx.element_angle(1) == 22.5);
  CHECK(sim.rx.element_angle(15) == 337.5);

  ArrayLayout bad = sim;
  bad.rx.z = -0.1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = sim;
  bad.rx.count = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("tx distance is axial only") {
  const auto layout = ArrayLayout::simulation16();
  CHECK(tx_distance({0.2, 90.0}, layout) == doctest::Approx(0.2));
  CHECK(tx_distance({0.2, 270.0}, layout) == doctest::Approx(0.2));
  CHECK(tx_distance({0.0, 123.0}, layout) == 0.0);
}

TEST_CASE("rx distance examples") {
  CHECK(rx_distance({0.2, 90.0}, {0.4, 90.0}, kPipe) == doctest::Approx(0.2));
  // 20 degrees across the seam, checked against the image oracle.
  const double wrap = rx_distance({0.4, 350.0}, {0.4, 10.0}, kPipe);
  CHECK(wrap * 1e3 == doctest::Approx(20.0015).epsilon(1e-5));
  CHECK(wrap == doctest::Approx(image_distance(0.4, 350.0, 0.4, 10.0, 0.1146)).epsilon(1e-14));
  const double diag = rx_distance({0.2, 90.0}, {0.4, 180.0}, kPipe);
  CHECK(diag == doctest::Approx(0.21931984260096754).epsilon(1e-14));
}

TEST_CASE("surface error examples") {
  const SurfacePoint a{0.2, 90.0};
  CHECK(surface_error(a, a, kPipe) == 0.0);
  CHECK(surface_error(a, {0.223, 90.0}, kPipe) * 1e3 == doctest::Approx(23.0));
  CHECK(surface_error({0.3, 0.0}, {0.3, 360.0}, kPipe) == 0.0);
}

TEST_CASE("surface metric properties on random points") {
  Rng rng(7);
  const double circ = circumference(kPipe);
  for (int trial = 0; trial < 2000; ++trial) {
    const SurfacePoint a{rng.uniform(0, 0.4), rng.uniform(-720, 720)};
    const SurfacePoint b{rng.uniform(0, 0.4), rng.uniform(0, 360)};
    const SurfacePoint c{rng.uniform(0, 0.4), rng.uniform(0, 360)};
    const double ab = surface_error(a, b, kPipe);
    CHECK(ab == surface_error(b, a, kPipe));
    CHECK(ab >= 0.0);
    CHECK(ab <= surface_error(a, c, kPipe) + surface_error(c, b, kPipe) + 1e-12);
    CHECK(ab == doctest::Approx(image_distance(a.z(), a.theta(), b.z(), b.theta(), 0.1146))
                    .epsilon(1e-12));
    const double dz = a.z() - b.z();
    CHECK(ab <= std::hypot(dz, circ / 2.0) + 1e-15);

    const double shift = rng.uniform(-400, 400);
    CHECK(tx_distance(a.rotated(shift), ArrayLayout::simulation16()) ==
          tx_distance(a, ArrayLayout::simulation16()));
    CHECK(rx_distance(a.rotated(shift), b.rotated(shift), kPipe) ==
          doctest::Approx(ab).epsilon(1e-9));
  }
}

TEST_CASE("rotation by whole element spacings is exact") {
  // Angles on the 22.5 degree lattice are exact binary fractions, which the
  // rotation-equivariance checks elsewhere rely on.
  const auto layout = ArrayLayout::simulation16();
  for (int m = 0; m < 16; ++m) {
    const SurfacePoint rx = layout.rx.element(m);
    const SurfacePoint rx_next = layout.rx.element((m + 1) % 16);
    for (double theta : {0.0, 90.0, 157.5, 315.0, 5.625}) {
      const SurfacePoint p{0.2, theta};
      CHECK(rx_distance(p, rx, kPipe) == rx_distance(p.rotated(22.5), rx_next, kPipe));
    }
  }
}

TEST_CASE("layout digest distinguishes layouts") {
  const auto a = ArrayLayout::simulation16();
  const auto b = ArrayLayout::bench8();
  CHECK(layout_digest(a) == layout_digest(ArrayLayout::simulation16()));
  CHECK(layout_digest(a) != layout_digest(b));
  ArrayLayout moved = a;
  moved.rx.z = 0.401;
  CHECK(layout_digest(a) != layout_digest(moved));
}
