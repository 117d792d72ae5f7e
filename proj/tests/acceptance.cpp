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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Scenario constants live next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "tgw/capture_io.hpp"
#include "tgw/di_engine.hpp"
#include "tgw/error.hpp"
#include "tgw/simulator.hpp"

using namespace tgw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

// 16 + 16 rings, 85 kHz, noise and ADC off, reflective ends.
SimulationSetup notch_setup() {
  SimulationSetup s;
  s.layout = ArrayLayout::simulation16();
  s.propagation.boundary = BoundaryMode::Reflective;
  s.propagation.mode_leakage_snr_db.reset();
  s.acquisition.adc_bits.reset();
  return s;
}

DefectSpec notch(double z, double theta, double scatter) {
  DefectSpec d;
  d.kind = DefectKind::Notch;
  d.position = SurfacePoint(z, theta);
  d.scatter_amplitude = scatter;
  return d;
}

double locate_error(const WaveformSet& base, const WaveformSet& dmg, const SimulationSetup& s,
                    const GridSpec& grid, const DIParams& params, const SurfacePoint& truth,
                    LocalizationReport* out = nullptr) {
  const auto map = compute_di_map(base, dmg, s.layout, s.pipe, grid, params);
  auto report = localize(map);
  report.set_truth(truth, s.pipe);
  if (out) *out = report;
  return report.error ? *report.error : 1e9;
}

const std::vector<double> kScatterSweep{0.01, 0.05, 0.1, 0.3};
const std::vector<SurfacePoint> kNotchPositions{
    {0.1, 90.0}, {0.2, 90.0}, {0.3, 90.0}, {0.2, 0.0}, {0.2, 157.5}, {0.2, 315.0}};

Outcome sweep(const SimulationSetup& s, std::size_t truncate_to, const char* label) {
  const GridSpec grid{360, 400};
  const auto start = Clock::now();
  auto base = simulate(s, std::nullopt, 1);
  if (truncate_to) base = base.truncated(truncate_to);
  DIParams params;
  params.group_velocity = s.propagation.group_velocity;
  params.sampling_rate = base.sampling_rate;
  double worst = 0.0;
  int cases = 0;
  for (double a : kScatterSweep) {
    for (const auto& p : kNotchPositions) {
      auto dmg = simulate(s, notch(p.z(), p.theta(), a), 2);
      if (truncate_to) dmg = dmg.truncated(truncate_to);
      worst = std::max(worst, locate_error(base, dmg, s, grid, params, p));
      ++cases;
    }
  }
  const double t = seconds_since(start);
  Outcome o;
  o.pass = worst <= 0.025 && t < 300.0;
  o.detail = std::to_string(cases) + " " + label + " cases at 360x400, worst error " +
             fmt("%.1f mm", worst * 1e3) + " (bound 25 mm), " + fmt("%.1f s", t);
  return o;
}

Outcome zero_identity() {
  const auto s = notch_setup();
  const auto base = simulate(s, std::nullopt, 1);
  const auto start = Clock::now();
  const auto map = compute_di_map(base, base, s.layout, s.pipe, GridSpec{36, 40}, DIParams{});
  const auto report = localize(map);
  const double t = seconds_since(start);
  const bool zero = std::all_of(map.values.data().begin(), map.values.data().end(),
                                [](double v) { return v == 0.0; });
  Outcome o;
  o.pass = zero && !report.damage_detected && t < 1.0;
  o.detail = std::string(zero ? "all 1440 pixels exactly 0" : "nonzero pixels") + ", " +
             (report.damage_detected ? "damage reported" : "no damage detected") + ", " +
             fmt("%.3f s", t);
  return o;
}

Outcome oracle_equivalence() {
  testing::Rng rng(20260101);
  const auto start = Clock::now();
  double worst = 0.0;
  const int instances = 120;
  for (int trial = 0; trial < instances; ++trial) {
    const auto receivers = static_cast<std::size_t>(rng.integer(2, 16));
    const auto samples = static_cast<std::size_t>(rng.integer(64, 6000));
    const double fs = rng.uniform(0.5e6, 10e6);
    PipeSpec pipe;
    pipe.outer_diameter = rng.uniform(0.03, 0.3);
    ArrayLayout layout{{rng.uniform(-0.1, 0.1), static_cast<int>(rng.integer(1, 16))},
                       {0.0, static_cast<int>(receivers)}};
    layout.rx.z = layout.tx.z + rng.uniform(0.05, 0.8);
    const GridSpec grid{static_cast<std::size_t>(rng.integer(2, 40)),
                        static_cast<std::size_t>(rng.integer(2, 40))};
    DIParams params;
    params.group_velocity = rng.uniform(2000.0, 4000.0);
    params.window_length_samples = static_cast<std::size_t>(rng.integer(1, 700));
    params.sampling_rate = fs;
    params.threads = static_cast<unsigned>(rng.integer(1, 4));
    WaveformSet b, d;
    b.channels = Matrix(receivers, samples);
    d.channels = Matrix(receivers, samples);
    b.sampling_rate = d.sampling_rate = fs;
    for (double& v : b.channels.data()) v = rng.normal(0.05);
    for (std::size_t k = 0; k < d.channels.data().size(); ++k) {
      d.channels.data()[k] = b.channels.data()[k] + rng.normal(0.01);
    }
    const auto fast = compute_di_map(b, d, layout, pipe, grid, params);
    const auto slow = reference_di_map(b, d, layout, pipe, grid, params);
    for (std::size_t k = 0; k < fast.values.data().size(); ++k) {
      const double x = fast.values.data()[k];
      const double y = slow.values.data()[k];
      const double scale = std::max(std::fabs(x), std::fabs(y));
      if (scale > 0.0) worst = std::max(worst, std::fabs(x - y) / scale);
    }
  }
  const double t = seconds_since(start);
  Outcome o;
  o.pass = worst <= 1e-12 && t < 60.0;
  o.detail = std::to_string(instances) + " random instances, worst relative difference " +
             fmt("%.2e", worst) + " (bound 1e-12), " + fmt("%.1f s", t);
  return o;
}

SimulationSetup added_mass_setup(int decimation) {
  SimulationSetup s;
  s.layout = ArrayLayout::bench8();
  s.excitation.center_frequency = 75e3;
  s.propagation.boundary = BoundaryMode::Reflective;
  s.propagation.mode_leakage_snr_db = 30.0;
  s.acquisition.adc_bits = 10;
  s.acquisition.adc_full_scale = 0.33;
  s.acquisition.decimation_factor = decimation;
  return s;
}

DefectSpec added_mass(double z) {
  DefectSpec d;
  d.kind = DefectKind::AddedMass;
  d.position = SurfacePoint(z, 90.0);
  d.transmission_loss = transmission_loss_for(82.5, 78.2);
  d.scatter_amplitude = 0.25;
  return d;
}

const GridSpec kMassGrid{90, 100};
const std::vector<double> kMassPositions{0.1, 0.2, 0.3};

std::vector<LocalizationReport> added_mass_reports(int decimation) {
  const auto s = added_mass_setup(decimation);
  const auto base = simulate(s, std::nullopt, 11);
  DIParams params;
  params.sampling_rate = base.sampling_rate;
  params.window_length_samples =
      duration_preserving_window(600, s.acquisition.sampling_rate, base.sampling_rate);
  std::vector<LocalizationReport> reports;
  for (double z : kMassPositions) {
    const auto dmg = simulate(s, added_mass(z), 12);
    LocalizationReport r;
    locate_error(base, dmg, s, kMassGrid, params, SurfacePoint(z, 90.0), &r);
    reports.push_back(r);
  }
  return reports;
}

Outcome added_mass_localization(const std::vector<LocalizationReport>& reports) {
  double worst = 0.0;
  bool ordered = true;
  std::string zs;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    worst = std::max(worst, reports[k].error.value_or(1e9));
    zs += (k ? "/" : "") + fmt("%.0f", reports[k].estimated ? reports[k].estimated->z() * 1e3 : -1);
    if (k && !(reports[k].estimated && reports[k - 1].estimated &&
               reports[k].estimated->z() > reports[k - 1].estimated->z())) {
      ordered = false;
    }
  }
  Outcome o;
  o.pass = worst <= 0.05 && ordered;
  o.detail = "8+8 rings, 75 kHz, loss 5.2%, scatter 0.25, 30 dB SNR; estimated z " + zs +
             " mm, worst error " + fmt("%.1f mm", worst * 1e3) + " (bound 50 mm), " +
             (ordered ? "strictly ordered" : "NOT ordered");
  return o;
}

Outcome decimation_robustness(const std::vector<LocalizationReport>& full,
                              const std::vector<LocalizationReport>& decimated) {
  long worst = 0;
  for (std::size_t k = 0; k < full.size(); ++k) {
    const long rows = static_cast<long>(kMassGrid.rows);
    long dr = std::labs(static_cast<long>(full[k].row) - static_cast<long>(decimated[k].row));
    dr = std::min(dr, rows - dr);
    const long dc = std::labs(static_cast<long>(full[k].col) - static_cast<long>(decimated[k].col));
    worst = std::max({worst, dr, dc});
  }
  Outcome o;
  o.pass = worst <= 2;
  o.detail = "10x decimation with 60-sample window; largest estimate shift " +
             std::to_string(worst) + " pixel pitches per axis (bound 2)";
  return o;
}

Outcome quantization_robustness() {
  auto s = notch_setup();
  s.acquisition.adc_bits = 10;
  s.acquisition.adc_full_scale = 4.0 * s.propagation.direct_amplitude;
  const auto base = simulate(s, std::nullopt, 1);
  DIParams params;
  double worst = 0.0;
  for (double a : kScatterSweep) {
    const SurfacePoint p(0.2, 90.0);
    const auto dmg = simulate(s, notch(p.z(), p.theta(), a), 2);
    worst = std::max(worst, locate_error(base, dmg, s, GridSpec{360, 400}, params, p));
  }
  Outcome o;
  o.pass = worst <= 0.025;
  o.detail = "200 mm / 90 deg notch, 10-bit ADC at 330 mV full scale, scatter " +
             std::string("0.01-0.3; worst error ") + fmt("%.1f mm", worst * 1e3) +
             " (bound 25 mm)";
  return o;
}

Outcome scaling_invariance() {
  const auto s = notch_setup();
  const auto base = simulate(s, std::nullopt, 1);
  const auto dmg = simulate(s, notch(0.2, 90.0, 0.1), 2);
  const GridSpec grid{90, 100};
  const auto ref = compute_di_map(base, dmg, s.layout, s.pipe, grid, DIParams{});
  const auto ref_peak = localize(ref);
  double worst = 0.0;
  bool same_argmax = true;
  for (double k : {0.5, 3.0, 100.0}) {
    const auto map =
        compute_di_map(base.scaled(k), dmg.scaled(k), s.layout, s.pipe, grid, DIParams{});
    for (std::size_t n = 0; n < map.values.data().size(); ++n) {
      const double expected = k * k * ref.values.data()[n];
      const double got = map.values.data()[n];
      const double scale = std::max(std::fabs(expected), std::fabs(got));
      if (scale > 0.0) worst = std::max(worst, std::fabs(got - expected) / scale);
    }
    const auto peak = localize(map);
    same_argmax = same_argmax && peak.row == ref_peak.row && peak.col == ref_peak.col;
  }
  Outcome o;
  o.pass = worst <= 1e-12 && same_argmax;
  o.detail = "k in {0.5, 3, 100}: worst relative deviation from k^2 scaling " +
             fmt("%.2e", worst) + " (bound 1e-12), argmax " +
             (same_argmax ? "unchanged" : "CHANGED");
  return o;
}

Outcome rotation_equivariance() {
  auto s = notch_setup();
  const GridSpec grid{160, 100};
  const auto base = simulate(s, std::nullopt, 1);
  const auto d = notch(0.2, 90.0, 0.1);
  auto r = d;
  r.position = d.position.rotated(360.0 / 16);
  const auto dmg = simulate(s, d, 2);
  const auto rot = simulate(s, r, 2);
  const auto a = compute_di_map(base, dmg, s.layout, s.pipe, grid, DIParams{});
  const auto b = compute_di_map(base, rot, s.layout, s.pipe, grid, DIParams{});
  const std::size_t shift = grid.rows / 16;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < grid.rows; ++i) {
    for (std::size_t j = 0; j < grid.cols; ++j) {
      if (b.values((i + shift) % grid.rows, j) != a.values(i, j)) ++mismatches;
    }
  }
  Outcome o;
  o.pass = mismatches == 0;
  o.detail = "22.5 deg rotation on a 160x100 grid, shift 10 rows: " +
             std::to_string(mismatches) + " of 16000 pixels differ (exact comparison)";
  return o;
}

Outcome io_integrity() {
  testing::Rng rng(31337);
  int round_trips = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    WaveformSet set;
    const int bits = static_cast<int>(rng.integer(2, 16));
    set.adc_bits = bits;
    set.adc_full_scale = static_cast<double>(rng.integer(1, 5'000'000)) / 1e6;
    set.sampling_rate = static_cast<double>(rng.integer(1, 100'000'000));
    set.label = rng.integer(0, 1) ? Label::Damage : Label::Baseline;
    set.layout_digest = static_cast<std::uint32_t>(rng.integer(0, 0xffffffffLL));
    set.channels = Matrix(static_cast<std::size_t>(rng.integer(1, 32)),
                          static_cast<std::size_t>(rng.integer(1, 600)));
    const double lsb = adc_lsb(bits, set.adc_full_scale);
    const long long half = 1LL << (bits - 1);
    for (double& v : set.channels.data()) v = static_cast<double>(rng.integer(-half, half - 1)) * lsb;
    if (decode_capture(encode_capture(set)) == set) ++round_trips;
  }

  int fuzzed = 0;
  int typed = 0;
  const auto seed_file = [] {
    WaveformSet set;
    set.channels = Matrix(4, 50);
    set.sampling_rate = 1e6;
    set.adc_bits = 10;
    set.adc_full_scale = 0.33;
    return encode_capture(set);
  }();
  for (int trial = 0; trial < 20000; ++trial) {
    auto bytes = seed_file;
    switch (rng.integer(0, 3)) {
      case 0:
        for (long long f = rng.integer(1, 6); f > 0; --f) {
          bytes[static_cast<std::size_t>(rng.integer(0, static_cast<long long>(bytes.size()) - 1))] ^=
              static_cast<std::uint8_t>(rng.integer(1, 255));
        }
        break;
      case 1:
        bytes.resize(static_cast<std::size_t>(rng.integer(0, static_cast<long long>(bytes.size()) - 1)));
        break;
      case 2:
        for (std::size_t k = 4; k < 24; ++k) bytes[k] = static_cast<std::uint8_t>(rng.integer(0, 255));
        break;
      default:
        bytes.resize(static_cast<std::size_t>(rng.integer(0, 300)));
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.integer(0, 255));
        if (rng.integer(0, 1) && bytes.size() >= 6) {
          bytes[0] = 'T'; bytes[1] = 'G'; bytes[2] = 'W'; bytes[3] = 'C'; bytes[4] = 1; bytes[5] = 0;
        }
    }
    ++fuzzed;
    try {
      decode_capture(bytes);
      ++typed;  // accepted: still well-formed
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotCaptureFile || e.code() == ErrorCode::CorruptCapture ||
          e.code() == ErrorCode::UnsupportedVersion) {
        ++typed;
      }
    } catch (...) {
    }
  }

  WaveformSet eight;
  eight.channels = Matrix(8, 600);
  eight.sampling_rate = 1e6;
  eight.adc_bits = 10;
  eight.adc_full_scale = 0.33;
  const std::size_t size = encode_capture(eight).size();

  Outcome o;
  o.pass = round_trips == 1000 && typed == fuzzed && size == 24 + 2 * 8 * 600;
  o.detail = std::to_string(round_trips) + "/1000 round trips identical, " +
             std::to_string(typed) + "/" + std::to_string(fuzzed) +
             " fuzzed inputs handled with typed errors, 8x600 capture = " +
             std::to_string(size) + " bytes (24 header + 9600 payload)";
  return o;
}

Outcome performance() {
  auto s = notch_setup();
  s.acquisition.samples_per_channel = 6000;
  const auto base = simulate(s, std::nullopt, 1);
  const auto dmg = simulate(s, notch(0.2, 90.0, 0.1), 2);
  const GridSpec grid{360, 400};
  DIParams params;
  params.threads = 1;
  // Best of three runs for each kernel, to keep scheduler noise out of the ratio.
  double t_fast = 1e9;
  double t_slow = 1e9;
  DIMap fast, slow;
  for (int run = 0; run < 3; ++run) {
    auto start = Clock::now();
    fast = compute_di_map(base, dmg, s.layout, s.pipe, grid, params);
    t_fast = std::min(t_fast, seconds_since(start));
    start = Clock::now();
    slow = reference_di_map(base, dmg, s.layout, s.pipe, grid, params);
    t_slow = std::min(t_slow, seconds_since(start));
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < fast.values.data().size(); ++k) {
    const double x = fast.values.data()[k];
    const double y = slow.values.data()[k];
    const double scale = std::max(std::fabs(x), std::fabs(y));
    if (scale > 0.0) worst = std::max(worst, std::fabs(x - y) / scale);
  }
  const double speedup = t_slow / t_fast;
  Outcome o;
  o.pass = t_fast < 30.0 && speedup >= 5.0 && worst <= 1e-12;
  o.detail = "360x400 grid, 16 receivers, 6000 samples, 1 thread: optimized " +
             fmt("%.2f s", t_fast) + ", reference " + fmt("%.2f s", t_slow) + ", speedup " +
             fmt("%.1fx", speedup) + " (bounds < 30 s, >= 5x); maps agree to " + fmt("%.1e", worst);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "zero identity", zero_identity);
  report(2, "oracle equivalence", oracle_equivalence);
  report(3, "notch localization sweep", [] { return sweep(notch_setup(), 0, "reflective"); });
  report(4, "low-reflecting variant", [] {
    auto s = notch_setup();
    s.propagation.boundary = BoundaryMode::LowReflecting;
    return sweep(s, 2000, "low-reflecting 200 us");
  });
  std::vector<LocalizationReport> full;
  std::vector<LocalizationReport> decimated;
  report(5, "added-mass emulation", [&] {
    full = added_mass_reports(1);
    return added_mass_localization(full);
  });
  report(6, "decimation robustness", [&] {
    decimated = added_mass_reports(10);
    if (full.size() != decimated.size()) return Outcome{false, "criterion 5 did not run"};
    return decimation_robustness(full, decimated);
  });
  report(7, "quantization robustness", quantization_robustness);
  report(8, "scaling and argmax invariance", scaling_invariance);
  report(9, "rotation equivariance", rotation_equivariance);
  report(10, "capture i/o integrity", io_integrity);
  report(11, "performance", performance);

  std::printf("%d of 11 acceptance criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
