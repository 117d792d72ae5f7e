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

#include "tgw/waveform.hpp"

#include <algorithm>

namespace tgw {

WaveformSet WaveformSet::truncated(std::size_t samples) const {
  const std::size_t keep = std::min(samples, num_samples());
  WaveformSet out = *this;
  out.channels = Matrix(num_receivers(), keep);
  for (std::size_t m = 0; m < num_receivers(); ++m) {
    std::copy_n(channel(m).begin(), keep, out.channels.row(m).begin());
  }
  return out;
}

WaveformSet WaveformSet::scaled(double k) const {
  WaveformSet out = *this;
  for (double& v : out.channels.data()) v *= k;
  out.adc_bits.reset();
  return out;
}

}  // namespace tgw
