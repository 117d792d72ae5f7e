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

#include <filesystem>
#include <iosfwd>

#include "tgw/di_engine.hpp"

namespace tgw {

enum class MapFormat { Csv, Pgm };

/// CSV: '#' comment lines with grid metadata, then one line per row of
/// comma-separated values printed with 17 significant digits.
/// PGM: binary 16-bit (P5, maxval 65535) of the normalized map; image rows
/// are circumferential positions, image columns axial positions.
void export_map(const DIMap& map, MapFormat format, std::ostream& out);
void export_map(const DIMap& map, MapFormat format, const std::filesystem::path& path);

/// Reads back a CSV written by export_map (values and grid metadata).
DIMap read_map_csv(std::istream& in);

}  // namespace tgw
