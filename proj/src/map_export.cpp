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

#include "tgw/map_export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tgw/error.hpp"

namespace tgw {

namespace {

void write_csv(const DIMap& map, std::ostream& out) {
  char buf[64];
  out << "# tgw damage index map\n";
  out << "# rows=" << map.grid.rows << " cols=" << map.grid.cols << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", map.z_start * 1e3);
  out << "# z_start_mm=" << buf;
  std::snprintf(buf, sizeof buf, "%.17g", map.z_end * 1e3);
  out << " z_end_mm=" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", map.group_velocity);
  out << "# window_samples=" << map.window_length_samples << " group_velocity_m_s=" << buf
      << '\n';
  out << "# baseline=" << map.baseline_id << " damage=" << map.damage_id << '\n';
  out << "# row i: theta_deg=(i+0.5)*360/rows; column j: z=z_start+(j+0.5)*(z_end-z_start)/cols\n";
  for (std::size_t i = 0; i < map.values.rows(); ++i) {
    for (std::size_t j = 0; j < map.values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", map.values(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_pgm(const DIMap& map, std::ostream& out) {
  const DIMap norm = normalize(map);
  out << "P5\n" << map.values.cols() << ' ' << map.values.rows() << "\n65535\n";
  for (double v : norm.values.data()) {
    const auto level = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
    const char px[2] = {static_cast<char>(level >> 8), static_cast<char>(level & 0xff)};
    out.write(px, 2);
  }
}

// Pulls "key=value" tokens out of a comment line.
void scan_metadata(const std::string& line, DIMap& map) {
  std::istringstream tokens(line.substr(1));
  std::string tok;
  while (tokens >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "rows") map.grid.rows = std::stoul(val);
    else if (key == "cols") map.grid.cols = std::stoul(val);
    else if (key == "z_start_mm") map.z_start = std::stod(val) / 1e3;
    else if (key == "z_end_mm") map.z_end = std::stod(val) / 1e3;
    else if (key == "window_samples") map.window_length_samples = std::stoul(val);
    else if (key == "group_velocity_m_s") map.group_velocity = std::stod(val);
    else if (key == "baseline") map.baseline_id = val;
    else if (key == "damage") map.damage_id = val;
  }
}

}  // namespace

void export_map(const DIMap& map, MapFormat format, std::ostream& out) {
  if (format == MapFormat::Csv) {
    write_csv(map, out);
  } else {
    write_pgm(map, out);
  }
  if (!out) fail(ErrorCode::Io, "failed writing map");
}

void export_map(const DIMap& map, MapFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  export_map(map, format, out);
  out.close();
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

DIMap read_map_csv(std::istream& in) {
  DIMap map;
  std::vector<std::vector<double>> rows;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        scan_metadata(line, map);
        continue;
      }
      std::vector<double> row;
      std::istringstream cells(line);
      std::string cell;
      while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(std::move(row));
    }
  } catch (const std::logic_error&) {
    fail(ErrorCode::InvalidArgument, "malformed map csv line: " + line);
  }
  if (rows.size() != map.grid.rows) {
    fail(ErrorCode::InvalidArgument, "map csv has " + std::to_string(rows.size()) +
                                         " rows, header declares " +
                                         std::to_string(map.grid.rows));
  }
  map.values = Matrix(map.grid.rows, map.grid.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != map.grid.cols) {
      fail(ErrorCode::InvalidArgument, "map csv row " + std::to_string(i) + " has " +
                                           std::to_string(rows[i].size()) + " values");
    }
    std::copy(rows[i].begin(), rows[i].end(), map.values.row(i).begin());
  }
  return map;
}

}  // namespace tgw
