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

/* C interface to the tgw guided-wave damage imaging library.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function. Every fallible call returns a tgw_status; on
 * failure tgw_last_error() holds a message for the calling thread until its
 * next failing call. Lengths are millimeters, angles degrees, times
 * microseconds, unless a name says otherwise. */
#ifndef TGW_TGW_H
#define TGW_TGW_H

#include <stddef.h>
#include <stdint.h>

#if defined(TGW_BUILDING_LIBRARY)
#define TGW_API __attribute__((visibility("default")))
#else
#define TGW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tgw_status {
  TGW_OK = 0,
  TGW_E_INVALID_ARGUMENT = 1,
  TGW_E_CONFIG = 2,
  TGW_E_IO = 3,
  TGW_E_NOT_CAPTURE = 4,
  TGW_E_CORRUPT_CAPTURE = 5,
  TGW_E_UNSUPPORTED_VERSION = 6,
  TGW_E_INCOMPATIBLE = 7,
  TGW_E_INTERNAL = 8
} tgw_status;

typedef enum tgw_label { TGW_LABEL_BASELINE = 0, TGW_LABEL_DAMAGE = 1 } tgw_label;

typedef enum tgw_map_format { TGW_MAP_CSV = 0, TGW_MAP_PGM = 1 } tgw_map_format;

typedef struct tgw_scenario tgw_scenario;
typedef struct tgw_waveforms tgw_waveforms;
typedef struct tgw_dimap tgw_dimap;

/* Analysis knobs. Zero fields fall back to the scenario: rows/cols to the
 * scenario grid, window_samples to the scenario window rescaled to the data's
 * sampling rate. truncate_us <= 0 keeps full traces. */
typedef struct tgw_di_options {
  uint32_t rows;
  uint32_t cols;
  uint32_t window_samples;
  double truncate_us;
  uint32_t threads;
} tgw_di_options;

typedef struct tgw_report {
  int damage_detected;
  uint32_t row;
  uint32_t col;
  double z_mm;
  double theta_deg;
  double peak_value;
  int has_truth;
  double truth_z_mm;
  double truth_theta_deg;
  double error_mm; /* valid when has_truth and damage_detected */
} tgw_report;

TGW_API const char* tgw_version(void);
TGW_API const char* tgw_last_error(void);
TGW_API const char* tgw_status_name(tgw_status status);

/* Scenarios */
TGW_API tgw_status tgw_scenario_load(const char* path, tgw_scenario** out);
TGW_API tgw_status tgw_scenario_parse(const char* json_text, tgw_scenario** out);
TGW_API void tgw_scenario_free(tgw_scenario* scenario);
/* Canonical JSON of the fully-defaulted scenario; valid until the next call
 * on the same handle. */
TGW_API const char* tgw_scenario_json(tgw_scenario* scenario);
TGW_API int tgw_scenario_has_defect(const tgw_scenario* scenario);
TGW_API tgw_status tgw_scenario_defect_position(const tgw_scenario* scenario, double* z_mm,
                                                double* theta_deg);
TGW_API tgw_status tgw_scenario_set_defect_position(tgw_scenario* scenario, double z_mm,
                                                    double theta_deg);
TGW_API uint64_t tgw_scenario_seed(const tgw_scenario* scenario);
TGW_API uint32_t tgw_scenario_receivers(const tgw_scenario* scenario);
TGW_API double tgw_surface_error_mm(const tgw_scenario* scenario, double z1_mm,
                                    double theta1_deg, double z2_mm, double theta2_deg);

/* Waveforms. tgw_simulate uses the scenario seed for the baseline and
 * seed + 1 for the damage acquisition. */
TGW_API tgw_status tgw_simulate(const tgw_scenario* scenario, tgw_label label,
                                tgw_waveforms** out);
TGW_API void tgw_waveforms_free(tgw_waveforms* waveforms);
TGW_API uint32_t tgw_waveforms_channels(const tgw_waveforms* waveforms);
TGW_API uint32_t tgw_waveforms_samples(const tgw_waveforms* waveforms);
TGW_API double tgw_waveforms_sampling_rate(const tgw_waveforms* waveforms);
TGW_API tgw_label tgw_waveforms_label(const tgw_waveforms* waveforms);
TGW_API const double* tgw_waveforms_channel(const tgw_waveforms* waveforms, uint32_t channel);

/* Capture files */
TGW_API tgw_status tgw_capture_write(const tgw_waveforms* waveforms, const char* path,
                                     uint64_t* bytes_written);
TGW_API tgw_status tgw_capture_read(const char* path, tgw_waveforms** out);
TGW_API tgw_status tgw_capture_decode(const uint8_t* data, size_t size, tgw_waveforms** out);
TGW_API tgw_status tgw_capture_check(const tgw_scenario* scenario,
                                     const tgw_waveforms* waveforms, const char* name);

/* Damage-index maps */
TGW_API tgw_status tgw_di_map(const tgw_scenario* scenario, const tgw_waveforms* baseline,
                              const tgw_waveforms* damage, const tgw_di_options* options,
                              tgw_dimap** out);
TGW_API tgw_status tgw_di_map_reference(const tgw_scenario* scenario,
                                        const tgw_waveforms* baseline,
                                        const tgw_waveforms* damage,
                                        const tgw_di_options* options, tgw_dimap** out);
TGW_API void tgw_dimap_free(tgw_dimap* map);
TGW_API uint32_t tgw_dimap_rows(const tgw_dimap* map);
TGW_API uint32_t tgw_dimap_cols(const tgw_dimap* map);
TGW_API uint32_t tgw_dimap_window_samples(const tgw_dimap* map);
/* Row-major values, rows * cols entries. */
TGW_API const double* tgw_dimap_values(const tgw_dimap* map);
TGW_API tgw_status tgw_dimap_export(const tgw_dimap* map, tgw_map_format format,
                                    const char* path);

/* Argmax localization. With a scenario holding a defect, the report carries
 * it as ground truth and the surface error of the estimate. */
TGW_API tgw_status tgw_localize(const tgw_dimap* map, const tgw_scenario* truth_from,
                                tgw_report* out);

#ifdef __cplusplus
}
#endif

#endif /* TGW_TGW_H */
