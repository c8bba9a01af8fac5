// SPDX-License-Identifier: Apache-2.0
//
// holobeam: holographic beamforming models and optimizers for ISAC
// Copyright (C) 2026 The holobeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HOLOBEAM_H
#define HOLOBEAM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HOLOBEAM_BUILDING_LIBRARY)
#    define HB_API __declspec(dllexport)
#  else
#    define HB_API __declspec(dllimport)
#  endif
#else
#  define HB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hb_status {
    HB_OK = 0,
    HB_ERR_ARGUMENT = 1,
    HB_ERR_CONFIG = 2,
    HB_ERR_PARSE = 3,
    HB_ERR_INFEASIBLE = 4, /* outputs and report.json were still written */
    HB_ERR_IO = 5,
    HB_ERR_NUMERIC = 6,
    HB_ERR_INTERNAL = 7
} hb_status;

typedef struct hb_scenario hb_scenario;

HB_API const char* hb_version(void);

/* Message of the last failing call on this thread; empty after success. */
HB_API const char* hb_last_error(void);

HB_API const char* hb_status_name(hb_status status);

/* Load and validate a scenario file. *out is set only on HB_OK. */
HB_API hb_status hb_scenario_load(const char* path, hb_scenario** out);
HB_API hb_status hb_scenario_parse(const char* json_text, hb_scenario** out);
HB_API void hb_scenario_free(hb_scenario* scenario);

HB_API const char* hb_scenario_kind(const hb_scenario* scenario);
HB_API uint64_t hb_scenario_seed(const hb_scenario* scenario);

/*
 * Run the scenario. out_dir may be NULL to use the scenario's output_dir
 * (or "holobeam-out"); seed may be NULL to keep the scenario's seed.
 * manifest_path, when non-NULL, receives the manifest location (truncated to
 * manifest_cap bytes including the terminator).
 */
HB_API hb_status hb_scenario_run(const hb_scenario* scenario, const char* out_dir, const uint64_t* seed,
                                 char* manifest_path, size_t manifest_cap);

HB_API hb_status hb_rayleigh_distance(double aperture_m, double wavelength_m, double* out);

/* phi = sin(theta), mu = cos(theta)^2 / range; range <= 0 or inf means far field. */
HB_API hb_status hb_phi_mu(double theta_rad, double range_m, double* phi, double* mu);

/* Unit-norm steering vector of a uniform linear array; re and im hold n values. */
HB_API hb_status hb_steering(size_t n, double spacing_m, double wavelength_m, double theta_rad, double range_m,
                             double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif
