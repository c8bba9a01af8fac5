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

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "holobeam/holobeam.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

int main(int argc, char** argv) {
    char path[4096];
    char manifest[4096];
    hb_scenario* sc = NULL;
    double phi = 0.0, mu = 0.0, d = 0.0;
    double re[16], im[16], norm = 0.0;
    uint64_t seed = 5;
    size_t i;

    if (argc < 2) {
        fprintf(stderr, "usage: %s DATA_DIR\n", argv[0]);
        return 2;
    }

    EXPECT(strlen(hb_version()) > 0);
    EXPECT(strcmp(hb_status_name(HB_ERR_INFEASIBLE), "infeasible") == 0);

    EXPECT(hb_rayleigh_distance(256 * 0.0025, 0.01, &d) == HB_OK);
    EXPECT(fabs(d - 81.92) < 1e-9);
    EXPECT(hb_rayleigh_distance(-1.0, 0.01, &d) == HB_ERR_ARGUMENT);
    EXPECT(strlen(hb_last_error()) > 0);

    EXPECT(hb_phi_mu(asin(0.5), 3.0, &phi, &mu) == HB_OK);
    EXPECT(fabs(phi - 0.5) < 1e-12 && fabs(mu - 0.25) < 1e-12);
    EXPECT(hb_phi_mu(0.3, 0.0, &phi, &mu) == HB_OK && mu == 0.0);
    EXPECT(strlen(hb_last_error()) == 0);

    EXPECT(hb_steering(16, 0.005, 0.01, 0.2, 0.0, re, im) == HB_OK);
    for (i = 0; i < 16; ++i) norm += re[i] * re[i] + im[i] * im[i];
    EXPECT(fabs(norm - 1.0) < 1e-12);
    EXPECT(hb_steering(0, 0.005, 0.01, 0.2, 0.0, re, im) == HB_ERR_ARGUMENT);

    EXPECT(hb_scenario_parse("{\"schema\": 1,", &sc) == HB_ERR_PARSE);
    EXPECT(sc == NULL);
    snprintf(path, sizeof path, "%s/unknown_field.json", argv[1]);
    EXPECT(hb_scenario_load(path, &sc) == HB_ERR_PARSE);
    EXPECT(hb_scenario_load("/nonexistent/holobeam.json", &sc) == HB_ERR_IO);

    snprintf(path, sizeof path, "%s/beampattern.json", argv[1]);
    EXPECT(hb_scenario_load(path, &sc) == HB_OK);
    if (sc) {
        EXPECT(strcmp(hb_scenario_kind(sc), "beampattern") == 0);
        EXPECT(hb_scenario_seed(sc) == 1);
        EXPECT(hb_scenario_run(sc, "capi_out", &seed, manifest, sizeof manifest) == HB_OK);
        EXPECT(strstr(manifest, "manifest.json") != NULL);
        hb_scenario_free(sc);
        sc = NULL;
    }

    snprintf(path, sizeof path, "%s/jcas_infeasible.json", argv[1]);
    EXPECT(hb_scenario_load(path, &sc) == HB_OK);
    if (sc) {
        EXPECT(hb_scenario_run(sc, "capi_infeasible", NULL, NULL, 0) == HB_ERR_INFEASIBLE);
        hb_scenario_free(sc);
    }
    hb_scenario_free(NULL);

    if (failures) fprintf(stderr, "%d C API check(s) failed\n", failures);
    else printf("C API checks passed\n");
    return failures ? 1 : 0;
}
