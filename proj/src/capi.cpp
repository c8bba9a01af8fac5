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

#include "holobeam/holobeam.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <optional>
#include <string>

#include "holobeam/beamtrain.hpp"
#include "holobeam/error.hpp"
#include "holobeam/wavefield.hpp"
#include "scenario.hpp"

struct hb_scenario {
    holobeam::detail::Scenario scenario;
};

namespace {

thread_local std::string last_error;

hb_status code_of(holobeam::ErrorKind kind) {
    using holobeam::ErrorKind;
    switch (kind) {
        case ErrorKind::config: return HB_ERR_CONFIG;
        case ErrorKind::argument: return HB_ERR_ARGUMENT;
        case ErrorKind::infeasible: return HB_ERR_INFEASIBLE;
        case ErrorKind::parse: return HB_ERR_PARSE;
        case ErrorKind::io: return HB_ERR_IO;
        case ErrorKind::numeric: return HB_ERR_NUMERIC;
    }
    return HB_ERR_INTERNAL;
}

template <class F>
hb_status guarded(F&& f) {
    last_error.clear();
    try {
        return f();
    } catch (const holobeam::Error& e) {
        last_error = e.what();
        return code_of(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return HB_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return HB_ERR_INTERNAL;
    }
}

hb_status bad_argument(const char* what) {
    last_error = what;
    return HB_ERR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* hb_version(void) { return HOLOBEAM_VERSION_STRING; }

const char* hb_last_error(void) { return last_error.c_str(); }

const char* hb_status_name(hb_status status) {
    switch (status) {
        case HB_OK: return "ok";
        case HB_ERR_ARGUMENT: return "argument";
        case HB_ERR_CONFIG: return "config";
        case HB_ERR_PARSE: return "parse";
        case HB_ERR_INFEASIBLE: return "infeasible";
        case HB_ERR_IO: return "io";
        case HB_ERR_NUMERIC: return "numeric";
        case HB_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

hb_status hb_scenario_load(const char* path, hb_scenario** out) {
    if (!path || !out) return bad_argument("path and out must be non-null");
    return guarded([&] {
        *out = new hb_scenario{holobeam::detail::load_scenario(path)};
        return HB_OK;
    });
}

hb_status hb_scenario_parse(const char* json_text, hb_scenario** out) {
    if (!json_text || !out) return bad_argument("json_text and out must be non-null");
    return guarded([&] {
        *out = new hb_scenario{holobeam::detail::parse_scenario(json_text)};
        return HB_OK;
    });
}

void hb_scenario_free(hb_scenario* scenario) { delete scenario; }

const char* hb_scenario_kind(const hb_scenario* scenario) { return scenario ? scenario->scenario.kind.c_str() : ""; }

uint64_t hb_scenario_seed(const hb_scenario* scenario) { return scenario ? scenario->scenario.seed : 0; }

hb_status hb_scenario_run(const hb_scenario* scenario, const char* out_dir, const uint64_t* seed, char* manifest_path,
                          size_t manifest_cap) {
    if (!scenario) return bad_argument("scenario must be non-null");
    return guarded([&] {
        const auto& sc = scenario->scenario;
        const std::filesystem::path dir =
            out_dir ? std::filesystem::path(out_dir) : sc.output_dir.value_or("holobeam-out");
        std::optional<std::uint64_t> s;
        if (seed) s = *seed;
        const auto m = holobeam::detail::run_scenario(sc, dir, s);
        if (manifest_path && manifest_cap > 0) {
            const std::string p = (dir / "manifest.json").string();
            const std::size_t n = std::min(p.size(), manifest_cap - 1);
            std::memcpy(manifest_path, p.data(), n);
            manifest_path[n] = '\0';
        }
        if (m.status == "infeasible") {
            last_error = "optimization found no feasible point; see report.json";
            return HB_ERR_INFEASIBLE;
        }
        return HB_OK;
    });
}

hb_status hb_rayleigh_distance(double aperture_m, double wavelength_m, double* out) {
    if (!out) return bad_argument("out must be non-null");
    return guarded([&] {
        *out = holobeam::rayleigh_distance(aperture_m, wavelength_m);
        return HB_OK;
    });
}

hb_status hb_phi_mu(double theta_rad, double range_m, double* phi, double* mu) {
    if (!phi || !mu) return bad_argument("phi and mu must be non-null");
    return guarded([&] {
        const auto p = holobeam::phi_mu_transform(theta_rad, range_m > 0.0 ? range_m : holobeam::inf);
        *phi = p.phi;
        *mu = p.mu;
        return HB_OK;
    });
}

hb_status hb_steering(size_t n, double spacing_m, double wavelength_m, double theta_rad, double range_m, double* re,
                      double* im) {
    if (!re || !im) return bad_argument("re and im must be non-null");
    return guarded([&] {
        std::optional<double> r;
        if (range_m > 0.0 && range_m < holobeam::inf) r = range_m;
        const auto s = holobeam::steering(n, spacing_m, wavelength_m, theta_rad, r);
        for (size_t i = 0; i < n; ++i) {
            re[i] = s(static_cast<Eigen::Index>(i)).real();
            im[i] = s(static_cast<Eigen::Index>(i)).imag();
        }
        return HB_OK;
    });
}

}  // extern "C"
