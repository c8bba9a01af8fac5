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

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "holobeam/holobeam.h"

namespace {

int exit_code(hb_status s) {
    switch (s) {
        case HB_OK: return 0;
        case HB_ERR_PARSE:
        case HB_ERR_CONFIG:
        case HB_ERR_ARGUMENT: return 2;
        case HB_ERR_INFEASIBLE: return 3;
        default: return 4;
    }
}

int report(hb_status s, const std::string& path) {
    std::fprintf(stderr, "holobeam: %s: %s error: %s\n", path.c_str(), hb_status_name(s), hb_last_error());
    return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holographic beamforming scenario runner"};
    app.set_version_flag("--version", std::string(hb_version()));
    app.require_subcommand(1);

    std::string path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "run a scenario and write its artifacts");
    run->add_option("scenario", path, "scenario JSON file")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_dir, "output directory");

    auto* validate = app.add_subcommand("validate", "parse and check a scenario without running it");
    validate->add_option("scenario", path, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    hb_scenario* sc = nullptr;
    hb_status s = hb_scenario_load(path.c_str(), &sc);
    if (s != HB_OK) return report(s, path);

    int rc = 0;
    if (*validate) {
        std::printf("%s: ok (kind %s)\n", path.c_str(), hb_scenario_kind(sc));
    } else {
        char manifest[4096] = {0};
        const std::uint64_t seed_value = seed.value_or(0);
        s = hb_scenario_run(sc, out_dir.empty() ? nullptr : out_dir.c_str(), seed ? &seed_value : nullptr, manifest,
                            sizeof manifest);
        if (s == HB_OK)
            std::printf("%s\n", manifest);
        else
            rc = report(s, path);
    }
    hb_scenario_free(sc);
    return rc;
}
