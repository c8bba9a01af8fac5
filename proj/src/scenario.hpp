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

#ifndef HOLOBEAM_SRC_SCENARIO_HPP
#define HOLOBEAM_SRC_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holobeam/rhs_model.hpp"

namespace holobeam::detail {

inline constexpr int scenario_schema = 1;

struct Scenario {
    std::string kind;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> output_dir;
    RhsConfig rhs;
    nlohmann::ordered_json doc;
};

/// Parses and fully validates a scenario; throws Error(parse) with a line and
/// column for syntax errors and a JSON path for schema errors.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

std::uint64_t fnv1a(const std::string& bytes);

struct RunManifest {
    std::string scenario_hash;  // 16 hex digits
    std::string version;
    double wall_seconds = 0.0;
    std::vector<std::string> files;
    std::string status = "ok";  // ok | infeasible
};

/// Writes every artifact plus manifest.json into `out_dir` (created if missing).
RunManifest run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                         std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace holobeam::detail

#endif
