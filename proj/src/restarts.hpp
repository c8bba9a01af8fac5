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

#ifndef HOLOBEAM_SRC_RESTARTS_HPP
#define HOLOBEAM_SRC_RESTARTS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "parallel.hpp"

namespace holobeam::detail {

/// Runs attempts in batches of `restarts` (at most ten batches) until some
/// attempt is feasible. Attempt i receives index i; the best feasible value
/// wins and ties go to the lowest index, so the outcome does not depend on
/// scheduling. T needs `bool feasible` and `double value`. `seen`, when set,
/// receives every feasible attempt in index order.
template <class T>
std::optional<T> best_of_restarts(std::size_t restarts, const std::function<T(std::size_t)>& attempt,
                                  std::size_t* used, const std::function<void(const T&)>& seen = {}) {
    const std::size_t batch = restarts == 0 ? 1 : restarts;
    std::optional<T> best;
    std::size_t best_index = 0;
    std::size_t done = 0;
    for (std::size_t round = 0; round < 10 && !best; ++round) {
        std::vector<std::optional<T>> out(batch);
        parallel_for(batch, [&](std::size_t k) { out[k] = attempt(done + k); });
        for (std::size_t k = 0; k < batch; ++k) {
            if (!out[k] || !out[k]->feasible) continue;
            if (seen) seen(*out[k]);
            if (!best || out[k]->value > best->value) {
                best = std::move(out[k]);
                best_index = done + k;
            }
        }
        done += batch;
    }
    (void)best_index;
    if (used) *used = done;
    return best;
}

}  // namespace holobeam::detail

#endif
