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

#ifndef HOLOBEAM_SRC_PARALLEL_HPP
#define HOLOBEAM_SRC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace holobeam::detail {

/// Worker count: HOLOBEAM_THREADS when set and positive, otherwise the
/// hardware concurrency (at least one).
std::size_t worker_count();

/// Runs fn(0..count-1) on up to worker_count() threads. Each index is
/// executed exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace holobeam::detail

#endif
