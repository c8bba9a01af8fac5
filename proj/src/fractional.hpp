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

#ifndef HOLOBEAM_SRC_FRACTIONAL_HPP
#define HOLOBEAM_SRC_FRACTIONAL_HPP

#include <functional>
#include <vector>

#include "ascent.hpp"
#include "holobeam/types.hpp"

namespace holobeam::detail {

/// ||num v||^2 / (||den v||^2 + den_const) for a real parameter vector v.
struct RatioTerm {
    CMat num;
    CMat den;
    double den_const = 0.0;
    double weight = 1.0;

    double value(const Vec& v) const;
};

struct RatioGroup {
    std::vector<RatioTerm> terms;

    double value(const Vec& v) const;
};

/// Ratio floor: term.value(v) >= floor.
struct RatioFloor {
    RatioTerm term;
    double floor = 0.0;
};

/// One block of a max-min fractional program: maximise the smallest group sum
/// subject to ratio floors and a projection-defined set.
struct FractionalBlock {
    std::vector<RatioGroup> groups;
    std::vector<RatioFloor> floors;
    std::function<void(Vec&)> project;

    double min_group(const Vec& v) const;
    /// Smallest relative floor slack, +inf without floors.
    double floor_slack(const Vec& v) const;
};

/// One quadratic-transform step from v0: the auxiliaries are fixed at
/// lambda = num v0 / (||den v0||^2 + c), the concave surrogate is climbed, and
/// the candidate is kept only when every floor holds and the true minimum
/// does not decrease. Returns v0 otherwise.
Vec improve_block(const FractionalBlock& block, const Vec& v0, const AscentOptions& options, double floor_tol = 1e-6);

}  // namespace holobeam::detail

#endif
