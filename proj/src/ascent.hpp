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

#ifndef HOLOBEAM_SRC_ASCENT_HPP
#define HOLOBEAM_SRC_ASCENT_HPP

#include <functional>
#include <vector>

#include "holobeam/types.hpp"

namespace holobeam::detail {

/// Value of a smooth function; fills `grad` when non-null.
using ValueGrad = std::function<double(const Vec& x, Vec* grad)>;

struct SmoothProblem {
    ValueGrad objective;                 // maximised
    std::vector<ValueGrad> constraints;  // c_i(x) >= 0, each scaled to order one
    std::function<void(Vec&)> project;   // maps any point into the simple set
};

struct AscentOptions {
    int max_iter = 500;
    double rel_tol = 1e-6;
    int patience = 3;
    int penalty_rounds = 5;
    double penalty_start = 10.0;
    double penalty_growth = 10.0;
    double feas_tol = 1e-6;
    int restoration_iter = 2000;
};

struct AscentResult {
    Vec x;
    double value = 0.0;
    std::vector<double> trace;  // objective of the feasible iterates, non-decreasing
    bool feasible = false;
    double min_slack = inf;
    int iterations = 0;
};

/// Projected-gradient ascent. Constraints are first enforced with a quadratic
/// penalty on a geometric schedule, violations left over are removed by a
/// restoration pass, and a final phase climbs the objective through feasible
/// iterates only.
AscentResult ascend(const SmoothProblem& problem, Vec x0, const AscentOptions& options);

/// Polish phase only, starting from a point assumed feasible.
AscentResult polish(const SmoothProblem& problem, Vec x0, const AscentOptions& options);

double min_slack(const SmoothProblem& problem, const Vec& x);

}  // namespace holobeam::detail

#endif
