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

#ifndef HOLOBEAM_SRC_FEASIBLE_HPP
#define HOLOBEAM_SRC_FEASIBLE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "holobeam/rhs_model.hpp"

namespace holobeam::detail {

/// Amplitude box plus per-row leakage caps sum_n w_n psi_n^2 <= cap_r.
struct FeasibleSet {
    Vec lower;
    Vec upper;
    Vec weight;
    std::vector<std::size_t> row;
    Vec cap;

    static FeasibleSet surface(const RhsConfig& cfg, const ApertureWindow& window, double row_cap = 1.0) {
        const Vec eta = leakage_weights(cfg);
        const Vec d = window.mask(cfg);
        FeasibleSet s;
        const auto n = static_cast<Eigen::Index>(cfg.element_count());
        s.lower = Vec::Zero(n);
        s.upper = d;  // inactive elements are pinned to zero
        s.weight = eta.cwiseProduct(d);
        s.row.resize(cfg.element_count());
        for (std::size_t i = 0; i < cfg.element_count(); ++i) s.row[i] = cfg.row_of(i);
        s.cap = Vec::Constant(static_cast<Eigen::Index>(cfg.rows), row_cap);
        return s;
    }

    Eigen::Index size() const { return upper.size(); }

    void append(const FeasibleSet& other) {
        const auto n0 = size();
        const auto r0 = cap.size();
        const auto n1 = other.size();
        lower.conservativeResize(n0 + n1);
        upper.conservativeResize(n0 + n1);
        weight.conservativeResize(n0 + n1);
        lower.tail(n1) = other.lower;
        upper.tail(n1) = other.upper;
        weight.tail(n1) = other.weight;
        for (auto r : other.row) row.push_back(r + static_cast<std::size_t>(r0));
        cap.conservativeResize(r0 + other.cap.size());
        cap.tail(other.cap.size()) = other.cap;
    }

    Vec row_load(const Vec& x) const {
        Vec load = Vec::Zero(cap.size());
        for (Eigen::Index n = 0; n < x.size(); ++n)
            load(static_cast<Eigen::Index>(row[static_cast<std::size_t>(n)])) += weight(n) * x(n) * x(n);
        return load;
    }

    /// Clip to the box, then shrink each overloaded row uniformly.
    void project(Vec& x) const {
        x = x.cwiseMax(lower).cwiseMin(upper);
        const Vec load = row_load(x);
        Vec factor = Vec::Ones(cap.size());
        for (Eigen::Index r = 0; r < cap.size(); ++r)
            if (load(r) > cap(r)) factor(r) = std::sqrt(cap(r) / load(r)) * (1.0 - 1e-12);
        for (Eigen::Index n = 0; n < x.size(); ++n) x(n) *= factor(static_cast<Eigen::Index>(row[static_cast<std::size_t>(n)]));
    }

    double min_slack(const Vec& x) const {
        const Vec load = row_load(x);
        double s = inf;
        for (Eigen::Index r = 0; r < cap.size(); ++r) s = std::min(s, cap(r) - load(r));
        return s;
    }

    bool in_box(const Vec& x) const { return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all(); }
};

}  // namespace holobeam::detail

#endif
