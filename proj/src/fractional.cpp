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

#include "fractional.hpp"

#include <algorithm>
#include <cmath>

namespace holobeam::detail {
namespace {

struct Linearised {
    CVec lambda;
    double lambda_sq = 0.0;
    const RatioTerm* term = nullptr;
};

double surrogate(const Linearised& l, const Vec& v, Vec* grad) {
    const RatioTerm& t = *l.term;
    const CVec a = t.num * v.cast<cd>();
    double g = t.den_const;
    CVec d;
    if (t.den.rows() > 0) {
        d = t.den * v.cast<cd>();
        g += d.squaredNorm();
    }
    const double val = 2.0 * std::real(l.lambda.dot(a)) - l.lambda_sq * g;
    if (grad) {
        *grad = 2.0 * (t.num.adjoint() * l.lambda).real();
        if (t.den.rows() > 0) *grad -= 2.0 * l.lambda_sq * (t.den.adjoint() * d).real();
        *grad *= t.weight;
    }
    return t.weight * val;
}

}  // namespace

double RatioTerm::value(const Vec& v) const {
    const double s = (num * v.cast<cd>()).squaredNorm();
    double g = den_const;
    if (den.rows() > 0) g += (den * v.cast<cd>()).squaredNorm();
    if (!(g > 0.0)) return s > 0.0 ? inf : 0.0;
    return s / g;
}

double RatioGroup::value(const Vec& v) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight * t.value(v);
    return s;
}

double FractionalBlock::min_group(const Vec& v) const {
    double m = inf;
    for (const auto& g : groups) m = std::min(m, g.value(v));
    return m;
}

double FractionalBlock::floor_slack(const Vec& v) const {
    double s = inf;
    for (const auto& f : floors) {
        if (!(f.floor > 0.0)) continue;
        s = std::min(s, f.term.value(v) / f.floor - 1.0);
    }
    return s;
}

Vec improve_block(const FractionalBlock& block, const Vec& v0, const AscentOptions& options, double floor_tol) {
    std::vector<std::vector<Linearised>> lin(block.groups.size());
    for (std::size_t gi = 0; gi < block.groups.size(); ++gi) {
        for (const auto& t : block.groups[gi].terms) {
            Linearised l;
            l.term = &t;
            double g = t.den_const;
            if (t.den.rows() > 0) g += (t.den * v0.cast<cd>()).squaredNorm();
            l.lambda = g > 0.0 ? CVec(t.num * v0.cast<cd>() / g) : CVec::Zero(t.num.rows());
            l.lambda_sq = l.lambda.squaredNorm();
            lin[gi].push_back(std::move(l));
        }
    }
    auto group_surrogate = [&](std::size_t gi, const Vec& v, Vec* grad) {
        double s = 0.0;
        if (grad) grad->setZero(v.size());
        Vec gt;
        for (const auto& l : lin[gi]) {
            s += surrogate(l, v, grad ? &gt : nullptr);
            if (grad) *grad += gt;
        }
        return s;
    };

    const double start = block.min_group(v0);
    const double mu = 0.02 * std::max(std::abs(start), 1e-300);
    SmoothProblem p;
    p.project = block.project;
    p.objective = [&](const Vec& v, Vec* grad) {
        // Soft minimum of the group surrogates.
        const std::size_t count = lin.size();
        std::vector<double> vals(count);
        std::vector<Vec> grads(grad ? count : 0);
        double lo = inf;
        for (std::size_t gi = 0; gi < count; ++gi) {
            vals[gi] = group_surrogate(gi, v, grad ? &grads[gi] : nullptr);
            lo = std::min(lo, vals[gi]);
        }
        if (count == 1) {
            if (grad) *grad = grads[0];
            return vals[0];
        }
        double z = 0.0;
        std::vector<double> w(count);
        for (std::size_t gi = 0; gi < count; ++gi) {
            w[gi] = std::exp(-(vals[gi] - lo) / mu);
            z += w[gi];
        }
        if (grad) {
            grad->setZero(v.size());
            for (std::size_t gi = 0; gi < count; ++gi) *grad += (w[gi] / z) * grads[gi];
        }
        return lo - mu * std::log(z);
    };
    for (const auto& f : block.floors) {
        if (!(f.floor > 0.0)) continue;
        const RatioTerm* t = &f.term;
        const double floor = f.floor;
        double scale = t->den_const;
        if (t->den.rows() > 0) scale += (t->den * v0.cast<cd>()).squaredNorm();
        scale = std::max(scale * floor, 1e-300);
        p.constraints.push_back([t, floor, scale](const Vec& v, Vec* grad) {
            const CVec a = t->num * v.cast<cd>();
            double g = t->den_const;
            CVec d;
            if (t->den.rows() > 0) {
                d = t->den * v.cast<cd>();
                g += d.squaredNorm();
            }
            if (grad) {
                *grad = 2.0 * (t->num.adjoint() * a).real();
                if (t->den.rows() > 0) *grad -= 2.0 * floor * (t->den.adjoint() * d).real();
                *grad /= scale;
            }
            return (a.squaredNorm() - floor * g) / scale;
        });
    }

    AscentResult r = ascend(p, v0, options);
    const double slack0 = block.floor_slack(v0);
    const double slack1 = block.floor_slack(r.x);
    const bool feasible0 = slack0 >= -floor_tol;
    const bool feasible1 = slack1 >= -floor_tol;
    if (!feasible1) return feasible0 || slack1 <= slack0 ? v0 : r.x;
    if (!feasible0) return r.x;
    return block.min_group(r.x) >= start ? r.x : v0;
}

}  // namespace holobeam::detail
