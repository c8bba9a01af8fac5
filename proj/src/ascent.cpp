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

#include "ascent.hpp"

#include <algorithm>
#include <cmath>

namespace holobeam::detail {
namespace {

struct Monotone {
    std::function<double(const Vec&, Vec*)> merit;
    std::function<void(Vec&)> project;
    std::function<bool(const Vec&)> done;  // optional early exit
};

// Backtracking projected-gradient ascent; every accepted step strictly
// increases the merit, so the returned trace is non-decreasing.
int climb(const Monotone& m, Vec& x, double& value, const AscentOptions& opt, std::vector<double>* trace) {
    Vec g;
    value = m.merit(x, &g);
    if (trace) trace->push_back(value);
    if (!std::isfinite(value)) return 0;
    const double gnorm = g.norm();
    if (!(gnorm > 0.0)) return 0;
    double step = 0.1 * std::max(x.norm(), 1e-3) / gnorm;
    int calm = 0;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        if (m.done && m.done(x)) break;
        bool accepted = false;
        Vec y;
        double vy = 0.0;
        for (int k = 0; k < 60; ++k) {
            y = x + step * g;
            m.project(y);
            if ((y - x).norm() <= 1e-15 * std::max(1.0, x.norm())) break;
            vy = m.merit(y, nullptr);
            if (std::isfinite(vy) && vy > value) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        const double rel = (vy - value) / std::max(std::abs(vy) + std::abs(value), 1e-300);
        x = std::move(y);
        value = m.merit(x, &g);
        if (trace) trace->push_back(value);
        step *= 2.0;
        if (rel < opt.rel_tol) {
            if (++calm >= opt.patience) {
                ++it;
                break;
            }
        } else {
            calm = 0;
        }
    }
    return it;
}

double violation(const SmoothProblem& p, const Vec& x, Vec* grad) {
    double v = 0.0;
    if (grad) grad->setZero(x.size());
    Vec gi;
    for (const auto& c : p.constraints) {
        const double ci = c(x, grad ? &gi : nullptr);
        if (ci < 0.0) {
            v += ci * ci;
            if (grad) *grad += 2.0 * ci * gi;
        }
    }
    return v;
}

}  // namespace

double min_slack(const SmoothProblem& problem, const Vec& x) {
    double s = inf;
    for (const auto& c : problem.constraints) s = std::min(s, c(x, nullptr));
    return s;
}

AscentResult polish(const SmoothProblem& problem, Vec x0, const AscentOptions& options) {
    AscentResult out;
    problem.project(x0);
    const double tol = options.feas_tol;
    Monotone m;
    m.project = problem.project;
    m.merit = [&](const Vec& x, Vec* g) {
        for (const auto& c : problem.constraints)
            if (c(x, nullptr) < -tol) return -inf;
        return problem.objective(x, g);
    };
    out.iterations = climb(m, x0, out.value, options, &out.trace);
    out.x = std::move(x0);
    out.value = problem.objective(out.x, nullptr);
    out.min_slack = min_slack(problem, out.x);
    out.feasible = out.min_slack >= -tol && std::isfinite(out.value);
    return out;
}

AscentResult ascend(const SmoothProblem& problem, Vec x0, const AscentOptions& options) {
    problem.project(x0);
    int iterations = 0;
    if (!problem.constraints.empty()) {
        Vec g;
        const double f0 = problem.objective(x0, &g);
        const double scale = std::max({std::abs(f0), g.norm() * x0.norm(), 1e-300});
        double rho = options.penalty_start;
        for (int round = 0; round < options.penalty_rounds; ++round, rho *= options.penalty_growth) {
            Monotone m;
            m.project = problem.project;
            m.merit = [&](const Vec& x, Vec* grad) {
                Vec gv;
                const double v = violation(problem, x, grad ? &gv : nullptr);
                const double f = problem.objective(x, grad);
                if (grad) *grad = *grad / scale - rho * gv;
                return f / scale - rho * v;
            };
            double value = 0.0;
            iterations += climb(m, x0, value, options, nullptr);
        }
        if (min_slack(problem, x0) < -0.5 * options.feas_tol) {
            Monotone m;
            m.project = problem.project;
            m.merit = [&](const Vec& x, Vec* grad) {
                const double v = violation(problem, x, grad);
                if (grad) *grad = -*grad;
                return -v;
            };
            m.done = [&](const Vec& x) { return min_slack(problem, x) >= -0.5 * options.feas_tol; };
            AscentOptions ro = options;
            ro.max_iter = options.restoration_iter;
            ro.rel_tol = 0.0;
            double value = 0.0;
            iterations += climb(m, x0, value, ro, nullptr);
        }
        if (min_slack(problem, x0) < -options.feas_tol) {
            AscentResult out;
            out.x = std::move(x0);
            out.value = problem.objective(out.x, nullptr);
            out.min_slack = min_slack(problem, out.x);
            out.feasible = false;
            out.iterations = iterations;
            return out;
        }
    }
    AscentResult out = polish(problem, std::move(x0), options);
    out.iterations += iterations;
    return out;
}

}  // namespace holobeam::detail
