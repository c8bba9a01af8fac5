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

#include <algorithm>
#include <cmath>

#include "ascent.hpp"
#include "feasible.hpp"
#include "forms.hpp"
#include "holobeam/beamopt.hpp"
#include "holobeam/error.hpp"
#include "holobeam/random.hpp"
#include "holobeam/wavefield.hpp"
#include "restarts.hpp"

namespace holobeam {
namespace {

// g_j = sqrt(P_t / L) F^T diag(a_j) psi, one entry per feed.
std::vector<CMat> direction_maps(const HdmaProblem& p) {
    const CMat f = build_propagation_matrix(p.cfg);
    const double amp = std::sqrt(p.tx_power / static_cast<double>(p.cfg.rows));
    std::vector<CMat> maps;
    for (const auto& dir : p.directions) maps.push_back(amp * f.transpose() * steering(p.cfg, dir).asDiagonal());
    return maps;
}

double objective(const HdmaProblem& p, const detail::BlockForms& f, const Vec& v, Vec* grad) {
    switch (p.objective) {
        case HdmaObjective::sum_power: {
            double s = 0.0;
            if (grad) grad->setZero(v.size());
            for (const auto& q : f.power) {
                const Vec qv = q * v;
                s += v.dot(qv);
                if (grad) *grad += 2.0 * qv;
            }
            return s;
        }
        case HdmaObjective::min_power: {
            std::vector<double> vals;
            std::vector<Vec> grads;
            double lo = inf;
            double mean = 0.0;
            for (const auto& q : f.power) {
                const Vec qv = q * v;
                vals.push_back(v.dot(qv));
                grads.push_back(2.0 * qv);
                lo = std::min(lo, vals.back());
                mean += vals.back() / static_cast<double>(f.power.size());
            }
            if (vals.size() == 1) {
                if (grad) *grad = grads[0];
                return vals[0];
            }
            // Soft minimum with a temperature tied to the current power level.
            const double mu = std::max(0.01 * mean, 1e-300);
            double z = 0.0;
            std::vector<double> w(vals.size());
            for (std::size_t j = 0; j < vals.size(); ++j) z += (w[j] = std::exp(-(vals[j] - lo) / mu));
            if (grad) {
                grad->setZero(v.size());
                for (std::size_t j = 0; j < vals.size(); ++j) *grad += (w[j] / z) * grads[j];
            }
            return lo - mu * std::log(z);
        }
        case HdmaObjective::radar_utility:
            return detail::utility(f, p.alpha0, v, grad);
    }
    return 0.0;
}

void check(const HdmaProblem& p) {
    p.cfg.validate();
    require(!p.directions.empty(), "HDMA needs at least one direction");
    require(p.tx_power > 0.0, "transmit power must be positive");
    require(p.alpha0 >= 0.0, "alpha0 must be non-negative");
}

struct Attempt {
    bool feasible = true;
    double value = -inf;
    detail::AscentResult result;
};

}  // namespace

std::vector<HolographicPattern> hdma_basis(const RhsConfig& cfg, const std::vector<Location>& directions) {
    cfg.validate();
    std::vector<HolographicPattern> basis;
    for (const auto& dir : directions) {
        const HolographicPattern full = pattern_for_location(cfg, dir);
        for (std::size_t l = 0; l < cfg.rows; ++l) {
            HolographicPattern p = HolographicPattern::zeros(cfg.element_count());
            for (std::size_t c = 0; c < cfg.cols; ++c) {
                const auto n = static_cast<Eigen::Index>(cfg.index(l, c));
                p.amplitudes(n) = full.amplitudes(n);
            }
            basis.push_back(std::move(p));
        }
    }
    return basis;
}

double hdma_objective_value(const HdmaProblem& problem, const HolographicPattern& pattern) {
    check(problem);
    const auto maps = direction_maps(problem);
    const auto forms = detail::make_forms(maps, {}, 0);
    if (problem.objective == HdmaObjective::min_power) {
        double lo = inf;
        for (const auto& q : forms.power) lo = std::min(lo, pattern.amplitudes.dot(q * pattern.amplitudes));
        return lo;
    }
    return objective(problem, forms, pattern.amplitudes, nullptr);
}

HdmaResult hdma_weights(const HdmaProblem& problem, const SolveOptions& options) {
    check(problem);
    const RhsConfig& cfg = problem.cfg;
    HdmaResult out;
    out.basis = hdma_basis(cfg, problem.directions);
    const auto s_count = static_cast<Eigen::Index>(out.basis.size());
    const auto n = static_cast<Eigen::Index>(cfg.element_count());
    Mat basis(n, s_count);
    for (Eigen::Index s = 0; s < s_count; ++s) basis.col(s) = out.basis[static_cast<std::size_t>(s)].amplitudes;

    std::vector<CMat> maps = direction_maps(problem);
    for (auto& m : maps) m = m * basis.cast<cd>();
    const auto forms = detail::make_forms(maps, {}, 0);
    const Vec eta = leakage_weights(cfg);
    const auto rows = cfg.rows;

    detail::SmoothProblem sp;
    sp.objective = [&](const Vec& z, Vec* g) { return objective(problem, forms, z, g); };
    // Weights of basis s act on row s % L only, so each row is scaled on its own.
    sp.project = [&](Vec& z) {
        z = z.cwiseMax(0.0);
        const Vec psi = basis * z;
        Vec peak = Vec::Zero(static_cast<Eigen::Index>(rows));
        Vec load = Vec::Zero(static_cast<Eigen::Index>(rows));
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto r = static_cast<Eigen::Index>(cfg.row_of(static_cast<std::size_t>(i)));
            peak(r) = std::max(peak(r), psi(i));
            load(r) += eta(i) * psi(i) * psi(i);
        }
        for (Eigen::Index s = 0; s < z.size(); ++s) {
            const auto r = s % static_cast<Eigen::Index>(rows);
            double f = 1.0;
            if (peak(r) > 1.0) f = std::min(f, 1.0 / peak(r));
            if (load(r) > 1.0) f = std::min(f, std::sqrt(1.0 / load(r)));
            if (f < 1.0) z(s) *= f * (1.0 - 1e-12);
        }
    };
    detail::AscentOptions ao;
    ao.max_iter = options.max_iter;
    ao.feas_tol = options.tol;

    std::function<Attempt(std::size_t)> attempt = [&](std::size_t i) {
        Vec z0;
        if (i < options.warm_starts.size()) {
            z0 = options.warm_starts[i];
            require(z0.size() == s_count, "warm start size mismatch");
        } else {
            Rng rng = child_rng(options.seed, i);
            z0 = uniform_vector(rng, s_count);
        }
        Attempt a;
        a.result = detail::ascend(sp, z0, ao);
        a.value = a.result.value;
        return a;
    };
    std::size_t used = 0;
    const auto best = detail::best_of_restarts<Attempt>(std::max<std::size_t>(options.restarts, 1), attempt, &used);
    out.weights = best->result.x;
    const auto sup = superpose_patterns(out.basis, out.weights);
    SolveReport& r = out.report;
    r.pattern = sup.pattern;
    r.surfaces = {r.pattern};
    r.digital = CMat::Identity(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows)) *
                std::sqrt(problem.tx_power / static_cast<double>(rows));
    r.window = ApertureWindow::full(cfg);
    r.objective_trace = best->result.trace;
    r.objective = hdma_objective_value(problem, r.pattern);
    r.min_leakage_slack = leakage_margins(cfg, r.pattern, r.window).minCoeff();
    r.feasible = r.pattern.in_box() && r.min_leakage_slack >= -leakage_tolerance;
    r.seed = options.seed;
    r.restarts_used = used;
    r.metrics.emplace_back("dimension", static_cast<double>(s_count));
    r.metrics.emplace_back("rescaled", sup.rescaled ? 1.0 : 0.0);
    return out;
}

SolveReport hdma_elementwise(const HdmaProblem& problem, const SolveOptions& options) {
    check(problem);
    const RhsConfig& cfg = problem.cfg;
    const auto forms = detail::make_forms(direction_maps(problem), {}, 0);
    const auto set = detail::FeasibleSet::surface(cfg, ApertureWindow::full(cfg), 1.0);
    const auto n = static_cast<Eigen::Index>(cfg.element_count());
    detail::SmoothProblem sp;
    sp.objective = [&](const Vec& v, Vec* g) { return objective(problem, forms, v, g); };
    sp.project = [&](Vec& v) { set.project(v); };
    detail::AscentOptions ao;
    ao.max_iter = options.max_iter;
    ao.feas_tol = options.tol;
    std::function<Attempt(std::size_t)> attempt = [&](std::size_t i) {
        Vec x0;
        if (i < options.warm_starts.size()) {
            x0 = options.warm_starts[i];
            require(x0.size() == n, "warm start size mismatch");
        } else {
            Rng rng = child_rng(options.seed, i);
            x0 = uniform_vector(rng, n);
        }
        Attempt a;
        a.result = detail::ascend(sp, x0, ao);
        a.value = hdma_objective_value(problem, HolographicPattern(a.result.x));
        return a;
    };
    std::size_t used = 0;
    const auto best = detail::best_of_restarts<Attempt>(std::max<std::size_t>(options.restarts, 1), attempt, &used);
    SolveReport r;
    r.pattern = HolographicPattern(best->result.x);
    r.surfaces = {r.pattern};
    r.digital = CMat::Identity(static_cast<Eigen::Index>(cfg.rows), static_cast<Eigen::Index>(cfg.rows)) *
                std::sqrt(problem.tx_power / static_cast<double>(cfg.rows));
    r.window = ApertureWindow::full(cfg);
    r.objective_trace = best->result.trace;
    r.objective = best->value;
    r.min_leakage_slack = set.min_slack(best->result.x);
    r.feasible = set.in_box(best->result.x) && r.min_leakage_slack >= -leakage_tolerance;
    r.seed = options.seed;
    r.restarts_used = used;
    return r;
}

}  // namespace holobeam
