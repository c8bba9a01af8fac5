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
#include "holobeam/beamopt.hpp"
#include "holobeam/error.hpp"
#include "holobeam/random.hpp"
#include "restarts.hpp"

namespace holobeam {
namespace {

Mat real_form(const CMat& q) {
    const Mat a = q.real();
    return 0.5 * (a + a.transpose());
}

double constraint_scale(const QuadraticConstraint& c) {
    if (std::abs(c.bound) > 0.0 && std::isfinite(c.bound)) return std::abs(c.bound);
    return std::max(c.form.norm(), 1e-300);
}

bool vacuous(const QuadraticConstraint& c) {
    return (c.sense == Sense::at_most && c.bound == inf) || (c.sense == Sense::at_least && c.bound == -inf);
}

detail::FeasibleSet feasible_set(const QcqpSpec& spec) {
    detail::FeasibleSet s;
    s.lower = spec.lower;
    s.upper = spec.upper;
    s.weight = spec.leakage_weight;
    s.row = spec.leakage_row;
    s.cap = spec.row_cap;
    return s;
}

struct Attempt {
    bool feasible = false;
    double value = -inf;
    detail::AscentResult result;
};

}  // namespace

QcqpSpec QcqpSpec::for_surface(const RhsConfig& cfg, const ApertureWindow& window, CMat objective) {
    const auto set = detail::FeasibleSet::surface(cfg, window, 1.0);
    QcqpSpec spec;
    spec.objective = std::move(objective);
    spec.lower = set.lower;
    spec.upper = set.upper;
    spec.leakage_weight = set.weight;
    spec.leakage_row = set.row;
    spec.row_cap = set.cap;
    spec.validate();
    return spec;
}

void QcqpSpec::validate() const {
    const auto n = objective.rows();
    require(n >= 1 && objective.cols() == n, "objective must be a square form");
    auto hermitian = [](const CMat& q) { return (q - q.adjoint()).norm() <= 1e-9 * std::max(1.0, q.norm()); };
    require(hermitian(objective), "objective form must be Hermitian");
    for (const auto& c : constraints) {
        require(c.form.rows() == n && c.form.cols() == n, "constraint form size mismatch");
        require(hermitian(c.form), "constraint forms must be Hermitian");
        require(!std::isnan(c.bound), "constraint bound must not be NaN");
    }
    require(lower.size() == n && upper.size() == n, "box bounds size mismatch");
    require((lower.array() >= 0.0).all() && (upper.array() <= 1.0).all() && (lower.array() <= upper.array()).all(),
            "box must satisfy 0 <= lower <= upper <= 1");
    require(leakage_weight.size() == n && leakage_row.size() == static_cast<std::size_t>(n),
            "leakage weights size mismatch");
    require((leakage_weight.array() >= 0.0).all(), "leakage weights must be non-negative");
    for (auto r : leakage_row) require(static_cast<Eigen::Index>(r) < row_cap.size(), "leakage row out of range");
    require((row_cap.array() > 0.0).all(), "row caps must be positive");
}

double QcqpSpec::objective_value(const Vec& psi) const { return psi.dot(real_form(objective) * psi); }

double QcqpSpec::constraint_value(std::size_t i, const Vec& psi) const {
    require(i < constraints.size(), "constraint index out of range");
    return psi.dot(real_form(constraints[i].form) * psi);
}

double QcqpSpec::min_constraint_slack(const Vec& psi) const {
    double s = inf;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const auto& c = constraints[i];
        if (vacuous(c)) continue;
        const double v = constraint_value(i, psi);
        const double diff = c.sense == Sense::at_least ? v - c.bound : c.bound - v;
        s = std::min(s, diff / constraint_scale(c));
    }
    return s;
}

double QcqpSpec::min_leakage_slack(const Vec& psi) const { return feasible_set(*this).min_slack(psi); }

bool QcqpSpec::feasible(const Vec& psi, double tol) const {
    return psi.size() == objective.rows() && feasible_set(*this).in_box(psi) &&
           min_leakage_slack(psi) >= -leakage_tolerance && min_constraint_slack(psi) >= -tol;
}

CMat radiated_power_form(const RhsConfig& cfg, const CVec& probe, const CMat& digital) {
    const CMat f = build_propagation_matrix(cfg);
    require(probe.size() == f.rows(), "probe length must equal element count");
    require(digital.rows() == f.cols(), "digital beamformer rows must equal feed count");
    const CMat fb = f * digital;
    CMat q = CMat::Zero(f.rows(), f.rows());
    for (Eigen::Index k = 0; k < fb.cols(); ++k) {
        const CVec c = probe.cwiseProduct(fb.col(k));
        q += c.conjugate() * c.transpose();
    }
    return q;
}

double SolveReport::metric(const std::string& name) const {
    for (const auto& [k, v] : metrics)
        if (k == name) return v;
    fail(ErrorKind::argument, "unknown metric " + name);
}

double quadratic_transform(const CVec& lambda, const CVec& a, double g) {
    require(lambda.size() == a.size(), "auxiliary and numerator sizes differ");
    return 2.0 * std::real(lambda.dot(a)) - lambda.squaredNorm() * g;
}

SolveReport solve_pattern_qcqp(const QcqpSpec& spec, const SolveOptions& options) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.size());
    const auto set = feasible_set(spec);
    const Mat a0 = real_form(spec.objective);

    detail::SmoothProblem problem;
    problem.objective = [&a0](const Vec& x, Vec* g) {
        const Vec ax = a0 * x;
        if (g) *g = 2.0 * ax;
        return x.dot(ax);
    };
    problem.project = [&set](Vec& x) { set.project(x); };
    bool impossible = false;
    for (const auto& c : spec.constraints) {
        if (vacuous(c)) continue;
        if (c.sense == Sense::at_least && c.bound == inf) impossible = true;
        if (c.sense == Sense::at_most && c.bound == -inf) impossible = true;
        if (!std::isfinite(c.bound)) continue;
        const Mat a = real_form(c.form);
        const double sign = c.sense == Sense::at_least ? 1.0 : -1.0;
        const double scale = constraint_scale(c);
        const double bound = c.bound;
        problem.constraints.push_back([a, sign, scale, bound](const Vec& x, Vec* g) {
            const Vec ax = a * x;
            if (g) *g = (2.0 * sign / scale) * ax;
            return sign * (x.dot(ax) - bound) / scale;
        });
    }

    detail::AscentOptions ao;
    ao.max_iter = options.max_iter;
    ao.feas_tol = options.tol;

    SolveReport report;
    report.seed = options.seed;
    if (impossible) {
        report.feasible = false;
        report.status = "infeasible";
        report.pattern = HolographicPattern::zeros(spec.size());
        return report;
    }

    std::function<Attempt(std::size_t)> attempt = [&](std::size_t i) {
        Vec x0;
        if (i < options.warm_starts.size()) {
            x0 = options.warm_starts[i];
            require(x0.size() == n, "warm start size mismatch");
        } else {
            Rng rng = child_rng(options.seed, i);
            x0 = uniform_vector(rng, n);
        }
        Attempt out;
        out.result = detail::ascend(problem, x0, ao);
        const Vec& x = out.result.x;
        out.feasible = out.result.feasible && set.in_box(x) && set.min_slack(x) >= -leakage_tolerance &&
                       spec.min_constraint_slack(x) >= -options.tol;
        out.value = out.result.value;
        return out;
    };
    std::size_t used = 0;
    const auto best = detail::best_of_restarts<Attempt>(
        std::max<std::size_t>(options.restarts, 1), attempt, &used,
        [&report](const Attempt& a) { report.alternatives.emplace_back(a.result.x); });
    report.restarts_used = used;
    if (!best) {
        report.feasible = false;
        report.status = "infeasible";
        report.pattern = HolographicPattern::zeros(spec.size());
        return report;
    }
    const Vec& x = best->result.x;
    report.pattern = HolographicPattern(x);
    report.objective = spec.objective_value(x);
    report.objective_trace = best->result.trace;
    report.min_leakage_slack = set.min_slack(x);
    report.min_constraint_slack = spec.min_constraint_slack(x);
    report.feasible = true;
    report.surfaces = {report.pattern};
    return report;
}

OracleResult brute_force_oracle(const QcqpSpec& spec, std::size_t levels, std::size_t max_vars) {
    spec.validate();
    require(max_vars <= 8, "brute_force_oracle refuses more than 8 variables");
    require(spec.size() <= max_vars, "too many variables for exhaustive enumeration");
    require(levels >= 2, "quantization needs at least two levels");
    const std::size_t n = spec.size();
    const double steps = static_cast<double>(levels - 1);
    std::vector<std::size_t> digit(n, 0);
    Vec psi = Vec::Zero(static_cast<Eigen::Index>(n));
    OracleResult out;
    while (true) {
        ++out.evaluated;
        if (spec.feasible(psi, 1e-9)) {
            const double v = spec.objective_value(psi);
            if (!out.found || v > out.value) {
                out.found = true;
                out.value = v;
                out.pattern = HolographicPattern(psi);
            }
        }
        std::size_t k = 0;
        while (k < n && digit[k] + 1 == levels) {
            digit[k] = 0;
            psi(static_cast<Eigen::Index>(k)) = 0.0;
            ++k;
        }
        if (k == n) break;
        ++digit[k];
        psi(static_cast<Eigen::Index>(k)) = static_cast<double>(digit[k]) / steps;
    }
    return out;
}

namespace {
constexpr Eigen::Index pair_move_limit = 32;
constexpr Eigen::Index triple_move_limit = 8;
}  // namespace

HolographicPattern quantize_feasible(const QcqpSpec& spec, const HolographicPattern& pattern, std::size_t levels) {
    spec.validate();
    require(pattern.size() == spec.size(), "pattern length must match the spec");
    const double steps = static_cast<double>(levels - 1);
    const auto set = feasible_set(spec);
    Vec q = quantize_pattern(pattern, levels).amplitudes;
    auto snap_down = [&](double v) { return std::floor(v * steps + 1e-12) / steps; };
    auto snap_up = [&](double v) { return std::ceil(v * steps - 1e-12) / steps; };
    for (Eigen::Index i = 0; i < q.size(); ++i) q(i) = std::clamp(q(i), snap_up(spec.lower(i)), snap_down(spec.upper(i)));

    // Shed one level at a time from overloaded rows, cheapest loss first.
    while (set.min_slack(q) < -leakage_tolerance) {
        const Vec load = set.row_load(q);
        Eigen::Index pick = -1;
        double best = -inf;
        for (Eigen::Index i = 0; i < q.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(set.row[static_cast<std::size_t>(i)]);
            if (load(r) <= set.cap(r) + leakage_tolerance || q(i) - 1.0 / steps < spec.lower(i) - 1e-12 ||
                set.weight(i) <= 0.0)
                continue;
            Vec t = q;
            t(i) -= 1.0 / steps;
            const double v = spec.objective_value(t);
            if (v > best) {
                best = v;
                pick = i;
            }
        }
        if (pick < 0) break;
        q(pick) = std::max(0.0, q(pick) - 1.0 / steps);
    }

    auto violation = [&](const Vec& x) {
        double v = std::max(0.0, -set.min_slack(x) - leakage_tolerance) * 1e6;
        v += std::max(0.0, -spec.min_constraint_slack(x) - 1e-9);
        return v;
    };
    double cur_v = violation(q);
    double cur_f = spec.objective_value(q);
    auto accept = [&](const Vec& x) {
        const double v = violation(x);
        const double f = spec.objective_value(x);
        if (v < cur_v - 1e-15 || (v <= cur_v && f > cur_f * (1.0 + 1e-12) + 1e-300)) {
            cur_v = v;
            cur_f = f;
            return true;
        }
        return false;
    };
    auto level_ok = [&](Eigen::Index i, double lv) { return lv >= spec.lower(i) - 1e-12 && lv <= spec.upper(i) + 1e-12; };
    auto single_pass = [&] {
        bool any = false;
        for (bool changed = true; changed;) {
            changed = false;
            for (Eigen::Index i = 0; i < q.size(); ++i) {
                const double keep = q(i);
                for (std::size_t k = 0; k < levels; ++k) {
                    const double lv = static_cast<double>(k) / steps;
                    if (lv == keep || !level_ok(i, lv)) continue;
                    q(i) = lv;
                    if (accept(q)) {
                        changed = any = true;
                        break;
                    }
                    q(i) = keep;
                }
            }
        }
        return any;
    };
    // Joint moves on two elements let the support shift between grid points.
    auto pair_pass = [&] {
        for (Eigen::Index i = 0; i < q.size(); ++i)
            for (Eigen::Index j = i + 1; j < q.size(); ++j) {
                const double ki = q(i), kj = q(j);
                for (std::size_t a = 0; a < levels; ++a)
                    for (std::size_t b = 0; b < levels; ++b) {
                        const double li = static_cast<double>(a) / steps, lj = static_cast<double>(b) / steps;
                        if ((li == ki && lj == kj) || !level_ok(i, li) || !level_ok(j, lj)) continue;
                        q(i) = li;
                        q(j) = lj;
                        if (accept(q)) return true;
                        q(i) = ki;
                        q(j) = kj;
                    }
            }
        return false;
    };
    auto triple_pass = [&] {
        for (Eigen::Index i = 0; i < q.size(); ++i)
            for (Eigen::Index j = i + 1; j < q.size(); ++j)
                for (Eigen::Index m = j + 1; m < q.size(); ++m) {
                    const double ki = q(i), kj = q(j), km = q(m);
                    for (std::size_t a = 0; a < levels; ++a)
                        for (std::size_t b = 0; b < levels; ++b)
                            for (std::size_t c = 0; c < levels; ++c) {
                                q(i) = static_cast<double>(a) / steps;
                                q(j) = static_cast<double>(b) / steps;
                                q(m) = static_cast<double>(c) / steps;
                                if (level_ok(i, q(i)) && level_ok(j, q(j)) && level_ok(m, q(m)) && accept(q)) return true;
                                q(i) = ki;
                                q(j) = kj;
                                q(m) = km;
                            }
                }
        return false;
    };
    single_pass();
    if (q.size() <= pair_move_limit)
        for (;;) {
            if (pair_pass()) {
                single_pass();
                continue;
            }
            if (q.size() <= triple_move_limit && triple_pass()) {
                single_pass();
                continue;
            }
            break;
        }
    return HolographicPattern(std::move(q));
}

HolographicPattern quantize_feasible(const QcqpSpec& spec, const std::vector<HolographicPattern>& candidates,
                                     std::size_t levels) {
    require(!candidates.empty(), "need at least one candidate pattern");
    HolographicPattern best;
    double best_value = -inf;
    bool best_ok = false;
    for (const auto& c : candidates) {
        auto q = quantize_feasible(spec, c, levels);
        const bool ok = spec.feasible(q.amplitudes, 1e-9);
        const double v = spec.objective_value(q.amplitudes);
        if ((ok && !best_ok) || (ok == best_ok && v > best_value)) {
            best = std::move(q);
            best_value = v;
            best_ok = ok;
        }
    }
    return best;
}

}  // namespace holobeam
