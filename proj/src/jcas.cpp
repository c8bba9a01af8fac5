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

using detail::BlockForms;
using detail::make_forms;
using detail::utility;


struct State {
    Vec psi;
    CMat b;
};

struct Setup {
    const JcasProblem* problem = nullptr;
    CMat f;                  // propagation
    Vec d;                   // window mask
    std::vector<CVec> targets;
    std::vector<CVec> users;
    std::size_t streams = 0;  // U + L
    detail::FeasibleSet set;
};

std::vector<CMat> psi_maps(const Setup& s, const CMat& b, const std::vector<CVec>& probes) {
    const CMat fb = s.f * b;  // N x K
    std::vector<CMat> out;
    for (const auto& p : probes) out.push_back(fb.transpose() * p.cwiseProduct(s.d.cast<cd>()).asDiagonal());
    return out;
}

std::vector<CMat> b_maps(const Setup& s, const Vec& psi, const std::vector<CVec>& probes) {
    const auto l = s.f.cols();
    const auto k = static_cast<Eigen::Index>(s.streams);
    std::vector<CMat> out;
    for (const auto& p : probes) {
        const CVec m = s.f.transpose() * (psi.cwiseProduct(s.d).cast<cd>().cwiseProduct(p));  // L
        CMat a = CMat::Zero(k, 2 * l * k);
        for (Eigen::Index c = 0; c < k; ++c) {
            a.block(c, c * l, 1, l) = m.transpose();
            a.block(c, l * k + c * l, 1, l) = cd(0.0, 1.0) * m.transpose();
        }
        out.push_back(std::move(a));
    }
    return out;
}

Vec b_to_vec(const CMat& b) {
    const auto n = b.size();
    Vec v(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = b.data()[i].real();
        v(n + i) = b.data()[i].imag();
    }
    return v;
}

CMat vec_to_b(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
    CMat b(rows, cols);
    const auto n = b.size();
    for (Eigen::Index i = 0; i < n; ++i) b.data()[i] = cd(v(i), v(n + i));
    return b;
}

struct Evaluation {
    double utility = -inf;
    double slack = inf;  // smallest relative SINR-floor / band slack
    RadarUtility radar;
    std::vector<double> sinr;
};

Evaluation evaluate(const Setup& s, const State& st) {
    const JcasProblem& p = *s.problem;
    Beamformer bf(s.f, HolographicPattern(st.psi));
    Evaluation e;
    e.radar = radar_utility(bf, p.cfg, p.window, st.b, p.radar);
    e.utility = e.radar.utility;
    const auto u_count = static_cast<Eigen::Index>(p.users.size());
    for (Eigen::Index u = 0; u < u_count; ++u) {
        const auto br = sinr(p.users[static_cast<std::size_t>(u)].channel, bf, p.cfg, p.window, st.b.leftCols(u_count),
                             st.b.rightCols(st.b.cols() - u_count), static_cast<std::size_t>(u), p.noise_power);
        e.sinr.push_back(br.sinr());
        const double floor = p.users[static_cast<std::size_t>(u)].sinr_floor;
        if (floor > 0.0) e.slack = std::min(e.slack, br.sinr() / floor - 1.0);
    }
    const double p1 = e.radar.powers.front();
    for (std::size_t j = 1; j < p.radar.bands.size(); ++j) {
        const auto [lo, hi] = p.radar.bands[j];
        const double ratio = p1 > 0.0 ? e.radar.powers[j] / p1 : inf;
        e.slack = std::min(e.slack, (ratio - lo) / std::max(lo, 1.0));
        e.slack = std::min(e.slack, (hi - ratio) / std::max(hi, 1.0));
    }
    return e;
}

// Constraints of one block, each expressed as a relative slack.
void add_constraints(const JcasProblem& p, const BlockForms& f, detail::SmoothProblem& sp) {
    for (std::size_t u = 0; u < p.users.size(); ++u) {
        const double floor = p.users[u].sinr_floor;
        if (!(floor > 0.0)) continue;
        const Mat* sig = &f.user_signal[u];
        const Mat* itf = &f.user_interference[u];
        const double noise = p.noise_power;
        sp.constraints.push_back([sig, itf, floor, noise](const Vec& v, Vec* g) {
            const Vec sv = *sig * v;
            const Vec iv = *itf * v;
            const double num = v.dot(sv);
            const double den = floor * (v.dot(iv) + noise);
            if (g) *g = (2.0 * sv * den - num * floor * 2.0 * iv) / (den * den);
            return num / den - 1.0;
        });
    }
    for (std::size_t j = 1; j < p.radar.bands.size(); ++j) {
        const auto [lo, hi] = p.radar.bands[j];
        const Mat* pj = &f.power[j];
        const Mat* p1 = &f.power[0];
        auto ratio = [pj, p1](const Vec& v, Vec* g) {
            const Vec a = *pj * v;
            const Vec b = *p1 * v;
            const double num = v.dot(a);
            const double den = std::max(v.dot(b), 1e-300);
            if (g) *g = (2.0 * a * den - num * 2.0 * b) / (den * den);
            return num / den;
        };
        const double slo = std::max(lo, 1.0);
        const double shi = std::max(hi, 1.0);
        sp.constraints.push_back([ratio, lo, slo](const Vec& v, Vec* g) {
            const double r = ratio(v, g);
            if (g) *g /= slo;
            return (r - lo) / slo;
        });
        sp.constraints.push_back([ratio, hi, shi](const Vec& v, Vec* g) {
            const double r = ratio(v, g);
            if (g) *g /= -shi;
            return (hi - r) / shi;
        });
    }
}

struct Run {
    bool feasible = false;
    double value = -inf;
    State state;
    std::vector<double> trace;
    Evaluation eval;
};

Run run_ao(const Setup& s, State st, const SolveOptions& options) {
    const JcasProblem& p = *s.problem;
    detail::AscentOptions ao;
    ao.max_iter = options.max_iter;
    ao.feas_tol = options.tol;
    const auto l = s.f.cols();
    const auto k = static_cast<Eigen::Index>(s.streams);
    const double pt = p.tx_power;

    Run run;
    Evaluation cur = evaluate(s, st);
    auto accept = [&](const Evaluation& cand) {
        const bool f0 = cur.slack >= -options.tol;
        const bool f1 = cand.slack >= -options.tol;
        if (f1 && !f0) return true;
        if (!f1) return !f0 && cand.slack > cur.slack;
        return cand.utility >= cur.utility;
    };
    if (cur.slack >= -options.tol) run.trace.push_back(cur.utility);
    int calm = 0;
    for (std::size_t round = 0; round < options.rounds; ++round) {
        const double before = cur.utility;
        {
            const BlockForms f = make_forms(psi_maps(s, st.b, s.targets), psi_maps(s, st.b, s.users), p.users.size());
            detail::SmoothProblem sp;
            sp.objective = [&f, &p](const Vec& v, Vec* g) { return utility(f, p.radar.alpha0, v, g); };
            sp.project = [&s](Vec& v) { s.set.project(v); };
            add_constraints(p, f, sp);
            const auto r = detail::ascend(sp, st.psi, ao);
            State cand{r.x, st.b};
            const Evaluation e = evaluate(s, cand);
            if (accept(e)) {
                st = std::move(cand);
                cur = e;
            }
        }
        {
            const BlockForms f = make_forms(b_maps(s, st.psi, s.targets), b_maps(s, st.psi, s.users), p.users.size());
            detail::SmoothProblem sp;
            sp.objective = [&f, &p](const Vec& v, Vec* g) { return utility(f, p.radar.alpha0, v, g); };
            sp.project = [pt](Vec& v) {
                const double nv = v.norm();
                if (nv > 0.0)
                    v *= std::sqrt(pt) / nv;
                else
                    v.setConstant(std::sqrt(pt / static_cast<double>(v.size())));
            };
            add_constraints(p, f, sp);
            const auto r = detail::ascend(sp, b_to_vec(st.b), ao);
            State cand{st.psi, vec_to_b(r.x, l, k)};
            const Evaluation e = evaluate(s, cand);
            if (accept(e)) {
                st = std::move(cand);
                cur = e;
            }
        }
        if (cur.slack >= -options.tol) {
            run.trace.push_back(cur.utility);
            const double rel = std::abs(cur.utility - before) / std::max(std::abs(cur.utility), 1e-300);
            calm = rel < options.tol ? calm + 1 : 0;
            if (calm >= 3) break;
        }
    }
    run.feasible = cur.slack >= -options.tol;
    run.value = cur.utility;
    run.state = std::move(st);
    run.eval = cur;
    return run;
}

}  // namespace

SolveReport jcas_transmit(const JcasProblem& problem, const SolveOptions& options) {
    problem.cfg.validate();
    problem.window.check(problem.cfg);
    problem.radar.validate();
    require(problem.tx_power > 0.0 && problem.noise_power > 0.0, "power and noise must be positive");
    for (const auto& u : problem.users) {
        require(static_cast<std::size_t>(u.channel.size()) == problem.cfg.element_count(),
                "user channel length must equal element count");
        require(u.sinr_floor >= 0.0, "SINR floors must be non-negative");
    }
    Setup s;
    s.problem = &problem;
    s.f = build_propagation_matrix(problem.cfg);
    s.d = problem.window.mask(problem.cfg);
    for (const auto& dir : problem.radar.directions) s.targets.push_back(steering(problem.cfg, dir));
    for (const auto& u : problem.users) s.users.push_back(u.channel);
    s.streams = problem.users.size() + problem.cfg.rows;
    s.set = detail::FeasibleSet::surface(problem.cfg, problem.window, 1.0);
    const auto n = static_cast<Eigen::Index>(problem.cfg.element_count());
    const auto l = static_cast<Eigen::Index>(problem.cfg.rows);
    const auto k = static_cast<Eigen::Index>(s.streams);

    std::function<Run(std::size_t)> attempt = [&](std::size_t i) {
        Rng rng = child_rng(options.seed, i);
        State st;
        st.psi = i < options.warm_starts.size() ? options.warm_starts[i] : uniform_vector(rng, n);
        s.set.project(st.psi);
        st.b = complex_gaussian_matrix(rng, l, k);
        st.b *= std::sqrt(problem.tx_power) / st.b.norm();
        return run_ao(s, std::move(st), options);
    };
    std::size_t used = 0;
    const auto best = detail::best_of_restarts<Run>(std::max<std::size_t>(options.restarts, 1), attempt, &used);

    SolveReport report;
    report.seed = options.seed;
    report.restarts_used = used;
    report.window = problem.window;
    if (!best) {
        report.feasible = false;
        report.status = "infeasible";
        report.pattern = HolographicPattern::zeros(problem.cfg.element_count());
        return report;
    }
    report.pattern = HolographicPattern(best->state.psi);
    report.digital = best->state.b;
    report.surfaces = {report.pattern};
    report.objective = best->value;
    report.objective_trace = best->trace;
    report.feasible = true;
    report.min_leakage_slack = s.set.min_slack(best->state.psi);
    report.min_constraint_slack = best->eval.slack;
    report.metrics.emplace_back("utility", best->eval.radar.utility);
    report.metrics.emplace_back("average_power", best->eval.radar.average_power);
    report.metrics.emplace_back("rmsc", best->eval.radar.rmsc);
    for (std::size_t j = 0; j < best->eval.radar.powers.size(); ++j)
        report.metrics.emplace_back("power_" + std::to_string(j), best->eval.radar.powers[j]);
    for (std::size_t u = 0; u < best->eval.sinr.size(); ++u)
        report.metrics.emplace_back("sinr_" + std::to_string(u), best->eval.sinr[u]);
    return report;
}

}  // namespace holobeam
