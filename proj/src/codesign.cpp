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

#include "feasible.hpp"
#include "fractional.hpp"
#include "holobeam/beamopt.hpp"
#include "holobeam/error.hpp"
#include "holobeam/random.hpp"
#include "holobeam/wavefield.hpp"
#include "restarts.hpp"

namespace holobeam {
namespace {

using detail::FractionalBlock;
using detail::RatioFloor;
using detail::RatioGroup;
using detail::RatioTerm;

// Complex map of vec(B) (column-major, L x K) onto one K-vector of
// probe^T B, lifted to the real parameter [Re vec(B); Im vec(B)].
CMat lift_b_map(const CVec& m, Eigen::Index k) {
    const auto l = m.size();
    CMat a = CMat::Zero(k, 2 * l * k);
    for (Eigen::Index c = 0; c < k; ++c) {
        a.block(c, c * l, 1, l) = m.transpose();
        a.block(c, l * k + c * l, 1, l) = cd(0.0, 1.0) * m.transpose();
    }
    return a;
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

CMat stack(const std::vector<CMat>& parts, Eigen::Index cols) {
    Eigen::Index rows = 0;
    for (const auto& p : parts) rows += p.rows();
    CMat out(rows, cols);
    Eigen::Index r = 0;
    for (const auto& p : parts) {
        out.middleRows(r, p.rows()) = p;
        r += p.rows();
    }
    return out;
}

struct Setup {
    const CodesignProblem* p = nullptr;
    CMat ft, fr;
    std::vector<CVec> at, ar;
    std::vector<cd> beta;
    Eigen::Index k = 0;
    detail::FeasibleSet set_t, set_r;
};

struct Derived {
    std::vector<CVec> cr;                 // M_r^T a_r,j (L_r)
    std::vector<Eigen::RowVectorXcd> t;   // a_t,j^T M_t B (K)
};

Derived derive(const Setup& s, const TransceiverState& st) {
    Derived d;
    const CMat mt = st.tx.amplitudes.cast<cd>().asDiagonal() * s.ft;
    const CMat mr = st.rx.amplitudes.cast<cd>().asDiagonal() * s.fr;
    for (std::size_t j = 0; j < s.at.size(); ++j) {
        d.cr.push_back(mr.transpose() * s.ar[j]);
        d.t.push_back(s.at[j].transpose() * mt * st.digital);
    }
    return d;
}

double noise_of(const Setup& s, const TransceiverState& st, const CVec& w) {
    const CMat mr = st.rx.amplitudes.cast<cd>().asDiagonal() * s.fr;
    return s.p->noise_ext * (mr * w.conjugate()).squaredNorm() + s.p->noise_int * w.squaredNorm();
}

std::vector<double> target_sinr(const Setup& s, const TransceiverState& st) {
    const Derived d = derive(s, st);
    const std::size_t j_count = s.at.size();
    std::vector<double> out(j_count);
    for (std::size_t j = 0; j < j_count; ++j) {
        const CVec w = st.filters.col(static_cast<Eigen::Index>(j));
        const Eigen::RowVectorXcd sig = s.beta[j] * w.dot(d.cr[j]) * d.t[j];
        Eigen::RowVectorXcd itf = Eigen::RowVectorXcd::Zero(s.k);
        for (std::size_t i = 0; i < j_count; ++i)
            if (i != j) itf += s.beta[i] * w.dot(d.cr[i]) * d.t[i];
        const double den = itf.squaredNorm() + noise_of(s, st, w);
        out[j] = den > 0.0 ? sig.squaredNorm() / den : 0.0;
    }
    return out;
}

std::vector<double> user_sinr(const Setup& s, const TransceiverState& st) {
    const CMat mt = st.tx.amplitudes.cast<cd>().asDiagonal() * s.ft;
    std::vector<double> out;
    for (std::size_t u = 0; u < s.p->users.size(); ++u) {
        const Eigen::RowVectorXcd g = s.p->users[u].channel.transpose() * mt * st.digital;
        const double sig = std::norm(g(static_cast<Eigen::Index>(u)));
        out.push_back(sig / (g.squaredNorm() - sig + s.p->comm_noise));
    }
    return out;
}

// Max generalised eigenvector of (y y^H, C): w = C^{-1} y, unit norm.
void update_filters(const Setup& s, TransceiverState& st) {
    const Derived d = derive(s, st);
    const std::size_t j_count = s.at.size();
    const auto lr = s.fr.cols();
    const CMat mr = st.rx.amplitudes.cast<cd>().asDiagonal() * s.fr;
    const CMat base = s.p->noise_ext * (mr.transpose() * mr.conjugate()) + s.p->noise_int * CMat::Identity(lr, lr);
    st.filters.resize(lr, static_cast<Eigen::Index>(j_count));
    for (std::size_t j = 0; j < j_count; ++j) {
        CMat x = CMat::Zero(lr, s.k);
        for (std::size_t i = 0; i < j_count; ++i)
            if (i != j) x += s.beta[i] * d.cr[i] * d.t[i];
        const CMat c = base + x * x.adjoint();
        CVec w = c.completeOrthogonalDecomposition().solve(d.cr[j]);
        if (!(w.norm() > 0.0) || !w.allFinite()) w = d.cr[j];
        if (w.norm() > 0.0) w /= w.norm();
        st.filters.col(static_cast<Eigen::Index>(j)) = w;
    }
}

// --- block builders --------------------------------------------------------

std::vector<RatioFloor> user_floors_psi(const Setup& s, const TransceiverState& st) {
    std::vector<RatioFloor> floors;
    const CMat fb = s.ft * st.digital;
    for (std::size_t u = 0; u < s.p->users.size(); ++u) {
        const CMat a = fb.transpose() * s.p->users[u].channel.asDiagonal();  // K x N_t
        RatioFloor f;
        f.term.num = a.row(static_cast<Eigen::Index>(u));
        std::vector<CMat> rest;
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            if (r != static_cast<Eigen::Index>(u)) rest.push_back(a.row(r));
        f.term.den = stack(rest, a.cols());
        f.term.den_const = s.p->comm_noise;
        f.floor = s.p->users[u].sinr_floor;
        floors.push_back(std::move(f));
    }
    return floors;
}

std::vector<RatioFloor> user_floors_b(const Setup& s, const TransceiverState& st) {
    std::vector<RatioFloor> floors;
    const CMat mt = st.tx.amplitudes.cast<cd>().asDiagonal() * s.ft;
    for (std::size_t u = 0; u < s.p->users.size(); ++u) {
        const CMat a = lift_b_map(mt.transpose() * s.p->users[u].channel, s.k);
        RatioFloor f;
        f.term.num = a.row(static_cast<Eigen::Index>(u));
        std::vector<CMat> rest;
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            if (r != static_cast<Eigen::Index>(u)) rest.push_back(a.row(r));
        f.term.den = stack(rest, a.cols());
        f.term.den_const = s.p->comm_noise;
        f.floor = s.p->users[u].sinr_floor;
        floors.push_back(std::move(f));
    }
    return floors;
}

FractionalBlock tx_block(const Setup& s, const TransceiverState& st) {
    const Derived d = derive(s, st);
    const CMat fb = s.ft * st.digital;
    std::vector<CMat> a;
    for (const auto& at : s.at) a.push_back(fb.transpose() * at.asDiagonal());
    FractionalBlock block;
    for (std::size_t j = 0; j < s.at.size(); ++j) {
        const CVec w = st.filters.col(static_cast<Eigen::Index>(j));
        RatioTerm t;
        t.num = s.beta[j] * w.dot(d.cr[j]) * a[j];
        t.den = CMat::Zero(s.k, s.ft.rows());
        for (std::size_t i = 0; i < s.at.size(); ++i)
            if (i != j) t.den += s.beta[i] * w.dot(d.cr[i]) * a[i];
        t.den_const = noise_of(s, st, w);
        block.groups.push_back(RatioGroup{{t}});
    }
    block.floors = user_floors_psi(s, st);
    block.project = [&s](Vec& v) { s.set_t.project(v); };
    return block;
}

FractionalBlock rx_block(const Setup& s, const TransceiverState& st) {
    const Derived d = derive(s, st);
    FractionalBlock block;
    const auto nr = s.fr.rows();
    for (std::size_t j = 0; j < s.at.size(); ++j) {
        const CVec w = st.filters.col(static_cast<Eigen::Index>(j));
        // w^H c_r,i = e_i^T psi_r with e_i = diag(a_r,i) F_r conj(w).
        const CVec fw = s.fr * w.conjugate();
        auto e = [&](std::size_t i) -> Eigen::RowVectorXcd { return s.ar[i].cwiseProduct(fw).transpose(); };
        RatioTerm t;
        t.num = s.beta[j] * d.t[j].transpose() * e(j);
        CMat itf = CMat::Zero(s.k, nr);
        for (std::size_t i = 0; i < s.at.size(); ++i)
            if (i != j) itf += s.beta[i] * d.t[i].transpose() * e(i);
        const CMat noise = std::sqrt(s.p->noise_ext) * CMat(fw.asDiagonal());
        t.den = stack({itf, noise}, nr);
        t.den_const = s.p->noise_int * w.squaredNorm();
        block.groups.push_back(RatioGroup{{t}});
    }
    block.project = [&s](Vec& v) { s.set_r.project(v); };
    return block;
}

FractionalBlock b_block(const Setup& s, const TransceiverState& st) {
    const Derived d = derive(s, st);
    const CMat mt = st.tx.amplitudes.cast<cd>().asDiagonal() * s.ft;
    std::vector<CMat> a;
    for (const auto& at : s.at) a.push_back(lift_b_map(mt.transpose() * at, s.k));
    FractionalBlock block;
    for (std::size_t j = 0; j < s.at.size(); ++j) {
        const CVec w = st.filters.col(static_cast<Eigen::Index>(j));
        RatioTerm t;
        t.num = s.beta[j] * w.dot(d.cr[j]) * a[j];
        t.den = CMat::Zero(a[j].rows(), a[j].cols());
        for (std::size_t i = 0; i < s.at.size(); ++i)
            if (i != j) t.den += s.beta[i] * w.dot(d.cr[i]) * a[i];
        t.den_const = noise_of(s, st, w);
        block.groups.push_back(RatioGroup{{t}});
    }
    block.floors = user_floors_b(s, st);
    const double pt = s.p->tx_power;
    block.project = [pt](Vec& v) {
        const double n2 = v.squaredNorm();
        if (n2 > pt) v *= std::sqrt(pt / n2);
    };
    return block;
}

// Same blocks with the user ratios (scaled by their floors) as objective.
FractionalBlock as_feasibility(FractionalBlock block) {
    FractionalBlock f;
    for (auto& fl : block.floors) {
        if (!(fl.floor > 0.0)) continue;
        fl.term.weight = 1.0 / fl.floor;
        f.groups.push_back(RatioGroup{{fl.term}});
    }
    f.project = block.project;
    return f;
}

void fill_b(TransceiverState& st, const Vec& v, const Setup& s) {
    st.digital = vec_to_b(v, s.ft.cols(), s.k);
    const double n = st.digital.norm();
    if (n > 0.0) st.digital *= std::sqrt(s.p->tx_power) / n;
}

double floor_slack(const Setup& s, const TransceiverState& st) {
    const auto r = user_sinr(s, st);
    double slack = inf;
    for (std::size_t u = 0; u < r.size(); ++u)
        if (s.p->users[u].sinr_floor > 0.0) slack = std::min(slack, r[u] / s.p->users[u].sinr_floor - 1.0);
    return slack;
}

double min_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()); }

struct Run {
    bool feasible = false;
    double value = -inf;
    TransceiverState state;
    std::vector<double> trace;
};

Run run_ao(const Setup& s, TransceiverState st, const SolveOptions& options) {
    detail::AscentOptions ao;
    ao.max_iter = options.max_iter;
    ao.feas_tol = options.tol;
    Run run;
    update_filters(s, st);

    // Phase 0: reach the user floors.
    for (std::size_t round = 0; round < options.rounds && floor_slack(s, st) < -options.tol; ++round) {
        {
            const FractionalBlock f = as_feasibility(tx_block(s, st));
            st.tx.amplitudes = detail::improve_block(f, st.tx.amplitudes, ao);
        }
        {
            const FractionalBlock f = as_feasibility(b_block(s, st));
            fill_b(st, detail::improve_block(f, b_to_vec(st.digital), ao), s);
        }
        update_filters(s, st);
    }
    if (floor_slack(s, st) < -options.tol) {
        run.state = std::move(st);
        return run;
    }

    double tau = min_of(target_sinr(s, st));
    run.trace.push_back(tau);
    int calm = 0;
    for (std::size_t round = 0; round < options.rounds; ++round) {
        const double before = tau;
        update_filters(s, st);
        st.tx.amplitudes = detail::improve_block(tx_block(s, st), st.tx.amplitudes, ao);
        st.rx.amplitudes = detail::improve_block(rx_block(s, st), st.rx.amplitudes, ao);
        {
            const TransceiverState keep = st;
            fill_b(st, detail::improve_block(b_block(s, st), b_to_vec(st.digital), ao), s);
            if (floor_slack(s, st) < -options.tol) st = keep;
        }
        update_filters(s, st);
        tau = min_of(target_sinr(s, st));
        run.trace.push_back(tau);
        const double rel = (tau - before) / std::max(std::abs(tau), 1e-300);
        calm = rel < options.tol ? calm + 1 : 0;
        if (calm >= 3) break;
    }
    run.feasible = true;
    run.value = min_of(target_sinr(s, st));
    run.state = std::move(st);
    return run;
}

Setup make_setup(const CodesignProblem& p) {
    Setup s;
    s.p = &p;
    s.ft = build_propagation_matrix(p.tx);
    s.fr = build_propagation_matrix(p.rx);
    for (const auto& t : p.targets) {
        s.at.push_back(steering(p.tx, t.location));
        s.ar.push_back(steering(p.rx, t.location));
        s.beta.push_back(t.reflection);
    }
    s.k = static_cast<Eigen::Index>(p.users.size() + p.tx.rows);
    s.set_t = detail::FeasibleSet::surface(p.tx, ApertureWindow::full(p.tx), p.efficiency_tx);
    s.set_r = detail::FeasibleSet::surface(p.rx, ApertureWindow::full(p.rx), p.efficiency_rx);
    return s;
}

}  // namespace

void CodesignProblem::validate() const {
    tx.validate();
    rx.validate();
    require(!targets.empty(), "co-design needs at least one target");
    require(efficiency_tx > 0.0 && efficiency_tx <= 1.0, "transmit efficiency must lie in (0, 1]");
    require(efficiency_rx > 0.0 && efficiency_rx <= 1.0, "receive efficiency must lie in (0, 1]");
    require(tx_power > 0.0 && comm_noise > 0.0, "power and communication noise must be positive");
    require(noise_ext >= 0.0 && noise_int >= 0.0 && noise_ext + noise_int > 0.0, "sensing noise must be positive");
    for (const auto& u : users) {
        require(static_cast<std::size_t>(u.channel.size()) == tx.element_count(),
                "user channel length must equal transmit element count");
        require(u.sinr_floor >= 0.0, "SINR floors must be non-negative");
    }
}

std::vector<double> codesign_sinr(const CodesignProblem& problem, const TransceiverState& state) {
    problem.validate();
    const Setup s = make_setup(problem);
    require(state.tx.size() == problem.tx.element_count() && state.rx.size() == problem.rx.element_count(),
            "pattern sizes must match the surfaces");
    require(state.digital.rows() == s.ft.cols() && state.digital.cols() == s.k, "digital beamformer shape mismatch");
    require(state.filters.rows() == s.fr.cols() && state.filters.cols() == static_cast<Eigen::Index>(s.at.size()),
            "filter shape mismatch");
    return target_sinr(s, state);
}

SolveReport codesign_maxmin(const CodesignProblem& problem, const SolveOptions& options) {
    problem.validate();
    const Setup s = make_setup(problem);
    SolveReport report;
    report.seed = options.seed;
    report.window = ApertureWindow::full(problem.tx);

    bool degenerate = true;
    for (const auto& b : s.beta) degenerate = degenerate && std::abs(b) == 0.0;
    if (degenerate) {
        report.pattern = HolographicPattern::zeros(problem.tx.element_count());
        report.surfaces = {report.pattern, HolographicPattern::zeros(problem.rx.element_count())};
        report.digital = CMat::Zero(s.ft.cols(), s.k);
        report.filters = CMat::Zero(s.fr.cols(), static_cast<Eigen::Index>(s.at.size()));
        report.objective_trace = {0.0};
        report.feasible = true;
        report.status = "degenerate";
        report.min_leakage_slack = std::min(s.set_t.min_slack(report.pattern.amplitudes),
                                            s.set_r.min_slack(report.surfaces[1].amplitudes));
        report.metrics.emplace_back("tau", 0.0);
        return report;
    }

    const auto nt = static_cast<Eigen::Index>(problem.tx.element_count());
    const auto nr = static_cast<Eigen::Index>(problem.rx.element_count());
    std::function<Run(std::size_t)> attempt = [&](std::size_t i) {
        Rng rng = child_rng(options.seed, i);
        TransceiverState st;
        Vec pt = uniform_vector(rng, nt);
        Vec pr = uniform_vector(rng, nr);
        if (i < options.warm_starts.size()) pt = options.warm_starts[i];
        s.set_t.project(pt);
        s.set_r.project(pr);
        st.tx = HolographicPattern(pt);
        st.rx = HolographicPattern(pr);
        st.digital = complex_gaussian_matrix(rng, s.ft.cols(), s.k);
        st.digital *= std::sqrt(problem.tx_power) / st.digital.norm();
        return run_ao(s, std::move(st), options);
    };
    std::size_t used = 0;
    const auto best = detail::best_of_restarts<Run>(std::max<std::size_t>(options.restarts, 1), attempt, &used);
    report.restarts_used = used;
    if (!best) {
        report.feasible = false;
        report.status = "infeasible";
        report.pattern = HolographicPattern::zeros(problem.tx.element_count());
        return report;
    }
    const TransceiverState& st = best->state;
    report.pattern = st.tx;
    report.surfaces = {st.tx, st.rx};
    report.digital = st.digital;
    report.filters = st.filters;
    report.objective_trace = best->trace;
    report.objective = best->value;
    report.feasible = true;
    report.min_leakage_slack = std::min(s.set_t.min_slack(st.tx.amplitudes), s.set_r.min_slack(st.rx.amplitudes));
    report.min_constraint_slack = floor_slack(s, st);
    report.metrics.emplace_back("tau", best->value);
    const auto nu = target_sinr(s, st);
    for (std::size_t j = 0; j < nu.size(); ++j) report.metrics.emplace_back("sinr_" + std::to_string(j), nu[j]);
    const auto us = user_sinr(s, st);
    for (std::size_t u = 0; u < us.size(); ++u) report.metrics.emplace_back("user_sinr_" + std::to_string(u), us[u]);
    return report;
}

double max_comm_snr(const RhsConfig& cfg, const CVec& channel, double tx_power, double noise, double efficiency,
                    const SolveOptions& options) {
    cfg.validate();
    require(tx_power > 0.0 && noise > 0.0, "power and noise must be positive");
    require(efficiency > 0.0 && efficiency <= 1.0, "efficiency must lie in (0, 1]");
    const auto l = static_cast<Eigen::Index>(cfg.rows);
    const CMat b = CMat::Identity(l, l) * std::sqrt(tx_power);
    QcqpSpec spec = QcqpSpec::for_surface(cfg, ApertureWindow::full(cfg), radiated_power_form(cfg, channel, b) / noise);
    spec.row_cap.setConstant(efficiency);
    return solve_pattern_qcqp(spec, options).objective;
}

}  // namespace holobeam
