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
using detail::RatioGroup;
using detail::RatioTerm;

CMat cyclic_shift(Eigen::Index length, std::size_t delay) {
    CMat t = CMat::Zero(length, length);
    for (Eigen::Index i = 0; i < length; ++i)
        t(i, (i + static_cast<Eigen::Index>(delay)) % length) = 1.0;
    return t;
}

struct Setup {
    const DistsenseProblem* p = nullptr;
    std::size_t tx_count = 0, rx_count = 0;
    std::vector<Eigen::Index> tx_offset, rx_offset;
    Eigen::Index tx_dim = 0, rx_dim = 0;
    // a_p^{jT} diag(psi_p) F_p S_p T^j = (tx_map[j][p] psi_p)^T, T x N_p
    std::vector<std::vector<CMat>> tx_map;
    // M_q^T a_q^j = rx_map[j][q] psi_q, L_q x N_q
    std::vector<std::vector<CMat>> rx_map;
    std::vector<Vec> rx_row_norm;  // ||F_q(n, :)|| per element
    double length = 0.0;           // waveform length T
    std::vector<std::size_t> targets;
    detail::FeasibleSet tx_set, rx_set;
};

Setup make_setup(const DistsenseProblem& p) {
    Setup s;
    s.p = &p;
    s.tx_count = p.tx.size();
    s.rx_count = p.rx.size();
    s.length = static_cast<double>(p.waveforms.front().cols());
    std::vector<CMat> ftx, frx;
    for (const auto& c : p.tx) {
        s.tx_offset.push_back(s.tx_dim);
        s.tx_dim += static_cast<Eigen::Index>(c.element_count());
        ftx.push_back(build_propagation_matrix(c));
        s.tx_set.append(detail::FeasibleSet::surface(c, ApertureWindow::full(c), 1.0));
    }
    for (const auto& c : p.rx) {
        s.rx_offset.push_back(s.rx_dim);
        s.rx_dim += static_cast<Eigen::Index>(c.element_count());
        frx.push_back(build_propagation_matrix(c));
        s.rx_row_norm.push_back(frx.back().rowwise().norm());
        s.rx_set.append(detail::FeasibleSet::surface(c, ApertureWindow::full(c), 1.0));
    }
    const auto len = p.waveforms.front().cols();
    for (std::size_t j = 0; j < p.scene.size(); ++j) {
        const auto& t = p.scene[j];
        const CMat shift = cyclic_shift(len, t.delay);
        std::vector<CMat> tm, rm;
        for (std::size_t q = 0; q < s.tx_count; ++q) {
            const CVec a = steering(p.tx[q], Location{t.tx_angles[q], 0.0, inf});
            tm.push_back((ftx[q] * p.waveforms[q] * shift).transpose() * a.asDiagonal());
        }
        for (std::size_t q = 0; q < s.rx_count; ++q) {
            const CVec a = steering(p.rx[q], Location{t.rx_angles[q], 0.0, inf});
            rm.push_back(frx[q].transpose() * a.asDiagonal());
        }
        s.tx_map.push_back(std::move(tm));
        s.rx_map.push_back(std::move(rm));
        if (!t.clutter) s.targets.push_back(j);
    }
    return s;
}

Vec segment(const Vec& v, Eigen::Index offset, Eigen::Index size) { return v.segment(offset, size); }

CMat place(const CMat& m, Eigen::Index offset, Eigen::Index dim) {
    CMat out = CMat::Zero(m.rows(), dim);
    out.middleCols(offset, m.cols()) = m;
    return out;
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

// Per (target, p, q) echo energy factors.
struct Energies {
    std::vector<std::vector<double>> x;  // [j][p] ||a^T M_p S_p T||^2
    std::vector<std::vector<double>> r;  // [j][q] ||M_q^T a_q||^2
    std::vector<double> noise;           // [q] sigma^2 T ||M_q||_F^2
};

Energies energies(const Setup& s, const Vec& vt, const Vec& vr) {
    Energies e;
    const auto& p = *s.p;
    for (std::size_t j = 0; j < p.scene.size(); ++j) {
        std::vector<double> xs, rs;
        for (std::size_t q = 0; q < s.tx_count; ++q) {
            const Vec psi = segment(vt, s.tx_offset[q], s.tx_map[j][q].cols());
            xs.push_back((s.tx_map[j][q] * psi.cast<cd>()).squaredNorm());
        }
        for (std::size_t q = 0; q < s.rx_count; ++q) {
            const Vec psi = segment(vr, s.rx_offset[q], s.rx_map[j][q].cols());
            rs.push_back((s.rx_map[j][q] * psi.cast<cd>()).squaredNorm());
        }
        e.x.push_back(std::move(xs));
        e.r.push_back(std::move(rs));
    }
    for (std::size_t q = 0; q < s.rx_count; ++q) {
        const Vec psi = segment(vr, s.rx_offset[q], s.rx_row_norm[q].size());
        e.noise.push_back(p.noise_power * s.length * psi.cwiseProduct(s.rx_row_norm[q]).squaredNorm());
    }
    return e;
}

std::vector<double> average_sinr(const Setup& s, const Vec& vt, const Vec& vr) {
    const auto& p = *s.p;
    const Energies e = energies(s, vt, vr);
    std::vector<double> out;
    const double pairs = static_cast<double>(s.tx_count * s.rx_count);
    for (auto j : s.targets) {
        double acc = 0.0;
        for (std::size_t a = 0; a < s.tx_count; ++a)
            for (std::size_t b = 0; b < s.rx_count; ++b) {
                const double sig = std::norm(p.scene[j].reflection) * e.x[j][a] * e.r[j][b];
                double den = e.noise[b];
                for (std::size_t i = 0; i < p.scene.size(); ++i)
                    if (i != j) den += std::norm(p.scene[i].reflection) * e.x[i][a] * e.r[i][b];
                acc += den > 0.0 ? sig / den : 0.0;
            }
        out.push_back(acc / pairs);
    }
    return out;
}

FractionalBlock tx_block(const Setup& s, const Vec& vr) {
    const auto& p = *s.p;
    const Energies e = energies(s, Vec::Zero(s.tx_dim), vr);
    const double w = 1.0 / static_cast<double>(s.tx_count * s.rx_count);
    FractionalBlock block;
    for (auto j : s.targets) {
        RatioGroup g;
        for (std::size_t a = 0; a < s.tx_count; ++a)
            for (std::size_t b = 0; b < s.rx_count; ++b) {
                RatioTerm t;
                t.weight = w;
                t.num = place(p.scene[j].reflection * std::sqrt(e.r[j][b]) * s.tx_map[j][a], s.tx_offset[a], s.tx_dim);
                std::vector<CMat> rows;
                for (std::size_t i = 0; i < p.scene.size(); ++i)
                    if (i != j)
                        rows.push_back(place(p.scene[i].reflection * std::sqrt(e.r[i][b]) * s.tx_map[i][a], s.tx_offset[a],
                                             s.tx_dim));
                t.den = rows.empty() ? CMat(0, s.tx_dim) : stack(rows, s.tx_dim);
                t.den_const = e.noise[b];
                g.terms.push_back(std::move(t));
            }
        block.groups.push_back(std::move(g));
    }
    block.project = [&s](Vec& v) { s.tx_set.project(v); };
    return block;
}

FractionalBlock rx_block(const Setup& s, const Vec& vt) {
    const auto& p = *s.p;
    const Energies e = energies(s, vt, Vec::Zero(s.rx_dim));
    const double w = 1.0 / static_cast<double>(s.tx_count * s.rx_count);
    FractionalBlock block;
    for (auto j : s.targets) {
        RatioGroup g;
        for (std::size_t a = 0; a < s.tx_count; ++a)
            for (std::size_t b = 0; b < s.rx_count; ++b) {
                RatioTerm t;
                t.weight = w;
                t.num = place(p.scene[j].reflection * std::sqrt(e.x[j][a]) * s.rx_map[j][b], s.rx_offset[b], s.rx_dim);
                std::vector<CMat> rows;
                for (std::size_t i = 0; i < p.scene.size(); ++i)
                    if (i != j)
                        rows.push_back(place(p.scene[i].reflection * std::sqrt(e.x[i][a]) * s.rx_map[i][b], s.rx_offset[b],
                                             s.rx_dim));
                const CMat noise = std::sqrt(p.noise_power * s.length) * CMat(s.rx_row_norm[b].cast<cd>().asDiagonal());
                rows.push_back(place(noise, s.rx_offset[b], s.rx_dim));
                t.den = stack(rows, s.rx_dim);
                g.terms.push_back(std::move(t));
            }
        block.groups.push_back(std::move(g));
    }
    block.project = [&s](Vec& v) { s.rx_set.project(v); };
    return block;
}

double min_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()); }

struct Run {
    bool feasible = true;
    double value = -inf;
    Vec vt, vr;
    std::vector<double> trace;
};

Run run_ao(const Setup& s, Vec vt, Vec vr, const SolveOptions& options) {
    detail::AscentOptions ao;
    ao.max_iter = options.max_iter;
    ao.feas_tol = options.tol;
    Run run;
    double tau = min_of(average_sinr(s, vt, vr));
    run.trace.push_back(tau);
    int calm = 0;
    for (std::size_t round = 0; round < options.rounds; ++round) {
        const double before = tau;
        vt = detail::improve_block(tx_block(s, vr), vt, ao);
        vr = detail::improve_block(rx_block(s, vt), vr, ao);
        tau = min_of(average_sinr(s, vt, vr));
        run.trace.push_back(tau);
        const double rel = (tau - before) / std::max(std::abs(tau), 1e-300);
        calm = rel < options.tol ? calm + 1 : 0;
        if (calm >= 3) break;
    }
    run.value = tau;
    run.vt = std::move(vt);
    run.vr = std::move(vr);
    return run;
}

}  // namespace

std::vector<CMat> orthogonal_waveforms(std::size_t subarrays, std::size_t feeds, std::size_t length) {
    require(subarrays >= 1 && feeds >= 1, "need at least one subarray and one feed");
    require(length >= subarrays * feeds, "waveform length must be at least P * L_t");
    const auto t = static_cast<Eigen::Index>(length);
    CMat dft(t, t);
    for (Eigen::Index r = 0; r < t; ++r)
        for (Eigen::Index c = 0; c < t; ++c)
            dft(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(length)),
                                   -2.0 * pi * static_cast<double>((r * c) % t) / static_cast<double>(length));
    std::vector<CMat> out;
    for (std::size_t p = 0; p < subarrays; ++p)
        out.push_back(dft.middleRows(static_cast<Eigen::Index>(p * feeds), static_cast<Eigen::Index>(feeds)));
    return out;
}

void DistsenseProblem::validate() const {
    require(!tx.empty() && !rx.empty(), "need at least one transmit and one receive subarray");
    for (const auto& c : tx) c.validate();
    for (const auto& c : rx) c.validate();
    require(noise_power > 0.0, "noise power must be positive");
    require(waveforms.size() == tx.size(), "one waveform per transmit subarray");
    const auto len = waveforms.front().cols();
    for (std::size_t p = 0; p < tx.size(); ++p) {
        require(waveforms[p].rows() == static_cast<Eigen::Index>(tx[p].rows), "waveform rows must equal feed count");
        require(waveforms[p].cols() == len, "waveforms must share one length");
    }
    for (std::size_t p = 0; p < tx.size(); ++p)
        for (std::size_t q = 0; q < tx.size(); ++q) {
            const CMat g = waveforms[p] * waveforms[q].adjoint();
            const CMat want = p == q ? CMat(CMat::Identity(g.rows(), g.cols())) : CMat(CMat::Zero(g.rows(), g.cols()));
            require((g - want).norm() <= 1e-9, "waveforms are not orthonormal across subarrays");
        }
    bool any_target = false;
    for (const auto& t : scene) {
        require(t.tx_angles.size() == tx.size() && t.rx_angles.size() == rx.size(), "one angle per subarray required");
        require(t.delay < static_cast<std::size_t>(len), "delay exceeds the waveform length");
        any_target = any_target || !t.clutter;
    }
    require(any_target, "scene needs at least one target");
}

std::vector<double> distsense_average_sinr(const DistsenseProblem& problem, const std::vector<HolographicPattern>& patterns) {
    problem.validate();
    const Setup s = make_setup(problem);
    require(patterns.size() == s.tx_count + s.rx_count, "one pattern per subarray required");
    Vec vt(s.tx_dim), vr(s.rx_dim);
    for (std::size_t p = 0; p < s.tx_count; ++p) {
        require(static_cast<std::size_t>(patterns[p].size()) == problem.tx[p].element_count(), "pattern size mismatch");
        vt.segment(s.tx_offset[p], patterns[p].amplitudes.size()) = patterns[p].amplitudes;
    }
    for (std::size_t q = 0; q < s.rx_count; ++q) {
        const auto& pat = patterns[s.tx_count + q];
        require(static_cast<std::size_t>(pat.size()) == problem.rx[q].element_count(), "pattern size mismatch");
        vr.segment(s.rx_offset[q], pat.amplitudes.size()) = pat.amplitudes;
    }
    return average_sinr(s, vt, vr);
}

SolveReport distsense_maxmin(const DistsenseProblem& problem, const SolveOptions& options) {
    problem.validate();
    const Setup s = make_setup(problem);
    std::function<Run(std::size_t)> attempt = [&](std::size_t i) {
        Rng rng = child_rng(options.seed, i);
        Vec vt = uniform_vector(rng, s.tx_dim);
        Vec vr = uniform_vector(rng, s.rx_dim);
        if (i < options.warm_starts.size() && options.warm_starts[i].size() == s.tx_dim + s.rx_dim) {
            vt = options.warm_starts[i].head(s.tx_dim);
            vr = options.warm_starts[i].tail(s.rx_dim);
        }
        s.tx_set.project(vt);
        s.rx_set.project(vr);
        return run_ao(s, std::move(vt), std::move(vr), options);
    };
    std::size_t used = 0;
    const auto best = detail::best_of_restarts<Run>(std::max<std::size_t>(options.restarts, 1), attempt, &used);
    SolveReport report;
    report.seed = options.seed;
    report.restarts_used = used;
    for (std::size_t p = 0; p < s.tx_count; ++p)
        report.surfaces.emplace_back(best->vt.segment(s.tx_offset[p], static_cast<Eigen::Index>(problem.tx[p].element_count())));
    for (std::size_t q = 0; q < s.rx_count; ++q)
        report.surfaces.emplace_back(best->vr.segment(s.rx_offset[q], static_cast<Eigen::Index>(problem.rx[q].element_count())));
    report.pattern = report.surfaces.front();
    report.window = ApertureWindow::full(problem.tx.front());
    report.objective_trace = best->trace;
    report.objective = best->value;
    report.min_leakage_slack = std::min(s.tx_set.min_slack(best->vt), s.rx_set.min_slack(best->vr));
    report.feasible = s.tx_set.in_box(best->vt) && s.rx_set.in_box(best->vr) &&
                      report.min_leakage_slack >= -leakage_tolerance;
    const auto avg = average_sinr(s, best->vt, best->vr);
    for (std::size_t j = 0; j < avg.size(); ++j) report.metrics.emplace_back("average_sinr_" + std::to_string(j), avg[j]);
    return report;
}

}  // namespace holobeam
