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

// Acceptance checks. Each criterion prints one PASS or FAIL line; the exit
// status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "holobeam/beamopt.hpp"
#include "holobeam/beamtrain.hpp"
#include "holobeam/chanest.hpp"
#include "holobeam/metrics.hpp"
#include "holobeam/random.hpp"
#include "holobeam/rhs_model.hpp"
#include "holobeam/wavefield.hpp"

using namespace holobeam;

namespace {

constexpr double lambda = 0.01;

// Pinned tolerances.
constexpr double oracle_ratio = 0.98;
constexpr double oracle_seconds = 60.0;
constexpr double pareto_match = 0.01;
constexpr double dominance_slack = 1e-6;
constexpr double leakage_floor = -1e-9;
constexpr double transform_rel = 1e-12;
constexpr double monotone_rel = 1e-9;
constexpr double efficiency_rel = 0.01;
constexpr double pd_win_share = 0.80;
constexpr double on_grid_nmse = 1e-10;
constexpr double on_grid_share = 0.95;
constexpr double chanest_seconds = 300.0;
constexpr double zf_leakage = 1e-8;
constexpr double agreement_rel = 0.01;
constexpr double symmetry_rel = 1e-6;
constexpr double dft_coherence = 1e-10;
constexpr double rayleigh_expected = 80.0;
constexpr double rayleigh_rel = 0.05;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "NOT ") + what;
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool monotone(const std::vector<double>& trace) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i] < trace[i - 1] - monotone_rel * std::max(1.0, std::abs(trace[i - 1]))) return false;
    return true;
}

QcqpSpec probe_spec(const RhsConfig& cfg, const Location& where, const CMat& digital) {
    return QcqpSpec::for_surface(cfg, ApertureWindow::full(cfg), radiated_power_form(cfg, steering(cfg, where), digital));
}

RhsConfig random_row(Rng& rng, std::size_t n) {
    auto cfg = RhsConfig::linear(n, lambda * uniform(rng, 1.0 / 6.0, 0.5), lambda);
    cfg.attenuation = uniform(rng, 1.0, 10.0);
    return cfg;
}

// 1 -------------------------------------------------------------------------
Outcome oracle_equivalence() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst = inf;
    int below = 0;
    for (int i = 0; i < 50; ++i) {
        const auto cfg = random_row(rng, 4);
        const auto spec = probe_spec(cfg, Location{deg2rad(uniform(rng, -70.0, 70.0)), 0.0, inf}, CMat::Ones(1, 1));
        SolveOptions opt;
        opt.seed = static_cast<std::uint64_t>(i);
        const auto solved = solve_pattern_qcqp(spec, opt);
        const auto q = quantize_feasible(spec, solved.alternatives, 5);
        const auto best = brute_force_oracle(spec, 5);
        const double ratio = spec.objective_value(q.amplitudes) / best.value;
        worst = std::min(worst, ratio);
        below += ratio < oracle_ratio;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(below == 0, "all 50 instances reach 98% of the oracle (worst " + fmt("%.4f", worst) + ")");
    o.require(secs < oracle_seconds, "runtime " + fmt("%.1f", secs) + " s under 60 s");
    return o;
}

// 2 -------------------------------------------------------------------------
Outcome pareto_structure() {
    Outcome o;
    auto sc = ParetoScenario::table2(lambda);
    sc.targets = {deg2rad(30.0)};
    sc.comm_paths = {{deg2rad(-20.0), 1.0}};
    SolveOptions opt;
    opt.restarts = 4;
    opt.seed = 7;
    const std::vector<double> thresholds{0.0, 10.0, 20.0, 40.0, 60.0, 80.0, 100.0};
    const auto front = pareto_front(sc, thresholds, opt);
    bool non_increasing = front.points.size() >= 2;
    for (std::size_t i = 1; i < front.points.size(); ++i)
        non_increasing = non_increasing && front.points[i].sensing_power <= front.points[i - 1].sensing_power * (1.0 + 1e-9);
    o.require(non_increasing, "front non-increasing over " + std::to_string(front.points.size()) + " points");

    const auto unconstrained = solve_pattern_qcqp(
        probe_spec(sc.cfg, Location{sc.targets[0], 0.0, inf}, CMat::Ones(1, 1) * std::sqrt(sc.tx_power)), opt);
    const double rel = std::abs(front.points.front().sensing_power - unconstrained.objective) / unconstrained.objective;
    o.require(rel <= pareto_match, "P_s at zero threshold within 1% of the unconstrained max (" + fmt("%.2e", rel) + ")");

    int dominated_seeds = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(mix_seed(seed, 2));
        ParetoScenario two = ParetoScenario::table2(lambda);
        two.targets = {deg2rad(uniform(rng, -60.0, -10.0)), deg2rad(uniform(rng, 10.0, 60.0))};
        two.comm_paths = {{deg2rad(uniform(rng, -60.0, 60.0)), 1.0}, {deg2rad(uniform(rng, -60.0, 60.0)), 0.5}};
        SolveOptions so;
        so.restarts = 4;
        so.seed = seed;
        const auto probe = pareto_front(two, {0.0}, so);
        std::vector<double> levels;
        for (int k = 0; k < 5; ++k) levels.push_back(probe.max_comm_level * 0.2 * k);
        const auto rhs = pareto_front(two, levels, so);
        const auto pa = pa_reference_front(two, levels);
        bool dominates = true;
        for (const auto& p : pa.points)
            for (const auto& r : rhs.points)
                if (r.comm_level == p.comm_level && r.sensing_power < p.sensing_power * (1.0 - dominance_slack)) dominates = false;
        dominated_seeds += dominates;
    }
    o.require(dominated_seeds == 20,
              "RHS front weakly dominates the phased-array reference (" + std::to_string(dominated_seeds) + "/20 seeds)");
    return o;
}

// 3 -------------------------------------------------------------------------
struct FeasibilityTally {
    std::size_t outputs = 0;
    std::size_t box_violations = 0;
    double worst_slack = inf;

    void add(const RhsConfig& cfg, const HolographicPattern& p) {
        ++outputs;
        if (!p.in_box() || p.amplitudes.minCoeff() < 0.0 || p.amplitudes.maxCoeff() > 1.0) ++box_violations;
        worst_slack = std::min(worst_slack, leakage_margins(cfg, p, ApertureWindow::full(cfg)).minCoeff());
    }
};

Outcome leakage_feasibility() {
    Outcome o;
    FeasibilityTally tally;
    Rng rng(303);

    // pattern QCQP plus quantization on random small surfaces
    for (std::uint64_t i = 0; tally.outputs < 99400; ++i) {
        const std::size_t rows = uniform(rng) < 0.3 ? 2 : 1;
        const auto cols = static_cast<std::size_t>(uniform(rng, 2.0, 9.0));
        auto cfg = RhsConfig::planar(rows, cols, lambda * uniform(rng, 1.0 / 6.0, 0.5), lambda);
        cfg.attenuation = uniform(rng, 1.0, 10.0);
        cfg.power_split.assign(rows, 1.0 / static_cast<double>(rows));
        const Location where{deg2rad(uniform(rng, -70.0, 70.0)), 0.0, uniform(rng) < 0.3 ? uniform(rng, 0.05, 2.0) : inf};
        auto spec = probe_spec(cfg, where, complex_gaussian_matrix(rng, static_cast<Eigen::Index>(rows), 1));
        if (uniform(rng) < 0.5) {
            const Location other{deg2rad(uniform(rng, -70.0, 70.0)), 0.0, inf};
            const CMat form = radiated_power_form(cfg, steering(cfg, other), CMat::Ones(static_cast<Eigen::Index>(rows), 1));
            spec.constraints.push_back({form, uniform(rng) < 0.5 ? Sense::at_least : Sense::at_most, uniform(rng, 0.0, 0.5)});
        }
        SolveOptions opt;
        opt.seed = i;
        opt.restarts = 1;
        opt.max_iter = 100;
        const auto r = solve_pattern_qcqp(spec, opt);
        tally.add(cfg, r.pattern);
        tally.add(cfg, quantize_feasible(spec, r.pattern, static_cast<std::size_t>(uniform(rng, 2.0, 9.0))));
    }

    SolveOptions small;
    small.restarts = 1;
    small.rounds = 5;
    for (std::uint64_t i = 0; i < 100; ++i) {
        small.seed = i;
        const auto cfg = random_row(rng, 8);
        JcasProblem j{cfg, ApertureWindow::full(cfg), 1.0, 1e-2, {}, {}};
        j.radar.directions = {Location{deg2rad(uniform(rng, -60.0, 60.0)), 0.0, inf}};
        j.users = {{steering(cfg, Location{deg2rad(uniform(rng, -60.0, 60.0)), 0.0, inf}), uniform(rng, 0.0, 2.0)}};
        tally.add(cfg, jcas_transmit(j, small).pattern);

        HdmaProblem h{cfg, {Location{deg2rad(uniform(rng, -60.0, 60.0)), 0.0, inf}, Location{deg2rad(uniform(rng, -60.0, 60.0)), 0.0, inf}},
                      1.0, HdmaObjective::min_power, 0.0};
        tally.add(cfg, hdma_weights(h, small).report.pattern);
        tally.add(cfg, hdma_elementwise(h, small).pattern);

        CodesignProblem c;
        c.tx = cfg;
        c.rx = cfg;
        c.targets = {SensingTarget{Location{deg2rad(uniform(rng, -60.0, 60.0)), 0.0, inf}, {1.0, 0.0}}};
        c.efficiency_tx = uniform(rng, 0.3, 1.0);
        c.efficiency_rx = uniform(rng, 0.3, 1.0);
        const auto cr = codesign_maxmin(c, small);
        for (std::size_t s = 0; s < cr.surfaces.size(); ++s) {
            const bool rx = s == 1;
            tally.add(cfg, cr.surfaces[s]);
            // co-design caps rows at the surface efficiency, tighter than the unit cap
            const double cap = rx ? c.efficiency_rx : c.efficiency_tx;
            const double load = leakage_weights(cfg).dot(cr.surfaces[s].amplitudes.cwiseAbs2());
            tally.worst_slack = std::min(tally.worst_slack, cap - load);
        }

        DistsenseProblem d;
        d.tx = {cfg};
        d.rx = {cfg};
        const double t = deg2rad(uniform(rng, -60.0, 60.0));
        d.scene = {DistTarget{{t}, {t}}};
        d.waveforms = orthogonal_waveforms(1, 1, 1);
        for (const auto& s : distsense_maxmin(d, small).surfaces) tally.add(cfg, s);
    }
    {
        auto cfg = RhsConfig::linear(64, lambda / 6, lambda);
        cfg.attenuation = 1.0;
        CodebookOptions co;
        co.layers = 3;
        co.mu_max = 0.1;
        const auto book = design_angle_codebook(cfg, co);
        for (const auto& layer : book.layers)
            for (const auto& cw : layer.codewords) {
                auto local = RhsConfig::linear(layer.aperture, lambda / 6, lambda);
                local.attenuation = 1.0;
                tally.add(local, cw.pattern);
            }
        for (const auto& p : design_distance_codewords(cfg, {-0.3, 0.4}, RangeBins{4, 0.1})) tally.add(cfg, p);
    }
    o.require(tally.outputs >= 100000, std::to_string(tally.outputs) + " outputs checked");
    o.require(tally.box_violations == 0, std::to_string(tally.box_violations) + " box violations");
    o.require(tally.worst_slack >= leakage_floor, "worst leakage slack " + fmt("%.2e", tally.worst_slack));
    return o;
}

// 4 -------------------------------------------------------------------------
Outcome quadratic_transform_exactness() {
    Outcome o;
    Rng rng(404);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto dim = static_cast<Eigen::Index>(uniform(rng, 1.0, 5.0));
        const CVec a = complex_gaussian_matrix(rng, dim, 1, std::pow(10.0, uniform(rng, -3.0, 3.0)));
        const double g = std::pow(10.0, uniform(rng, -3.0, 3.0));
        const double want = a.squaredNorm() / g;
        worst = std::max(worst, std::abs(quadratic_transform(optimal_auxiliary(a, g), a, g) - want) / want);
    }
    o.require(worst <= transform_rel, "worst relative error " + fmt("%.2e", worst) + " over 10^4 pairs");

    int monotone_runs = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng r(mix_seed(seed, 4));
        const auto cfg = random_row(r, 10);
        CodesignProblem p;
        p.tx = cfg;
        p.rx = cfg;
        p.targets = {SensingTarget{Location{deg2rad(uniform(r, -60.0, -5.0)), 0.0, inf}, complex_gaussian(r)},
                     SensingTarget{Location{deg2rad(uniform(r, 5.0, 60.0)), 0.0, inf}, complex_gaussian(r)}};
        p.users = {{steering(cfg, Location{deg2rad(uniform(r, -60.0, 60.0)), 0.0, inf}), 1.0}};
        SolveOptions opt;
        opt.seed = seed;
        opt.restarts = 2;
        monotone_runs += monotone(codesign_maxmin(p, opt).objective_trace);
    }
    o.require(monotone_runs == 20, "tau trace monotone on " + std::to_string(monotone_runs) + "/20 instances");
    return o;
}

// 5 -------------------------------------------------------------------------
Outcome efficiency_laws() {
    Outcome o;
    Rng rng(505);
    const std::vector<double> levels{0.25, 0.5, 1.0};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto cfg = random_row(rng, 16);
        const CVec h = steering(cfg, Location{deg2rad(uniform(rng, -60.0, 60.0)), 0.0, inf});
        SolveOptions opt;
        opt.seed = static_cast<std::uint64_t>(i);
        std::vector<double> zeta;
        for (double v : levels) zeta.push_back(max_comm_snr(cfg, h, 1.0, 1e-3, v, opt));
        for (std::size_t a = 0; a < levels.size(); ++a)
            for (std::size_t b = 0; b < levels.size(); ++b)
                worst = std::max(worst, std::abs(zeta[a] / zeta[b] / (levels[a] / levels[b]) - 1.0));
    }
    o.require(worst <= efficiency_rel, "SNR ratio tracks the efficiency ratio (worst deviation " + fmt("%.2e", worst) + ")");

    int ordered = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng r(mix_seed(seed, 5));
        const auto cfg = random_row(r, 10);
        CodesignProblem p;
        p.tx = cfg;
        p.rx = cfg;
        p.targets = {SensingTarget{Location{deg2rad(uniform(r, -60.0, 60.0)), 0.0, inf}, {1.0, 0.0}}};
        p.noise_ext = 1e-3;
        p.noise_int = 1e-3;
        SolveOptions opt;
        opt.seed = seed;
        opt.restarts = 3;
        auto nu = [&](double et, double er) {
            CodesignProblem q = p;
            q.efficiency_tx = et;
            q.efficiency_rx = er;
            return codesign_maxmin(q, opt).objective;
        };
        const double both = nu(0.8, 0.8), tx_high = nu(0.8, 0.5), rx_high = nu(0.5, 0.8);
        ordered += both > tx_high && tx_high > rx_high;
    }
    o.require(ordered == 20, "nu(0.8,0.8) > nu(0.8,0.5) > nu(0.5,0.8) on " + std::to_string(ordered) + "/20 instances");
    return o;
}

// 6 -------------------------------------------------------------------------
Outcome pd_omp_ordering() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = 200, q = 20, trials = 200, rings = 12;
    const double d = lambda / 4;
    const auto cfg = RhsConfig::linear(n, d, lambda);
    std::vector<double> medians;
    std::size_t wins_coarse = 0;
    for (std::size_t bins : {n / 2, 2 * n / 3}) {
        const auto angular = build_dictionary(n, d, lambda, DictionaryDomain::angular, bins);
        const auto joint = build_dictionary(n, d, lambda, DictionaryDomain::joint, bins, rings);
        std::vector<double> pd;
        std::size_t wins = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t ts = 1 + t;
            Rng rng(mix_seed(ts, 1));
            std::vector<PathSpec> spec(2);
            spec[0].theta = deg2rad(uniform(rng, -60.0, 60.0));
            spec[1].theta = deg2rad(uniform(rng, -60.0, 60.0));
            spec[1].regime = Regime::near;
            spec[1].range = uniform(rng, 2.0, 8.0);
            const auto ch = synth_channel(spec, n, d, lambda, mix_seed(ts, 2));
            const auto pilots = simulate_pilots(ch, cfg, q, 10.0, mix_seed(ts, 3));
            const double a = nmse(omp(pilots, angular, 2).estimate, ch.vector);
            const double b = nmse(pd_omp(pilots, joint).estimate, ch.vector);
            pd.push_back(b);
            wins += b < a;
        }
        if (bins == n / 2) wins_coarse = wins;
        std::nth_element(pd.begin(), pd.begin() + static_cast<long>(trials / 2), pd.end());
        medians.push_back(pd[trials / 2]);
    }
    const double share = static_cast<double>(wins_coarse) / static_cast<double>(trials);
    o.require(share >= pd_win_share, "PD-OMP beats OMP in " + fmt("%.1f", 100.0 * share) + "% of trials");
    o.require(medians[1] <= medians[0],
              "median NMSE " + fmt("%.3g", medians[0]) + " -> " + fmt("%.3g", medians[1]) + " as the grid densifies");

    const auto joint = build_dictionary(n, d, lambda, DictionaryDomain::joint, n / 2, rings);
    Rng rng(606);
    std::size_t exact = 0;
    const std::size_t instances = 100;
    for (std::size_t t = 0; t < instances; ++t) {
        const auto far = static_cast<Eigen::Index>(uniform(rng, 0.0, static_cast<double>(joint.angular_count)));
        const auto near = static_cast<Eigen::Index>(
            joint.angular_count + static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(joint.size() - joint.angular_count))));
        HybridChannel ch;
        ch.element_count = n;
        ch.vector = complex_gaussian(rng) * joint.atoms.col(far) + complex_gaussian(rng) * joint.atoms.col(near);
        exact += nmse(pd_omp(simulate_pilots(ch, cfg, q, inf, t), joint).estimate, ch.vector) <= on_grid_nmse;
    }
    const double exact_share = static_cast<double>(exact) / static_cast<double>(instances);
    o.require(exact_share >= on_grid_share,
              "noiseless on-grid NMSE <= 1e-10 in " + std::to_string(exact) + "/" + std::to_string(instances) + " instances");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < chanest_seconds, "runtime " + fmt("%.1f", secs) + " s under 300 s");
    return o;
}

// 7 -------------------------------------------------------------------------
Outcome beam_training() {
    Outcome o;
    const double mu_max = 0.27;
    const RangeBins bins{2, mu_max};
    auto cfg = RhsConfig::linear(256, lambda / 6, lambda);
    cfg.attenuation = 1.0;
    CodebookOptions co;
    co.mu_max = mu_max;
    const auto book = design_angle_codebook(cfg, co);
    const auto& cells = book.layers.back().cells;

    std::size_t misses = 0, total = 0;
    std::vector<std::size_t> slots;
    for (std::size_t users : {1, 2, 4}) {
        std::size_t slot = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(mix_seed(seed, users));
            std::vector<TrainingUser> us;
            std::vector<std::size_t> want;
            while (us.size() < users) {
                const auto c = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(cells.size())));
                // users sit in distinct, non-adjacent terminal cells
                bool clear = true;
                for (auto w : want) clear = clear && (c > w ? c - w : w - c) >= 2;
                if (!clear) continue;
                const auto j = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(bins.count)));
                const Location l = phi_mu_inverse({cells[c].center(), bins.center(j)});
                us.push_back({l.theta, l.range, 0.0});
                want.push_back(c);
            }
            TrainingOptions to;
            to.bins = bins;
            const auto tr = run_training(cfg, us, book, to);
            slot = tr.slots_used;
            for (std::size_t u = 0; u < users; ++u) {
                ++total;
                misses += tr.users[u].cell != want[u];
            }
        }
        slots.push_back(slot);
    }
    o.require(misses == 0, "noiseless on-grid cells found for " + std::to_string(total - misses) + "/" + std::to_string(total) + " users");
    o.require(slots[0] == slots[1] && slots[1] == slots[2], "slots_used " + std::to_string(slots[0]) + " for U = 1, 2, 4");

    auto error_rate = [&](bool windows) {
        std::size_t wrong = 0;
        const std::size_t trials = 500;
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng(mix_seed(t, 99));
            const Location l = phi_mu_inverse({uniform(rng, -book.span, book.span), uniform(rng, 0.0, mu_max)});
            TrainingOptions to;
            to.bins = bins;
            to.snr_db = 10.0;
            to.windows = windows;
            to.rician_k = db_to_linear(5.0);
            to.seed = t + 1;
            wrong += !run_training(cfg, {{l.theta, l.range, 0.0}}, book, to).users[0].cell_correct;
        }
        return static_cast<double>(wrong) / static_cast<double>(trials);
    };
    const double on = error_rate(true), off = error_rate(false);
    o.require(on < off, "Rician error rate " + fmt("%.3f", on) + " with windows vs " + fmt("%.3f", off) + " without");

    auto planar = RhsConfig::planar(4, 256, lambda / 6, lambda);
    planar.attenuation = 1.0;
    planar.power_split.assign(4, 0.25);
    CodebookOptions pc;
    pc.layers = 3;
    pc.mu_max = mu_max;
    const auto pbook = design_angle_codebook(planar, pc);
    TrainingOptions to;
    to.bins = bins;
    const std::vector<TrainingUser> us{{-0.6, inf, deg2rad(-25.0)}, {-0.1, 6.0, deg2rad(-5.0)},
                                       {0.3, inf, deg2rad(15.0)}, {0.7, 3.0, deg2rad(35.0)}};
    const auto zf = run_training(planar, us, pbook, to);
    o.require(zf.digital.has_value() && zf.max_leakage_ratio <= zf_leakage,
              "zero-forcing leakage " + fmt("%.2e", zf.max_leakage_ratio) + " for 4 users");
    return o;
}

// 8 -------------------------------------------------------------------------
Outcome distributed_sensing() {
    Outcome o;
    const auto cfg = RhsConfig::linear(10, lambda / 4, lambda);
    SolveOptions opt;
    opt.restarts = 3;
    opt.seed = 5;

    int monotone_runs = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(mix_seed(seed, 8));
        DistsenseProblem d;
        d.tx = {cfg, cfg};
        d.rx = {cfg, cfg};
        for (int j = 0; j < 3; ++j) {
            DistTarget t;
            t.tx_angles = {deg2rad(uniform(rng, -60.0, 60.0)), deg2rad(uniform(rng, -60.0, 60.0))};
            t.rx_angles = {deg2rad(uniform(rng, -60.0, 60.0)), deg2rad(uniform(rng, -60.0, 60.0))};
            t.reflection = complex_gaussian(rng);
            t.delay = static_cast<std::size_t>(j);
            t.clutter = j == 2;
            d.scene.push_back(t);
        }
        d.waveforms = orthogonal_waveforms(2, 1, 4);
        SolveOptions so = opt;
        so.seed = seed;
        monotone_runs += monotone(distsense_maxmin(d, so).objective_trace);
    }
    o.require(monotone_runs == 10, "worst average SINR trace monotone on " + std::to_string(monotone_runs) + "/10 instances");

    DistsenseProblem single;
    single.tx = {cfg};
    single.rx = {cfg};
    single.scene = {DistTarget{{deg2rad(20.0)}, {deg2rad(20.0)}}};
    single.waveforms = orthogonal_waveforms(1, 1, 1);
    const double dist = distsense_maxmin(single, opt).objective;
    CodesignProblem c;
    c.tx = cfg;
    c.rx = cfg;
    c.targets = {SensingTarget{Location{deg2rad(20.0), 0.0, inf}, {1.0, 0.0}}};
    c.noise_ext = single.noise_power;
    c.noise_int = 0.0;
    const double co = codesign_maxmin(c, opt).objective;
    const double rel = std::abs(dist - co) / co;
    o.require(rel <= agreement_rel, "single pair agrees with co-design (" + fmt("%.2e", rel) + ")");

    DistsenseProblem sym;
    sym.tx = {cfg, cfg};
    sym.rx = {cfg};
    const double t = deg2rad(25.0);
    sym.scene = {DistTarget{{t, -t}, {0.0}}, DistTarget{{-t, t}, {0.0}}};
    sym.waveforms = orthogonal_waveforms(2, 1, 2);
    Rng rng(808);
    const Vec tx = uniform_vector(rng, 10), rx = uniform_vector(rng, 10);
    Vec start(30);
    start << tx, tx, rx;
    SolveOptions so = opt;
    so.restarts = 1;
    so.warm_starts = {start};
    const auto s = distsense_average_sinr(sym, distsense_maxmin(sym, so).surfaces);
    const double gap = std::abs(s[0] - s[1]) / std::max(s[0], s[1]);
    o.require(gap <= symmetry_rel, "mirrored targets agree to " + fmt("%.2e", gap));
    return o;
}

// 9 -------------------------------------------------------------------------
Outcome model_checks() {
    Outcome o;
    Rng rng(909);
    double norm_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto n = static_cast<std::size_t>(uniform(rng, 1.0, 300.0));
        const std::optional<double> r = uniform(rng) < 0.5 ? std::optional<double>(uniform(rng, 0.1, 50.0)) : std::nullopt;
        const CVec a = steering(n, lambda * uniform(rng, 0.1, 0.5), lambda, uniform(rng, -1.5, 1.5), r);
        norm_err = std::max(norm_err, std::abs(a.norm() - 1.0));
    }
    o.require(norm_err <= 1e-12, "steering norm error " + fmt("%.1e", norm_err));

    const auto dft = build_dictionary(64, lambda / 2, lambda, DictionaryDomain::angular, 64);
    const CMat gram = dft.atoms.adjoint() * dft.atoms;
    double off = 0.0;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
            if (i != j) off = std::max(off, std::abs(gram(i, j)));
    o.require(off <= dft_coherence, "DFT off-diagonal coherence " + fmt("%.1e", off));

    const double wl = 299792458.0 / 30e9;
    const double rd = rayleigh_distance(256 * wl / 4, wl);
    o.require(std::abs(rd - rayleigh_expected) / rayleigh_expected <= rayleigh_rel, "Rayleigh distance " + fmt("%.2f", rd) + " m");

    auto row = RhsConfig::linear(40, lambda / 6, lambda);
    row.attenuation = 1.0;
    const auto ch = synth_channel({PathSpec{Regime::far, 0.2, 0.0, inf, cd(1.0, 0.0)}}, row, 1);
    bool counts = true;
    for (std::size_t na = 1; na <= 40; ++na)
        counts = counts && sliding_window_select(row, na, ch, HolographicPattern::ones(na)).candidates == 40 - na + 1;
    o.require(counts, "window count N - N_a + 1 for every aperture");

    double trip = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double theta = uniform(rng, -1.5, 1.5), r = uniform(rng, 0.05, 200.0);
        const Location l = phi_mu_inverse(phi_mu_transform(theta, r));
        trip = std::max({trip, std::abs(l.theta - theta), std::abs(l.range - r) / r});
    }
    o.require(trip <= 1e-9, "(phi, mu) round trip error " + fmt("%.1e", trip));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"pareto structure", pareto_structure},
        {"leakage feasibility", leakage_feasibility},
        {"quadratic transform exactness", quadratic_transform_exactness},
        {"efficiency laws", efficiency_laws},
        {"pd-omp ordering", pd_omp_ordering},
        {"beam training soundness", beam_training},
        {"distributed sensing", distributed_sensing},
        {"model checks", model_checks},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures;
}
