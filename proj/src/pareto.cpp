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

#include "holobeam/beamopt.hpp"
#include "holobeam/error.hpp"
#include "holobeam/wavefield.hpp"

namespace holobeam {
namespace {

CVec comm_channel(const RhsConfig& cfg, const std::vector<CommPath>& paths) {
    CVec h = CVec::Zero(static_cast<Eigen::Index>(cfg.element_count()));
    for (const auto& p : paths) h += std::sqrt(p.gain) * steering(cfg, Location{p.theta, 0.0, inf});
    return h;
}

CVec pa_channel(std::size_t n, double wavelength, const std::vector<CommPath>& paths) {
    CVec h = CVec::Zero(static_cast<Eigen::Index>(n));
    for (const auto& p : paths) h += std::sqrt(p.gain) * steering(n, wavelength / 2.0, wavelength, p.theta);
    return h;
}

}  // namespace

void ParetoScenario::validate() const {
    cfg.validate();
    require(cfg.rows == 1, "Pareto case studies use a single-feed surface");
    require(targets.size() == 1 || targets.size() == 2, "one or two sensing targets supported");
    require(comm_paths.size() == 1 || comm_paths.size() == 2, "LoS or two-path channel supported");
    for (const auto& p : comm_paths) require(p.gain > 0.0, "path gains must be positive");
    require(tx_power > 0.0 && noise_power > 0.0, "power and noise must be positive");
}

ParetoScenario ParetoScenario::table2(double wavelength) {
    ParetoScenario s;
    s.cfg = RhsConfig::linear(50, wavelength / 3.0, wavelength);
    s.tx_power = 1.0;
    s.targets = {0.0};
    s.comm_paths = {CommPath{0.0, 1.0}};
    return s;
}

ParetoFront pareto_front(const ParetoScenario& scenario, const std::vector<double>& thresholds,
                         const SolveOptions& options) {
    scenario.validate();
    require(std::is_sorted(thresholds.begin(), thresholds.end()), "thresholds must be sorted ascending");
    for (double g : thresholds) require(g >= 0.0 && std::isfinite(g), "thresholds must be finite and non-negative");
    const RhsConfig& cfg = scenario.cfg;
    const ApertureWindow window = ApertureWindow::full(cfg);
    const CMat unit = CMat::Constant(1, 1, cd(std::sqrt(scenario.tx_power), 0.0));

    CMat sense = CMat::Zero(static_cast<Eigen::Index>(cfg.element_count()), static_cast<Eigen::Index>(cfg.element_count()));
    for (double t : scenario.targets) sense += radiated_power_form(cfg, steering(cfg, Location{t, 0.0, inf}), unit);
    const CMat comm = radiated_power_form(cfg, comm_channel(cfg, scenario.comm_paths), unit) / scenario.noise_power;

    ParetoFront front;
    const SolveReport best_comm = solve_pattern_qcqp(QcqpSpec::for_surface(cfg, window, comm), options);
    front.max_comm_level = best_comm.objective;

    // Highest threshold first: each solution is feasible for every lower
    // threshold, so it seeds the next solve and bounds it from below.
    std::vector<ParetoPoint> points;
    Vec carry = best_comm.pattern.amplitudes;
    double carry_value = -inf;
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
        const double gamma = *it;
        if (gamma > front.max_comm_level) {
            front.infeasible.push_back(gamma);
            continue;
        }
        QcqpSpec spec = QcqpSpec::for_surface(cfg, window, sense);
        spec.constraints.push_back({comm, Sense::at_least, gamma});
        SolveOptions opt = options;
        opt.warm_starts.insert(opt.warm_starts.begin(), carry);
        SolveReport r = solve_pattern_qcqp(spec, opt);
        if (!r.feasible) {
            front.infeasible.push_back(gamma);
            continue;
        }
        Vec psi = r.pattern.amplitudes;
        double value = r.objective;
        if (value < carry_value) {
            psi = carry;
            value = carry_value;
        }
        carry = psi;
        carry_value = value;
        points.push_back({gamma, value});
    }
    std::reverse(points.begin(), points.end());
    std::reverse(front.infeasible.begin(), front.infeasible.end());
    front.points = std::move(points);
    return front;
}

ParetoFront pa_reference_front(const ParetoScenario& scenario, const std::vector<double>& thresholds, std::size_t sweep) {
    scenario.validate();
    require(sweep >= 2, "sweep needs at least two points");
    require(std::is_sorted(thresholds.begin(), thresholds.end()), "thresholds must be sorted ascending");
    const std::size_t n = scenario.cfg.element_count();
    const double lambda = scenario.cfg.wavelength;
    const CVec h = pa_channel(n, lambda, scenario.comm_paths);
    std::vector<CVec> a;
    CVec t = CVec::Zero(static_cast<Eigen::Index>(n));
    for (double theta : scenario.targets) {
        a.push_back(steering(n, lambda / 2.0, lambda, theta));
        t += a.back().conjugate();
    }
    const CVec u = h.conjugate() / h.norm();
    t /= t.norm();
    const double amp = std::sqrt(scenario.tx_power / static_cast<double>(n));

    std::vector<std::pair<double, double>> curve;  // (gamma, P_s)
    for (std::size_t k = 0; k < sweep; ++k) {
        const double kappa = static_cast<double>(k) / static_cast<double>(sweep - 1);
        const CVec mix = kappa * u + (1.0 - kappa) * t;
        CVec w(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::polar(amp, std::arg(mix(i)));
        const double gamma = std::norm((h.transpose() * w).value()) / scenario.noise_power;
        double ps = 0.0;
        for (const auto& ai : a) ps += std::norm((ai.transpose() * w).value());
        curve.emplace_back(gamma, ps);
    }
    ParetoFront front;
    for (const auto& [g, p] : curve) front.max_comm_level = std::max(front.max_comm_level, g);
    for (double gamma : thresholds) {
        double best = -inf;
        for (const auto& [g, p] : curve)
            if (g >= gamma) best = std::max(best, p);
        if (best == -inf)
            front.infeasible.push_back(gamma);
        else
            front.points.push_back({gamma, best});
    }
    return front;
}

}  // namespace holobeam
