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

#include "holobeam/chanest.hpp"

#include <algorithm>
#include <cmath>

#include "holobeam/error.hpp"
#include "holobeam/random.hpp"

namespace holobeam {
namespace {

double coherence(const CVec& a, const CVec& b) { return std::abs(a.dot(b)); }

struct LeastSquares {
    CVec coefficients;
    CVec residual;
};

LeastSquares solve(const CMat& theta, const std::vector<std::size_t>& support, const CVec& y) {
    CMat sub(theta.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = theta.col(static_cast<Eigen::Index>(support[i]));
    LeastSquares ls;
    ls.coefficients = sub.colPivHouseholderQr().solve(y);
    ls.residual = y - sub * ls.coefficients;
    return ls;
}

EstimateReport finish(const Dictionary& dict, const std::vector<std::size_t>& support, const LeastSquares& ls,
                      std::vector<double> trace) {
    EstimateReport r;
    r.estimate = CVec::Zero(dict.atoms.rows());
    for (std::size_t i = 0; i < support.size(); ++i) {
        const cd c = ls.coefficients(static_cast<Eigen::Index>(i));
        r.support.push_back({support[i], c});
        r.estimate += c * dict.atoms.col(static_cast<Eigen::Index>(support[i]));
    }
    r.residual_norm = ls.residual.norm();
    r.iterations = support.size();
    r.residual_trace = std::move(trace);
    return r;
}

void check_pilots(const PilotSet& pilots, const Dictionary& dict) {
    require(pilots.sensing.rows() >= 1, "pilot set needs at least one observation");
    require(pilots.sensing.rows() == pilots.observations.size(), "observation count mismatch");
    require(pilots.sensing.cols() == dict.atoms.rows(), "dictionary and pilots disagree on N");
}

}  // namespace

std::vector<double> angular_grid(std::size_t bins) {
    require(bins >= 2, "angular grid needs at least two bins");
    std::vector<double> g(bins);
    for (std::size_t i = 0; i < bins; ++i)
        g[i] = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(bins);
    return g;
}

CVec dictionary_atom(std::size_t n, double spacing, double wavelength, const AtomLabel& label) {
    require(label.phi > -1.0 && label.phi < 1.0, "phi must lie in (-1, 1)");
    require(label.mu >= 0.0, "mu must be non-negative");
    if (label.mu == 0.0) return steering(n, spacing, wavelength, std::asin(label.phi));
    // second-order (Fresnel) wavefront about element 0
    const double k = 2.0 * pi / wavelength;
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    CVec a(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double z = static_cast<double>(i) * spacing;
        a(i) = std::polar(norm, k * (z * label.phi - 0.5 * label.mu * z * z));
    }
    return a;
}

double polar_ring_step(std::size_t n, double spacing, double wavelength, double epsilon) {
    require(n >= 2, "polar rings need at least two elements");
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
    const CVec far = dictionary_atom(n, spacing, wavelength, {0.0, 0.0});
    auto coh = [&](double mu) { return coherence(far, dictionary_atom(n, spacing, wavelength, {0.0, mu})); };
    // Fresnel phase k z^2 mu / 2 reaches about one radian at the aperture edge here.
    const double aperture = static_cast<double>(n - 1) * spacing;
    double hi = wavelength / (pi * aperture * aperture);
    while (coh(hi) > epsilon) hi *= 1.25;
    double lo = 0.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (coh(mid) > epsilon)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

Dictionary build_dictionary(std::size_t n, double spacing, double wavelength, DictionaryDomain domain,
                            std::size_t angular_bins, std::optional<std::size_t> range_rings, double epsilon) {
    require(n >= 1 && spacing > 0.0 && wavelength > 0.0, "invalid array geometry");
    require(angular_bins >= 2, "angular dictionary needs G_a >= 2");
    if (domain != DictionaryDomain::angular)
        require(range_rings.has_value() && *range_rings >= 1, "polar and joint dictionaries need range_rings");
    const auto phis = angular_grid(angular_bins);
    Dictionary d;
    d.domain = domain;
    if (domain != DictionaryDomain::polar)
        for (double phi : phis) d.grid.push_back({phi, 0.0});
    d.angular_count = d.grid.size();
    if (domain != DictionaryDomain::angular) {
        d.mu_step = polar_ring_step(n, spacing, wavelength, epsilon);
        for (double phi : phis)
            for (std::size_t k = 1; k <= *range_rings; ++k) d.grid.push_back({phi, static_cast<double>(k) * d.mu_step});
    }
    d.atoms.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d.grid.size()));
    for (std::size_t g = 0; g < d.grid.size(); ++g)
        d.atoms.col(static_cast<Eigen::Index>(g)) = dictionary_atom(n, spacing, wavelength, d.grid[g]);
    return d;
}

PilotSet simulate_pilots(const HybridChannel& channel, const RhsConfig& cfg, std::size_t q, double snr_db,
                         std::uint64_t seed) {
    require(q >= 1, "need at least one pilot");
    require(channel.element_count == cfg.element_count(), "channel and surface disagree on N");
    require(!std::isnan(snr_db), "snr must be a number");
    const CVec f = build_propagation_matrix(cfg).col(0);
    Rng rng(mix_seed(seed, 1));
    const auto n = static_cast<Eigen::Index>(cfg.element_count());
    PilotSet p;
    p.sensing.resize(static_cast<Eigen::Index>(q), n);
    for (Eigen::Index r = 0; r < p.sensing.rows(); ++r) {
        const Vec psi = uniform_vector(rng, n);
        CVec row = psi.cast<cd>().cwiseProduct(f);
        if (row.norm() > 0.0) row /= row.norm();
        p.sensing.row(r) = row.transpose();
    }
    p.observations = p.sensing * channel.vector;
    if (snr_db == inf) return p;
    const double signal = p.observations.squaredNorm() / static_cast<double>(q);
    p.noise_power = signal * db_to_linear(-snr_db);
    for (Eigen::Index r = 0; r < p.observations.size(); ++r) p.observations(r) += complex_gaussian(rng, p.noise_power);
    return p;
}

EstimateReport omp(const PilotSet& pilots, const Dictionary& dict, std::size_t sparsity) {
    check_pilots(pilots, dict);
    require(sparsity >= 1, "sparsity must be at least one");
    require(sparsity <= static_cast<std::size_t>(pilots.sensing.rows()), "sparsity exceeds the pilot count");
    require(sparsity <= dict.size(), "sparsity exceeds the dictionary size");
    const CMat theta = pilots.sensing * dict.atoms;
    const Vec norms = theta.colwise().norm();
    std::vector<std::size_t> support;
    std::vector<bool> used(dict.size(), false);
    LeastSquares ls{CVec(), pilots.observations};
    std::vector<double> trace;
    for (std::size_t it = 0; it < sparsity; ++it) {
        const CVec corr = theta.adjoint() * ls.residual;
        std::size_t pick = dict.size();
        double best = -1.0;
        for (std::size_t g = 0; g < dict.size(); ++g) {
            const auto gi = static_cast<Eigen::Index>(g);
            if (used[g] || !(norms(gi) > 0.0)) continue;
            const double c = std::abs(corr(gi)) / norms(gi);
            if (c > best) {
                best = c;
                pick = g;
            }
        }
        if (pick == dict.size()) break;
        used[pick] = true;
        support.push_back(pick);
        ls = solve(theta, support, pilots.observations);
        trace.push_back(ls.residual.norm());
    }
    return finish(dict, support, ls, std::move(trace));
}

EstimateReport pd_omp(const PilotSet& pilots, const Dictionary& dict, const PdOmpOptions& options) {
    check_pilots(pilots, dict);
    require(dict.domain == DictionaryDomain::joint, "pd_omp needs a joint dictionary");
    require(options.max_paths >= 1, "max_paths must be at least one");
    require(options.diffusion_threshold > 0.0 && options.diffusion_threshold <= 1.0,
            "diffusion threshold must lie in (0, 1]");
    const auto q = static_cast<std::size_t>(pilots.sensing.rows());
    const double y2 = pilots.observations.squaredNorm();
    double tol = options.residual_tol.value_or(pilots.noise_power * static_cast<double>(q) * 1.1);
    if (!(tol > 0.0)) tol = 1e-24 * y2;
    const std::size_t max_paths = std::min(options.max_paths, q);
    const double floor_mult = options.gain_floor < 0.0 ? 2.0 * std::log(static_cast<double>(dict.size())) : options.gain_floor;
    const double gain_floor = floor_mult * pilots.noise_power;

    const CMat theta = pilots.sensing * dict.atoms;
    const Vec norms = theta.colwise().norm();
    std::vector<bool> barred(dict.size(), false);
    std::vector<std::size_t> support;
    std::vector<std::vector<std::size_t>> sets;  // diffusion set of every selected path
    LeastSquares ls{CVec(), pilots.observations};
    std::vector<double> trace;
    while (support.size() < max_paths && ls.residual.squaredNorm() > tol) {
        const CVec corr = theta.adjoint() * ls.residual;
        std::size_t pick = dict.size();
        double best = -1.0;
        for (std::size_t g = 0; g < dict.size(); ++g) {
            const auto gi = static_cast<Eigen::Index>(g);
            if (barred[g] || !(norms(gi) > 0.0)) continue;
            const double c = std::abs(corr(gi)) / norms(gi);
            if (c > best) {
                best = c;
                pick = g;
            }
        }
        if (pick == dict.size()) break;
        const CVec anchor = dict.atoms.col(static_cast<Eigen::Index>(pick));
        const CVec reach = dict.atoms.adjoint() * anchor;
        std::vector<std::size_t> diffusion;
        for (std::size_t g = 0; g < dict.size(); ++g)
            if (!barred[g] && norms(static_cast<Eigen::Index>(g)) > 0.0 &&
                std::abs(reach(static_cast<Eigen::Index>(g))) >= options.diffusion_threshold)
                diffusion.push_back(g);
        if (diffusion.empty()) diffusion.push_back(pick);

        // The path is the member of its diffusion set that leaves the least residual.
        auto best_member = [&](std::vector<std::size_t>& trial, std::size_t slot, const std::vector<std::size_t>& set,
                               LeastSquares& fit) {
            double fit_r = inf;
            std::size_t chosen = trial[slot];
            for (auto g : set) {
                trial[slot] = g;
                LeastSquares t = solve(theta, trial, pilots.observations);
                const double r = t.residual.squaredNorm();
                if (r < fit_r) {
                    fit_r = r;
                    chosen = g;
                    fit = std::move(t);
                }
            }
            trial[slot] = chosen;
            return fit_r;
        };
        auto trial = support;
        trial.push_back(pick);
        LeastSquares fit;
        const double fit_r = best_member(trial, trial.size() - 1, diffusion, fit);
        if (gain_floor > 0.0 && ls.residual.squaredNorm() - fit_r <= gain_floor) break;
        support = std::move(trial);
        sets.push_back(std::move(diffusion));
        for (auto g : sets.back()) barred[g] = true;
        ls = std::move(fit);

        // Earlier paths are re-placed inside their own sets given the new one.
        for (int sweep = 0; sweep < 3 && support.size() > 1; ++sweep) {
            const double before = ls.residual.squaredNorm();
            for (std::size_t k = 0; k < support.size(); ++k) {
                LeastSquares f;
                best_member(support, k, sets[k], f);
                ls = std::move(f);
            }
            if (!(ls.residual.squaredNorm() < before * (1.0 - 1e-12))) break;
        }
        trace.push_back(ls.residual.norm());
    }
    if (support.empty()) {
        EstimateReport r;
        r.estimate = CVec::Zero(dict.atoms.rows());
        r.residual_norm = pilots.observations.norm();
        return r;
    }
    return finish(dict, support, ls, std::move(trace));
}

double nmse(const CVec& estimate, const CVec& truth) {
    require(estimate.size() == truth.size(), "estimate and truth lengths differ");
    const double t = truth.squaredNorm();
    require(t > 0.0, "truth must be non-zero");
    return (estimate - truth).squaredNorm() / t;
}

}  // namespace holobeam
