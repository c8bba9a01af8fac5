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

#include "holobeam/beamtrain.hpp"

#include <algorithm>
#include <cmath>

#include "ascent.hpp"
#include "feasible.hpp"
#include "holobeam/error.hpp"
#include "holobeam/random.hpp"

namespace holobeam {
namespace {

RhsConfig row_config(const RhsConfig& cfg, std::size_t cols) {
    RhsConfig r = RhsConfig::linear(cols, cfg.element_spacing, cfg.wavelength);
    r.waveguide_index = cfg.waveguide_index;
    r.attenuation = cfg.attenuation;
    return r;
}

/// Location seen from element 0 of a point given relative to z = center.
Location from_center(const Location& loc, double center) {
    if (loc.far_field()) return loc;
    const double x = loc.range * std::cos(loc.theta) * std::cos(loc.phi);
    const double y = loc.range * std::cos(loc.theta) * std::sin(loc.phi);
    const double z = center + loc.range * std::sin(loc.theta);
    const double r = std::sqrt(x * x + y * y + z * z);
    return Location{std::asin(z / r), std::atan2(y, x), r};
}

double row_center(const RhsConfig& cfg, std::size_t cols) {
    return 0.5 * static_cast<double>(cols - 1) * cfg.element_spacing;
}

/// Window-local steering for a (phi, mu) point referred to the window centre.
CVec local_steering(const RhsConfig& cfg, std::size_t cols, const PhiMuPoint& point) {
    const Location loc = from_center(phi_mu_inverse(point), row_center(cfg, cols));
    return steering(cols, cfg.element_spacing, cfg.wavelength, loc.theta,
                    loc.far_field() ? std::nullopt : std::optional<double>(loc.range));
}

/// Feed-0 propagation entries along row 0.
CVec row_feed(const RhsConfig& cfg) {
    const CMat f = build_propagation_matrix(cfg);
    CVec out(static_cast<Eigen::Index>(cfg.cols));
    for (std::size_t c = 0; c < cfg.cols; ++c) out(static_cast<Eigen::Index>(c)) = f(static_cast<Eigen::Index>(cfg.index(0, c)), 0);
    return out;
}

cd window_amplitude(const RhsConfig& cfg, const CVec& h, const CVec& feed, const HolographicPattern& codeword,
                    std::size_t first) {
    cd y{0.0, 0.0};
    for (std::size_t c = 0; c < codeword.size(); ++c) {
        const auto col = first + c;
        y += h(static_cast<Eigen::Index>(cfg.index(0, col))) * codeword.amplitudes(static_cast<Eigen::Index>(c)) *
             feed(static_cast<Eigen::Index>(col));
    }
    return y;
}

std::size_t auto_aperture(const RhsConfig& cfg, double cell_width) {
    const double need = 1.5 * cfg.wavelength / (cfg.element_spacing * cell_width);
    const auto n = static_cast<std::size_t>(std::ceil(need));
    return std::clamp<std::size_t>(n, std::min<std::size_t>(4, cfg.cols), cfg.cols);
}

}  // namespace

PhiMuPoint phi_mu_transform(double theta, double range) {
    require(range > 0.0, "range must be positive");
    require(std::isfinite(theta), "theta must be finite");
    const double c = std::cos(theta);
    return {std::sin(theta), range < inf ? c * c / range : 0.0};
}

Location phi_mu_inverse(const PhiMuPoint& point) {
    require(point.phi >= -1.0 && point.phi <= 1.0, "phi must lie in [-1, 1]");
    require(point.mu >= 0.0, "mu must be non-negative");
    const double theta = std::asin(point.phi);
    if (point.mu == 0.0) return Location{theta, 0.0, inf};
    const double c2 = 1.0 - point.phi * point.phi;
    require(c2 > 0.0, "endfire points have no finite range");
    return Location{theta, 0.0, c2 / point.mu};
}

std::optional<std::size_t> Codebook::terminal_cell(double phi) const {
    if (layers.empty() || !(phi >= -span && phi < span)) return std::nullopt;
    const auto& cells = layers.back().cells;
    const double w = 2.0 * span / static_cast<double>(cells.size());
    auto k = static_cast<std::size_t>(std::floor((phi + span) / w));
    return std::min(k, cells.size() - 1);
}

std::optional<std::size_t> RangeBins::bin_of(double mu) const {
    if (!(mu >= 0.0 && mu < mu_max)) return std::nullopt;
    return std::min(static_cast<std::size_t>(std::floor(mu / width())), count - 1);
}

double codeword_gain(const RhsConfig& cfg, const HolographicPattern& pattern, const PhiMuPoint& point) {
    require(pattern.size() >= 1 && pattern.size() <= cfg.cols, "codeword longer than the row");
    const RhsConfig local = row_config(cfg, pattern.size());
    const CVec a = local_steering(cfg, pattern.size(), point);
    const CVec f = build_propagation_matrix(local).col(0);
    return std::abs((a.cwiseProduct(f).transpose() * pattern.amplitudes.cast<cd>()).value());
}

Codebook design_angle_codebook(const RhsConfig& cfg, const CodebookOptions& options) {
    cfg.validate();
    require(options.layers >= 1, "codebook needs at least one layer");
    require(options.layers <= 12, "codebook depth is limited to 12 layers");
    require(options.span > 0.0 && options.span < 1.0, "span must lie in (0, 1)");
    require(options.range_samples >= 1, "need at least one range sample");
    require(options.apertures.empty() || options.apertures.size() == options.layers,
            "apertures needs one entry per layer");
    Codebook book;
    book.span = options.span;
    book.epsilon = options.epsilon;
    book.columns = cfg.cols;
    const double aperture = static_cast<double>(cfg.cols) * cfg.element_spacing;
    book.mu_max = options.mu_max.value_or(4.0 / rayleigh_distance(aperture, cfg.wavelength));
    require(book.mu_max >= 0.0, "mu_max must be non-negative");

    const std::size_t deepest = std::size_t{2} << (options.layers - 1);
    const std::size_t i_samples = options.angle_samples ? options.angle_samples : 8 * deepest;
    require(i_samples >= 2, "need at least two angle samples");
    std::vector<PhiMuPoint> samples;
    for (std::size_t j = 0; j < options.range_samples; ++j) {
        const double mu = options.range_samples == 1 ? 0.0
                                                     : book.mu_max * static_cast<double>(j) /
                                                           static_cast<double>(options.range_samples - 1);
        for (std::size_t i = 0; i < i_samples; ++i)
            samples.push_back({-options.span + (static_cast<double>(i) + 0.5) * 2.0 * options.span /
                                                   static_cast<double>(i_samples),
                               mu});
    }

    const double deepest_width = 2.0 * options.span / static_cast<double>(deepest);
    Rng rng(mix_seed(options.seed, 3));
    for (std::size_t s = 0; s < options.layers; ++s) {
        CodebookLayer layer;
        const std::size_t cells = std::size_t{2} << s;
        const double w = 2.0 * options.span / static_cast<double>(cells);
        for (std::size_t k = 0; k < cells; ++k)
            layer.cells.push_back({-options.span + static_cast<double>(k) * w, -options.span + static_cast<double>(k + 1) * w});
        layer.aperture = options.apertures.empty() ? auto_aperture(cfg, deepest_width) : options.apertures[s];
        require(layer.aperture >= 1 && layer.aperture <= cfg.cols, "layer aperture must fit the row");

        const RhsConfig local = row_config(cfg, layer.aperture);
        const CVec f = build_propagation_matrix(local).col(0);
        const auto na = static_cast<Eigen::Index>(layer.aperture);
        CMat c(static_cast<Eigen::Index>(samples.size()), na);
        std::vector<std::size_t> sample_cell(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const CVec a = local_steering(cfg, layer.aperture, samples[i]);
            c.row(static_cast<Eigen::Index>(i)) = a.cwiseProduct(f).transpose();
            sample_cell[i] = std::min(static_cast<std::size_t>(std::floor((samples[i].phi + options.span) / w)), cells - 1);
        }
        const double peak = codeword_gain(cfg, pattern_for_direction(local, 0.0), {0.0, 0.0});
        // A codeword spreads the single-beam power over half the span.
        const double beamwidth = cfg.wavelength / (static_cast<double>(layer.aperture) * cfg.element_spacing);
        layer.gain_target = options.gain.value_or(std::sqrt(0.2 * std::min(1.0, beamwidth / options.span)) * peak);
        const auto feasible = detail::FeasibleSet::surface(local, ApertureWindow::full(local));

        double contrast = inf;
        for (std::size_t p = 0; p < 2; ++p) {
            Codeword cw;
            Vec target(c.rows());
            std::vector<HolographicPattern> lobes;
            for (std::size_t k = p; k < cells; k += 2) {
                cw.cells.push_back(k);
                lobes.push_back(pattern_for_direction(local, std::asin(layer.cells[k].center())));
            }
            for (std::size_t i = 0; i < samples.size(); ++i)
                target(static_cast<Eigen::Index>(i)) = sample_cell[i] % 2 == p ? layer.gain_target : 0.0;
            const double scale = std::max(target.squaredNorm(), 1e-300);

            detail::SmoothProblem problem;
            problem.objective = [&](const Vec& x, Vec* grad) {
                const CVec z = c * x.cast<cd>();
                double loss = 0.0;
                Vec weight = Vec::Zero(z.size());
                for (Eigen::Index i = 0; i < z.size(); ++i) {
                    const double m = std::abs(z(i));
                    const double e = m - target(i);
                    loss += e * e;
                    if (m > 0.0) weight(i) = 2.0 * e / m;
                }
                if (grad) {
                    const CVec wz = weight.cast<cd>().cwiseProduct(z.conjugate());
                    *grad = -(c.transpose() * wz).real() / scale;
                }
                return -loss / scale;
            };
            problem.project = [&](Vec& x) { feasible.project(x); };

            Vec x0 = superpose_patterns(lobes, Vec::Constant(static_cast<Eigen::Index>(lobes.size()),
                                                             1.0 / static_cast<double>(lobes.size())))
                         .pattern.amplitudes;
            for (Eigen::Index n = 0; n < x0.size(); ++n) x0(n) += uniform(rng, -0.01, 0.01);
            feasible.project(x0);
            detail::AscentOptions ao;
            ao.max_iter = options.max_iter;
            const auto result = detail::ascend(problem, x0, ao);
            Vec x = result.x;
            feasible.project(x);
            cw.pattern = HolographicPattern(x);

            const CVec z = c * x.cast<cd>();
            double in = 0.0, out = 0.0;
            std::size_t n_in = 0, n_out = 0;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const double pw = std::abs(z(static_cast<Eigen::Index>(i)));
                if (sample_cell[i] % 2 == p) {
                    in += pw;
                    ++n_in;
                } else {
                    out += pw;
                    ++n_out;
                }
            }
            const double ratio = (in / static_cast<double>(std::max<std::size_t>(n_in, 1))) /
                                 std::max(out / static_cast<double>(std::max<std::size_t>(n_out, 1)), 1e-300);
            contrast = std::min(contrast, ratio);
            layer.codewords.push_back(std::move(cw));
        }
        layer.contrast = contrast;
        book.layers.push_back(std::move(layer));
    }
    return book;
}

std::vector<HolographicPattern> design_distance_codewords(const RhsConfig& cfg, const std::vector<double>& user_phis,
                                                          const RangeBins& bins) {
    require(!user_phis.empty(), "distance codewords need at least one user");
    require(bins.count >= 1, "need at least one range bin");
    require(bins.mu_max >= 0.0, "mu_max must be non-negative");
    const RhsConfig row = row_config(cfg, cfg.cols);
    const ApertureWindow full = ApertureWindow::full(row);
    const Vec weights = Vec::Constant(static_cast<Eigen::Index>(user_phis.size()), 1.0 / static_cast<double>(user_phis.size()));
    std::vector<HolographicPattern> out;
    for (std::size_t j = 0; j < bins.count; ++j) {
        std::vector<HolographicPattern> per_user;
        for (double phi : user_phis)
            per_user.push_back(pattern_for_location(row, from_center(phi_mu_inverse({phi, bins.center(j)}), row_center(cfg, cfg.cols))));
        out.push_back(scale_to_leakage(row, superpose_patterns(per_user, weights).pattern, full));
    }
    return out;
}

double window_power(const RhsConfig& cfg, const CVec& channel, const HolographicPattern& codeword, std::size_t first) {
    require(static_cast<std::size_t>(channel.size()) == cfg.element_count(), "channel length must equal N");
    require(codeword.size() >= 1 && first + codeword.size() <= cfg.cols, "window runs past the end of the row");
    return std::norm(window_amplitude(cfg, channel, row_feed(cfg), codeword, first));
}

WindowChoice sliding_window_select(const RhsConfig& cfg, std::size_t aperture, const HybridChannel& channel,
                                   const HolographicPattern& codeword) {
    require(aperture >= 1 && aperture <= cfg.cols, "aperture must lie in [1, N]");
    require(codeword.size() == aperture, "codeword length must equal the aperture");
    require(channel.element_count == cfg.element_count(), "channel length must equal N");
    const CVec feed = row_feed(cfg);
    WindowChoice best;
    best.candidates = cfg.cols - aperture + 1;
    best.power = -1.0;
    for (std::size_t w = 0; w < best.candidates; ++w) {
        const double p = std::norm(window_amplitude(cfg, channel.vector, feed, codeword, w));
        if (p > best.power * (1.0 + 1e-12) || best.power < 0.0) {
            best.power = p;
            best.index = w;
        }
    }
    return best;
}

CVec training_channel(const RhsConfig& cfg, const TrainingUser& user, double rician_k, std::size_t scatterers,
                      std::uint64_t seed) {
    require(rician_k >= 0.0, "Rician factor must be non-negative");
    const CVec los = steering(cfg, from_center(Location{user.theta, user.elevation, user.range}, row_center(cfg, cfg.cols)));
    if (rician_k == inf || scatterers == 0) return los;
    Rng rng(mix_seed(seed, 11));
    CVec nlos = CVec::Zero(los.size());
    for (std::size_t i = 0; i < scatterers; ++i) {
        const double theta = uniform(rng, -deg2rad(80.0), deg2rad(80.0));
        nlos += complex_gaussian(rng) * steering(cfg, Location{theta, 0.0, inf});
    }
    nlos /= std::sqrt(static_cast<double>(scatterers));
    return std::sqrt(rician_k / (rician_k + 1.0)) * los + std::sqrt(1.0 / (rician_k + 1.0)) * nlos;
}

TrainingTrace run_training(const RhsConfig& cfg, const std::vector<TrainingUser>& users, const Codebook& codebook,
                           const TrainingOptions& options) {
    cfg.validate();
    require(!users.empty(), "training needs at least one user");
    require(!codebook.layers.empty(), "codebook has no layers");
    require(codebook.columns == cfg.cols, "codebook was designed for a different row length");
    require(options.bins.count >= 1, "need at least one range bin");
    require(!std::isnan(options.snr_db), "snr must be a number");
    RangeBins bins = options.bins;
    if (!(bins.mu_max > 0.0)) bins.mu_max = codebook.mu_max;
    require(bins.mu_max > 0.0, "range bins need a positive mu_max");

    const std::size_t u_count = users.size();
    const CVec feed = row_feed(cfg);
    const double noise =
        options.snr_db == inf ? 0.0 : db_to_linear(-options.snr_db) / static_cast<double>(cfg.element_count());
    Rng rng(mix_seed(options.seed, 7));

    TrainingTrace trace;
    std::vector<CVec> channels;
    for (std::size_t u = 0; u < u_count; ++u) {
        channels.push_back(training_channel(cfg, users[u], options.rician_k, options.scatterers,
                                            mix_seed(options.seed, 100 + u)));
        UserOutcome o;
        o.truth = phi_mu_transform(users[u].theta, users[u].range);
        o.failed = !codebook.terminal_cell(o.truth.phi).has_value();
        trace.users.push_back(o);
    }

    auto measure = [&](const HolographicPattern& codeword, TrainingSlot& slot) {
        const std::size_t last = options.windows ? cfg.cols - codeword.size() : 0;
        slot.window.assign(u_count, 0);
        slot.power.assign(u_count, -1.0);
        for (std::size_t u = 0; u < u_count; ++u) {
            for (std::size_t w = 0; w <= last; ++w) {
                cd y = window_amplitude(cfg, channels[u], feed, codeword, w);
                if (noise > 0.0) y += complex_gaussian(rng, noise);
                const double p = std::norm(y);
                if (p > slot.power[u]) {
                    slot.power[u] = p;
                    slot.window[u] = w;
                }
            }
        }
    };

    std::vector<std::size_t> cell(u_count, 0);
    for (std::size_t s = 0; s < codebook.layers.size(); ++s) {
        const auto& layer = codebook.layers[s];
        require(layer.codewords.size() == 2, "every layer needs two codewords");
        std::vector<std::vector<double>> power(2);
        for (std::size_t p = 0; p < 2; ++p) {
            TrainingSlot slot;
            slot.layer = s;
            slot.codeword = p;
            measure(layer.codewords[p].pattern, slot);
            power[p] = slot.power;
            trace.slots.push_back(std::move(slot));
        }
        for (std::size_t u = 0; u < u_count; ++u) {
            const std::size_t parent = s == 0 ? 0 : cell[u];
            cell[u] = 2 * parent + (power[1][u] > power[0][u] ? 1 : 0);
            trace.users[u].path.push_back(cell[u]);
        }
    }
    const auto& cells = codebook.layers.back().cells;
    std::vector<double> phis;
    for (std::size_t u = 0; u < u_count; ++u) {
        trace.users[u].cell = cell[u];
        trace.users[u].estimate.phi = cells[cell[u]].center();
        phis.push_back(trace.users[u].estimate.phi);
    }

    const auto distance = design_distance_codewords(cfg, phis, bins);
    std::vector<double> best(u_count, -1.0);
    std::vector<std::size_t> bin(u_count, 0);
    for (std::size_t j = 0; j < distance.size(); ++j) {
        TrainingSlot slot;
        slot.phase = TrainingSlot::Phase::distance;
        slot.layer = j;
        slot.codeword = j;
        measure(distance[j], slot);
        for (std::size_t u = 0; u < u_count; ++u)
            if (slot.power[u] > best[u]) {
                best[u] = slot.power[u];
                bin[u] = j;
            }
        trace.slots.push_back(std::move(slot));
    }
    trace.slots_used = trace.slots.size();

    std::vector<HolographicPattern> focus;
    for (std::size_t u = 0; u < u_count; ++u) {
        auto& o = trace.users[u];
        o.bin = bin[u];
        o.estimate.mu = bins.center(bin[u]);
        o.cell_correct = !o.failed && cells[o.cell].contains(o.truth.phi) && bins.bin_of(o.truth.mu) == bin[u];
        focus.push_back(pattern_for_location(cfg, from_center(phi_mu_inverse(o.estimate), row_center(cfg, cfg.cols))));
    }
    const Vec weights = Vec::Constant(static_cast<Eigen::Index>(u_count), 1.0 / static_cast<double>(u_count));
    trace.final_pattern = scale_to_leakage(cfg, superpose_patterns(focus, weights).pattern, ApertureWindow::full(cfg));

    if (u_count <= cfg.feed_count) {
        const Beamformer bf = make_beamformer(cfg, trace.final_pattern);
        CMat h(static_cast<Eigen::Index>(u_count), static_cast<Eigen::Index>(cfg.feed_count));
        for (std::size_t u = 0; u < u_count; ++u) h.row(static_cast<Eigen::Index>(u)) = channels[u].transpose() * bf.matrix;
        CMat b = h.completeOrthogonalDecomposition().pseudoInverse();
        const double fro = b.squaredNorm();
        if (fro > 0.0) b *= std::sqrt(options.tx_power / fro);
        const CMat g = h * b;
        for (Eigen::Index u = 0; u < g.rows(); ++u)
            for (Eigen::Index v = 0; v < g.cols(); ++v) {
                if (u == v) continue;
                const double denom = h.row(u).norm() * b.col(v).norm();
                if (denom > 0.0) trace.max_leakage_ratio = std::max(trace.max_leakage_ratio, std::abs(g(u, v)) / denom);
            }
        trace.digital = b;
    }
    return trace;
}

}  // namespace holobeam
