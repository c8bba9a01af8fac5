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

#include "holobeam/rhs_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace holobeam {

std::vector<std::string> RhsConfig::validate() const {
    std::vector<std::string> warnings;
    if (rows == 0 || cols == 0) fail(ErrorKind::config, "surface needs at least one row and one column");
    if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
        fail(ErrorKind::config, "element_spacing must be positive");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) fail(ErrorKind::config, "wavelength must be positive");
    if (!(waveguide_index > 0.0) || !std::isfinite(waveguide_index))
        fail(ErrorKind::config, "waveguide_index must be positive");
    if (!(attenuation >= 1.0 && attenuation <= 10.0)) {
        std::ostringstream os;
        os << "attenuation " << attenuation << " Np/m outside the validated range [1, 10]";
        fail(ErrorKind::config, os.str());
    }
    if (feed_count != rows) fail(ErrorKind::config, "feed_count must equal rows (one feed per row)");
    if (power_split.size() != rows) fail(ErrorKind::config, "power_split needs one entry per row");
    for (double chi : power_split)
        if (!(chi > 0.0 && chi <= 1.0)) fail(ErrorKind::config, "power_split entries must lie in (0, 1]");
    if (element_spacing > wavelength / 2.0 * (1.0 + 1e-12))
        warnings.emplace_back("element_spacing exceeds half a wavelength; grating lobes possible");
    return warnings;
}

RhsConfig RhsConfig::linear(std::size_t cols, double spacing, double wavelength) {
    return planar(1, cols, spacing, wavelength);
}

RhsConfig RhsConfig::planar(std::size_t rows, std::size_t cols, double spacing, double wavelength) {
    RhsConfig cfg;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.element_spacing = spacing;
    cfg.wavelength = wavelength;
    cfg.feed_count = rows;
    cfg.power_split.assign(rows, 1.0);
    return cfg;
}

bool HolographicPattern::in_box() const {
    return (amplitudes.array() >= 0.0).all() && (amplitudes.array() <= 1.0).all();
}

ApertureWindow ApertureWindow::full(const RhsConfig& cfg) { return uniform(cfg, 0, cfg.cols); }

ApertureWindow ApertureWindow::uniform(const RhsConfig& cfg, std::size_t first, std::size_t count) {
    ApertureWindow w;
    w.rows.assign(cfg.rows, RowSpan{first, count});
    w.check(cfg);
    return w;
}

void ApertureWindow::check(const RhsConfig& cfg) const {
    require(rows.size() == cfg.rows, "aperture window needs one span per row");
    for (const auto& span : rows)
        require(span.first + span.count <= cfg.cols, "aperture span runs past the end of its row");
}

Vec ApertureWindow::mask(const RhsConfig& cfg) const {
    check(cfg);
    Vec d = Vec::Zero(static_cast<Eigen::Index>(cfg.element_count()));
    for (std::size_t r = 0; r < cfg.rows; ++r)
        for (std::size_t c = rows[r].first; c < rows[r].first + rows[r].count; ++c)
            d(static_cast<Eigen::Index>(cfg.index(r, c))) = 1.0;
    return d;
}

std::size_t ApertureWindow::active_count() const {
    std::size_t total = 0;
    for (const auto& span : rows) total += span.count;
    return total;
}

CMat build_propagation_matrix(const RhsConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<Eigen::Index>(cfg.element_count());
    CMat f = CMat::Zero(n, static_cast<Eigen::Index>(cfg.rows));
    const double ks = cfg.guided_wavenumber();
    for (std::size_t r = 0; r < cfg.rows; ++r) {
        const double amp_row = std::sqrt(cfg.power_split[r]);
        for (std::size_t c = 0; c < cfg.cols; ++c) {
            const double path = static_cast<double>(c) * cfg.element_spacing;
            const double w = amp_row * std::exp(-cfg.attenuation * path);
            f(static_cast<Eigen::Index>(cfg.index(r, c)), static_cast<Eigen::Index>(r)) = std::polar(w, -ks * path);
        }
    }
    return f;
}

Vec leakage_weights(const RhsConfig& cfg) {
    cfg.validate();
    Vec eta(static_cast<Eigen::Index>(cfg.element_count()));
    for (std::size_t n = 0; n < cfg.element_count(); ++n) {
        const double path = static_cast<double>(cfg.col_of(n)) * cfg.element_spacing;
        eta(static_cast<Eigen::Index>(n)) = cfg.power_split[cfg.row_of(n)] * std::exp(-2.0 * cfg.attenuation * path);
    }
    return eta;
}

Beamformer::Beamformer(CMat f, HolographicPattern p) : propagation(std::move(f)), pattern(std::move(p)) {
    require(pattern.size() == static_cast<std::size_t>(propagation.rows()), "pattern length must match element count");
    matrix = pattern.amplitudes.cast<cd>().asDiagonal() * propagation;
}

Beamformer make_beamformer(const RhsConfig& cfg, const HolographicPattern& pattern) {
    return Beamformer(build_propagation_matrix(cfg), pattern);
}

HolographicPattern pattern_for_steering(const RhsConfig& cfg, const CVec& steering) {
    require(static_cast<std::size_t>(steering.size()) == cfg.element_count(), "steering length must match element count");
    const double ks = cfg.guided_wavenumber();
    Vec psi(steering.size());
    for (Eigen::Index n = 0; n < steering.size(); ++n) {
        // Object wave: the conjugate of the field the probe collects; reference
        // wave: the guided wave launched with zero phase at the feed.
        const double path = static_cast<double>(cfg.col_of(static_cast<std::size_t>(n))) * cfg.element_spacing;
        const cd object = std::polar(1.0, -std::arg(steering(n)));
        const cd reference = std::polar(1.0, -ks * path);
        psi(n) = std::clamp((std::real(object * std::conj(reference)) + 1.0) / 2.0, 0.0, 1.0);
    }
    return HolographicPattern(std::move(psi));
}

SuperposeResult superpose_patterns(const std::vector<HolographicPattern>& patterns, const Vec& weights) {
    require(!patterns.empty(), "superpose_patterns needs at least one pattern");
    require(static_cast<std::size_t>(weights.size()) == patterns.size(), "one weight per pattern required");
    const auto n = patterns.front().amplitudes.size();
    Vec raw = Vec::Zero(n);
    for (std::size_t s = 0; s < patterns.size(); ++s) {
        require(patterns[s].amplitudes.size() == n, "patterns must have equal length");
        require(std::isfinite(weights(static_cast<Eigen::Index>(s))), "weights must be finite");
        raw += weights(static_cast<Eigen::Index>(s)) * patterns[s].amplitudes;
    }
    raw = raw.cwiseMax(0.0);
    SuperposeResult out;
    const double peak = raw.size() > 0 ? raw.maxCoeff() : 0.0;
    if (peak > 1.0) {
        out.rescaled = true;
        out.scale = peak;
        raw /= peak;
        raw = raw.cwiseMin(1.0);
    }
    out.pattern = HolographicPattern(std::move(raw));
    return out;
}

HolographicPattern quantize_pattern(const HolographicPattern& pattern, std::size_t levels) {
    require(levels >= 2, "quantization needs at least two levels");
    const double steps = static_cast<double>(levels - 1);
    Vec q = pattern.amplitudes;
    for (Eigen::Index n = 0; n < q.size(); ++n) {
        const double scaled = std::clamp(q(n), 0.0, 1.0) * steps;
        // ceil(x - 1/2) rounds to nearest with midpoints going down.
        const double k = std::clamp(std::ceil(scaled - 0.5), 0.0, steps);
        q(n) = k / steps;
    }
    return HolographicPattern(std::move(q));
}

Vec leakage_margins(const RhsConfig& cfg, const HolographicPattern& pattern, const ApertureWindow& window) {
    require(pattern.size() == cfg.element_count(), "pattern length must match element count");
    const Vec eta = leakage_weights(cfg);
    const Vec d = window.mask(cfg);
    Vec slack = Vec::Ones(static_cast<Eigen::Index>(cfg.rows));
    for (std::size_t n = 0; n < cfg.element_count(); ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        const double psi = pattern.amplitudes(i);
        slack(static_cast<Eigen::Index>(cfg.row_of(n))) -= psi * psi * d(i) * eta(i);
    }
    return slack;
}

HolographicPattern scale_to_leakage(const RhsConfig& cfg, const HolographicPattern& pattern,
                                    const ApertureWindow& window, bool tight, double cap) {
    const Vec slack = leakage_margins(cfg, pattern, window);
    double worst = 0.0;  // largest radiated fraction among rows
    for (Eigen::Index r = 0; r < slack.size(); ++r) worst = std::max(worst, 1.0 - slack(r));
    if (worst <= 0.0) return pattern;
    double s = std::sqrt(cap / worst);
    if (!tight && s >= 1.0) return pattern;
    const Vec d = window.mask(cfg);
    double peak = 0.0;
    for (Eigen::Index n = 0; n < d.size(); ++n)
        if (d(n) > 0.0) peak = std::max(peak, pattern.amplitudes(n));
    if (peak > 0.0) s = std::min(s, 1.0 / peak);
    Vec out = (pattern.amplitudes * s).cwiseMin(1.0).cwiseMax(0.0);
    return HolographicPattern(std::move(out));
}

CVec apply_beamformer(const Beamformer& bf, const RhsConfig& cfg, const ApertureWindow& window, const CVec& feed_signals) {
    require(static_cast<std::size_t>(feed_signals.size()) == bf.feeds(), "feed signal length must equal feed count");
    require(bf.elements() == cfg.element_count(), "beamformer does not match the configuration");
    const Vec d = window.mask(cfg);
    return d.cast<cd>().asDiagonal() * (bf.matrix * feed_signals);
}

}  // namespace holobeam
