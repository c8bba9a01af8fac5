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

#include "holobeam/wavefield.hpp"

#include <cmath>

#include "holobeam/error.hpp"
#include "holobeam/random.hpp"

namespace holobeam {
namespace {

struct Positions {
    Vec y;
    Vec z;
};

Positions linear_positions(std::size_t n, double spacing) {
    Positions p{Vec::Zero(static_cast<Eigen::Index>(n)), Vec(static_cast<Eigen::Index>(n))};
    for (std::size_t i = 0; i < n; ++i) p.z(static_cast<Eigen::Index>(i)) = static_cast<double>(i) * spacing;
    return p;
}

Positions surface_positions(const RhsConfig& cfg) {
    const auto n = static_cast<Eigen::Index>(cfg.element_count());
    Positions p{Vec(n), Vec(n)};
    for (std::size_t i = 0; i < cfg.element_count(); ++i) {
        p.y(static_cast<Eigen::Index>(i)) = static_cast<double>(cfg.row_of(i)) * cfg.element_spacing;
        p.z(static_cast<Eigen::Index>(i)) = static_cast<double>(cfg.col_of(i)) * cfg.element_spacing;
    }
    return p;
}

CVec steer(const Positions& pos, double wavelength, const Location& t) {
    const double k = 2.0 * pi / wavelength;
    const auto n = pos.z.size();
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    const double uz = std::sin(t.theta);
    const double uy = std::cos(t.theta) * std::sin(t.phi);
    CVec s(n);
    if (t.far_field()) {
        for (Eigen::Index i = 0; i < n; ++i) s(i) = std::polar(norm, k * (pos.z(i) * uz + pos.y(i) * uy));
        return s;
    }
    const double r = t.range;
    const double ux = std::cos(t.theta) * std::cos(t.phi);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dx = r * ux;
        const double dy = r * uy - pos.y(i);
        const double dz = r * uz - pos.z(i);
        const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
        s(i) = std::polar(norm, -k * (dist - r));
    }
    return s;
}

HybridChannel build_channel(const std::vector<PathSpec>& spec, const Positions& pos, double wavelength,
                            std::uint64_t seed) {
    require(!spec.empty(), "channel needs at least one path");
    Rng rng(mix_seed(seed, 0));
    HybridChannel ch;
    ch.element_count = static_cast<std::size_t>(pos.z.size());
    ch.vector = CVec::Zero(pos.z.size());
    for (PathSpec p : spec) {
        if (p.regime == Regime::near) require(p.range > 0.0 && std::isfinite(p.range), "near-field path needs a positive range");
        if (!p.gain) p.gain = complex_gaussian(rng);
        ch.vector += *p.gain * steer(pos, wavelength, p.location());
        ch.paths.push_back(p);
    }
    return ch;
}

}  // namespace

CVec steering(std::size_t n, double spacing, double wavelength, double theta, std::optional<double> range) {
    require(n >= 1, "steering needs at least one element");
    require(spacing > 0.0 && wavelength > 0.0, "spacing and wavelength must be positive");
    Location t{theta, 0.0, inf};
    if (range) {
        require(*range > 0.0, "range must be positive");
        t.range = *range;
    }
    return steer(linear_positions(n, spacing), wavelength, t);
}

CVec steering(const RhsConfig& cfg, const Location& target) {
    if (!target.far_field()) require(target.range > 0.0, "range must be positive");
    return steer(surface_positions(cfg), cfg.wavelength, target);
}

double rayleigh_distance(double aperture, double wavelength) {
    require(aperture > 0.0 && wavelength > 0.0, "aperture and wavelength must be positive");
    return 2.0 * aperture * aperture / wavelength;
}

HolographicPattern pattern_for_location(const RhsConfig& cfg, const Location& target) {
    cfg.validate();
    return pattern_for_steering(cfg, steering(cfg, target));
}

HybridChannel synth_channel(const std::vector<PathSpec>& spec, std::size_t n, double spacing, double wavelength,
                            std::uint64_t seed) {
    require(n >= 1, "channel needs at least one element");
    return build_channel(spec, linear_positions(n, spacing), wavelength, seed);
}

HybridChannel synth_channel(const std::vector<PathSpec>& spec, const RhsConfig& cfg, std::uint64_t seed) {
    return build_channel(spec, surface_positions(cfg), cfg.wavelength, seed);
}

std::vector<BeampatternSample> beampattern(const Beamformer& bf, const RhsConfig& cfg, const ApertureWindow& window,
                                           const CMat& digital, const std::vector<Location>& grid) {
    require(!grid.empty(), "beampattern grid must not be empty");
    require(static_cast<std::size_t>(digital.rows()) == bf.feeds(), "digital beamformer rows must equal feed count");
    require(bf.elements() == cfg.element_count(), "beamformer does not match the configuration");
    const Positions pos = surface_positions(cfg);
    const CMat radiated = window.mask(cfg).cast<cd>().asDiagonal() * bf.matrix * digital;  // N x K
    std::vector<BeampatternSample> out;
    out.reserve(grid.size());
    for (const auto& dir : grid) {
        const CVec s = steer(pos, cfg.wavelength, dir);
        out.push_back({dir, (s.transpose() * radiated).squaredNorm()});
    }
    return out;
}

std::vector<Location> direction_grid(double theta_min, double theta_max, double step, double phi) {
    require(step > 0.0 && theta_max >= theta_min, "invalid grid bounds");
    std::vector<Location> grid;
    const auto count = static_cast<std::size_t>(std::floor((theta_max - theta_min) / step + 1e-9)) + 1;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) grid.push_back(Location{theta_min + static_cast<double>(i) * step, phi, inf});
    return grid;
}

}  // namespace holobeam
