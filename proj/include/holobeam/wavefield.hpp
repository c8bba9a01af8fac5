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

#ifndef HOLOBEAM_WAVEFIELD_HPP
#define HOLOBEAM_WAVEFIELD_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "holobeam/rhs_model.hpp"
#include "holobeam/types.hpp"

namespace holobeam {

// Steering vectors are normalised to unit Euclidean norm. The far-field
// vector of a linear array is [1, e^{j k d sin(theta)}, ...] / sqrt(N); the
// near-field vector uses exact element-to-target distances measured from
// element 0, e^{-j k (r_n - r)} / sqrt(N), so that it tends to the far-field
// vector entry-wise as r grows.

/// Linear array along +z with `n` elements.
CVec steering(std::size_t n, double spacing, double wavelength, double theta, std::optional<double> range = std::nullopt);

/// Steering vector of a (possibly planar) surface towards `target`.
CVec steering(const RhsConfig& cfg, const Location& target);

/// 2 D^2 / lambda.
double rayleigh_distance(double aperture, double wavelength);

/// Hologram amplitude (Re[object * conj(reference)] + 1) / 2 that steers (or
/// focuses, for finite range) the radiated field towards `target`.
HolographicPattern pattern_for_location(const RhsConfig& cfg, const Location& target);

inline HolographicPattern pattern_for_direction(const RhsConfig& cfg, double theta, double phi = 0.0) {
    return pattern_for_location(cfg, Location{theta, phi, inf});
}

enum class Regime { far, near };

struct PathSpec {
    Regime regime = Regime::far;
    double theta = 0.0;            // radians
    double phi = 0.0;              // radians, planar surfaces only
    double range = inf;            // meters, near-field paths only
    std::optional<cd> gain;        // drawn CN(0, 1) from the seed when absent

    Location location() const { return Location{theta, phi, regime == Regime::near ? range : inf}; }
};

struct HybridChannel {
    std::vector<PathSpec> paths;   // every gain resolved
    std::size_t element_count = 0;
    CVec vector;                   // h = sum_k g_k s_k
};

/// Multipath channel for a linear array.
HybridChannel synth_channel(const std::vector<PathSpec>& spec, std::size_t n, double spacing, double wavelength,
                            std::uint64_t seed);

/// Multipath channel for a configured surface (planar steering).
HybridChannel synth_channel(const std::vector<PathSpec>& spec, const RhsConfig& cfg, std::uint64_t seed);

struct BeampatternSample {
    Location direction;
    double power = 0.0;  // watts
};

/// Power ||s(dir)^T D M B||^2 radiated towards every grid direction.
std::vector<BeampatternSample> beampattern(const Beamformer& bf, const RhsConfig& cfg, const ApertureWindow& window,
                                           const CMat& digital, const std::vector<Location>& grid);

/// Uniform theta grid (phi fixed), inclusive of both ends.
std::vector<Location> direction_grid(double theta_min, double theta_max, double step, double phi = 0.0);

}  // namespace holobeam

#endif
