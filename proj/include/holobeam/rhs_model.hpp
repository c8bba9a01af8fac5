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

#ifndef HOLOBEAM_RHS_MODEL_HPP
#define HOLOBEAM_RHS_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "holobeam/error.hpp"
#include "holobeam/types.hpp"

namespace holobeam {

// Coordinate convention used throughout the library:
//  * the surface lies in the y-z plane, element (n_y, n_z) sits at
//    y = n_y * spacing, z = n_z * spacing;
//  * every row is fed from its left edge (z = 0) and the reference wave
//    travels towards +z, so the guided path length of an element is z;
//  * the flat element index is n = n_z * rows + n_y.

/// Surface geometry, feed layout and waveguide constants.
struct RhsConfig {
    std::size_t rows = 1;                      // N_y, one feed per row
    std::size_t cols = 1;                      // N_z
    double element_spacing = 0.0;              // meters
    double wavelength = 0.0;                   // free-space, meters
    double waveguide_index = 1.7320508075688772;  // k_s = 2 pi n_wg / lambda
    double attenuation = 3.0;                  // nepers / meter
    std::size_t feed_count = 1;                // must equal rows
    std::vector<double> power_split{1.0};      // chi_{n_y, n_y} per row

    std::size_t element_count() const { return rows * cols; }
    std::size_t index(std::size_t row, std::size_t col) const { return col * rows + row; }
    std::size_t row_of(std::size_t n) const { return n % rows; }
    std::size_t col_of(std::size_t n) const { return n / rows; }

    double free_space_wavenumber() const { return 2.0 * pi / wavelength; }
    double guided_wavenumber() const { return 2.0 * pi * waveguide_index / wavelength; }
    double aperture_length() const { return static_cast<double>(cols) * element_spacing; }

    /// Throws Error(config) for unusable values; returns non-fatal warnings.
    std::vector<std::string> validate() const;

    /// Linear surface with one feed and default waveguide constants.
    static RhsConfig linear(std::size_t cols, double spacing, double wavelength);
    static RhsConfig planar(std::size_t rows, std::size_t cols, double spacing, double wavelength);
};

/// Per-element radiation amplitudes psi_n in [0, 1].
struct HolographicPattern {
    Vec amplitudes;

    HolographicPattern() = default;
    explicit HolographicPattern(Vec a) : amplitudes(std::move(a)) {}
    static HolographicPattern zeros(std::size_t n) { return HolographicPattern(Vec::Zero(static_cast<Eigen::Index>(n))); }
    static HolographicPattern ones(std::size_t n) { return HolographicPattern(Vec::Ones(static_cast<Eigen::Index>(n))); }

    std::size_t size() const { return static_cast<std::size_t>(amplitudes.size()); }
    bool in_box() const;
};

/// Contiguous run of active elements in one row.
struct RowSpan {
    std::size_t first = 0;
    std::size_t count = 0;
};

/// Effective aperture: one contiguous span per row; a zero count disables the row.
struct ApertureWindow {
    std::vector<RowSpan> rows;

    static ApertureWindow full(const RhsConfig& cfg);
    static ApertureWindow uniform(const RhsConfig& cfg, std::size_t first, std::size_t count);

    void check(const RhsConfig& cfg) const;
    /// d_n per element, flat-indexed like the surface.
    Vec mask(const RhsConfig& cfg) const;
    std::size_t active_count() const;
};

/// The N x L feed-to-element map F (independent of the pattern).
CMat build_propagation_matrix(const RhsConfig& cfg);

/// Leakage weights eta_n = w_{n_y, n_z, n_y}^2.
Vec leakage_weights(const RhsConfig& cfg);

/// M = diag(psi) F with its two factors kept alongside.
struct Beamformer {
    CMat propagation;
    HolographicPattern pattern;
    CMat matrix;

    Beamformer() = default;
    Beamformer(CMat f, HolographicPattern p);
    std::size_t elements() const { return static_cast<std::size_t>(propagation.rows()); }
    std::size_t feeds() const { return static_cast<std::size_t>(propagation.cols()); }
};

Beamformer make_beamformer(const RhsConfig& cfg, const HolographicPattern& pattern);

/// Hologram amplitude (Re[object * conj(reference)] + 1) / 2 for an arbitrary unit-modulus object wave given per element as
/// the steering vector the radiated field has to match.
HolographicPattern pattern_for_steering(const RhsConfig& cfg, const CVec& steering);

struct SuperposeResult {
    HolographicPattern pattern;
    bool rescaled = false;
    double scale = 1.0;  // divisor applied to the raw sum
};

/// Weighted sum of patterns, divided by its maximum if that exceeds one.
/// Negative raw entries are clipped to zero.
SuperposeResult superpose_patterns(const std::vector<HolographicPattern>& patterns, const Vec& weights);

/// Nearest point of {0, 1/(levels-1), ..., 1}; exact midpoints round down.
HolographicPattern quantize_pattern(const HolographicPattern& pattern, std::size_t levels);

/// 1 - sum_{n_z} psi^2 d eta per row; feasible rows have slack >= -1e-9.
Vec leakage_margins(const RhsConfig& cfg, const HolographicPattern& pattern, const ApertureWindow& window);

inline constexpr double leakage_tolerance = 1e-9;

/// Uniform rescale so that every row satisfies the leakage cap (never scales up
/// unless `tight` is set, in which case the binding row is brought to the cap
/// without leaving the amplitude box).
HolographicPattern scale_to_leakage(const RhsConfig& cfg, const HolographicPattern& pattern,
                                    const ApertureWindow& window, bool tight = false, double cap = 1.0);

/// y = D M x.
CVec apply_beamformer(const Beamformer& bf, const RhsConfig& cfg, const ApertureWindow& window, const CVec& feed_signals);

}  // namespace holobeam

#endif
