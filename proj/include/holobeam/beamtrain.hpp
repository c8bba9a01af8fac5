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

#ifndef HOLOBEAM_BEAMTRAIN_HPP
#define HOLOBEAM_BEAMTRAIN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "holobeam/rhs_model.hpp"
#include "holobeam/types.hpp"
#include "holobeam/wavefield.hpp"

namespace holobeam {

/// phi = sin(theta) (direction cosine along the rows), mu = cos^2(theta) / r.
/// theta follows the library convention (from broadside); mu = 0 is far field.
struct PhiMuPoint {
    double phi = 0.0;
    double mu = 0.0;
};

PhiMuPoint phi_mu_transform(double theta, double range = inf);
/// Inverse map; mu = 0 gives an infinite range.
Location phi_mu_inverse(const PhiMuPoint& point);

/// Half-open interval [lo, hi) on the phi axis.
struct PhiCell {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double phi) const { return phi >= lo && phi < hi; }
    double center() const { return 0.5 * (lo + hi); }
};

struct Codeword {
    HolographicPattern pattern;  // one amplitude per active element of the window
    std::vector<std::size_t> cells;  // indices into the layer's cell list
};

struct CodebookLayer {
    std::size_t aperture = 0;      // N_a, elements in the sliding window
    std::vector<PhiCell> cells;    // partition of the span, 2^(s+1) cells
    std::vector<Codeword> codewords;  // codeword p covers the cells of parity p
    double gain_target = 0.0;      // D
    double contrast = 0.0;         // mean in-cell over mean out-of-cell gain |a^T M b|
};

struct Codebook {
    std::vector<CodebookLayer> layers;
    double span = 0.0;      // cells cover [-span, span)
    double mu_max = 0.0;    // largest mu used for the design samples
    double epsilon = 0.5;   // coherence bound between range bins
    std::size_t columns = 0;

    /// Cell index at the last layer for a phi value, if inside the span.
    std::optional<std::size_t> terminal_cell(double phi) const;
};

struct CodebookOptions {
    std::size_t layers = 5;
    std::size_t angle_samples = 0;   // I; zero picks 8 per cell of the deepest layer
    std::size_t range_samples = 3;   // J
    double span = 0.8660254037844386;  // sin(60 deg)
    std::optional<double> mu_max;    // default 4 / Rayleigh distance of the row
    std::optional<double> gain;      // D; default sqrt(0.2 * beamwidth / span) times the single-beam peak
    std::vector<std::size_t> apertures;  // N_a per layer; empty sizes every layer for the deepest cells
    double epsilon = 0.5;
    int max_iter = 300;
    std::uint64_t seed = 1;
};

/// Hierarchical two-codeword-per-layer angular codebook for row 0 of `cfg`.
/// Each codeword minimises sum (|a(phi_i, mu_j)^T diag(psi) f| - G_ij)^2 with
/// G = D inside its cells and 0 outside, over the box and the leakage cap.
Codebook design_angle_codebook(const RhsConfig& cfg, const CodebookOptions& options = {});

/// Window-local gain |a(phi, mu)^T diag(psi) f| of a codeword; near-field
/// points are referred to the window centre.
double codeword_gain(const RhsConfig& cfg, const HolographicPattern& pattern, const PhiMuPoint& point);

/// Uniform mu bins on [0, mu_max); bin j is [j, j + 1) * mu_max / J.
struct RangeBins {
    std::size_t count = 1;
    double mu_max = 0.0;
    double width() const { return mu_max / static_cast<double>(count); }
    double center(std::size_t j) const { return (static_cast<double>(j) + 0.5) * width(); }
    std::optional<std::size_t> bin_of(double mu) const;
};

/// Codeword j averages the row patterns focused on (phi_u, centre of bin j),
/// referred to the row centre, over all users, then scales to the leakage cap.
std::vector<HolographicPattern> design_distance_codewords(const RhsConfig& cfg, const std::vector<double>& user_phis,
                                                          const RangeBins& bins);

struct WindowChoice {
    std::size_t index = 0;
    double power = 0.0;
    std::size_t candidates = 0;  // N - N_a + 1
};

/// Places `codeword` (N_a amplitudes) at every contiguous position of row 0
/// and returns the strongest received power |h^T D M e_0|^2; ties go to the
/// lowest index.
WindowChoice sliding_window_select(const RhsConfig& cfg, std::size_t aperture, const HybridChannel& channel,
                                   const HolographicPattern& codeword);

/// Received power of a window-local codeword at one window position.
double window_power(const RhsConfig& cfg, const CVec& channel, const HolographicPattern& codeword, std::size_t first);

/// User position relative to the centre of the surface's rows.
struct TrainingUser {
    double theta = 0.0;   // radians
    double range = inf;   // meters
    double elevation = 0.0;  // radians towards +y; invisible to row 0
};

struct TrainingOptions {
    RangeBins bins{8, 0.0};       // mu_max = 0 takes the codebook's
    double snr_db = inf;          // one full-amplitude element of a unit-norm channel over the noise
    bool windows = true;
    double rician_k = inf;        // inf gives pure line of sight
    std::size_t scatterers = 8;
    double tx_power = 1.0;        // final digital stage
    std::uint64_t seed = 1;
};

struct TrainingSlot {
    enum class Phase { angle, distance } phase = Phase::angle;
    std::size_t layer = 0;                  // angle layer or range bin
    std::size_t codeword = 0;
    std::vector<std::size_t> window;        // per user
    std::vector<double> power;              // per user, measured
};

struct UserOutcome {
    bool failed = false;            // outside the codebook span
    PhiMuPoint truth;
    PhiMuPoint estimate;            // cell and bin centres
    std::size_t cell = 0;
    std::size_t bin = 0;
    bool cell_correct = false;      // true location inside the terminal cell
    std::vector<std::size_t> path;  // selected cell per angle layer
};

struct TrainingTrace {
    std::vector<TrainingSlot> slots;
    std::vector<UserOutcome> users;
    std::size_t slots_used = 0;
    HolographicPattern final_pattern;  // averaged focusing pattern on the whole surface
    std::optional<CMat> digital;       // zero forcing, present when U <= L
    double max_leakage_ratio = 0.0;    // max |h_u^T M b_v| / ||h_u^T M|| ||b_v||, u != v
};

/// Angle search over the layers (two slots each), distance search over the
/// range bins (one slot each), then the zero-forcing final stage.
TrainingTrace run_training(const RhsConfig& cfg, const std::vector<TrainingUser>& users, const Codebook& codebook,
                           const TrainingOptions& options = {});

/// Channel of one user: line of sight plus `scatterers` Rician components.
CVec training_channel(const RhsConfig& cfg, const TrainingUser& user, double rician_k, std::size_t scatterers,
                      std::uint64_t seed);

}  // namespace holobeam

#endif
