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

#ifndef HOLOBEAM_CHANEST_HPP
#define HOLOBEAM_CHANEST_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "holobeam/rhs_model.hpp"
#include "holobeam/types.hpp"
#include "holobeam/wavefield.hpp"

namespace holobeam {

enum class DictionaryDomain { angular, polar, joint };

/// Grid label of one atom: phi = sin(theta) (direction cosine along the
/// array), mu = cos^2(theta) / r, zero for far-field atoms.
struct AtomLabel {
    double phi = 0.0;
    double mu = 0.0;
};

struct Dictionary {
    CMat atoms;  // N x G, unit-norm columns
    std::vector<AtomLabel> grid;
    DictionaryDomain domain = DictionaryDomain::angular;
    std::size_t angular_count = 0;  // leading far-field atoms
    double mu_step = 0.0;           // ring spacing of the polar atoms

    std::size_t size() const { return grid.size(); }
};

/// phi_g = -1 + (2g + 1) / G_a.
std::vector<double> angular_grid(std::size_t bins);

/// Smallest ring spacing for which neighbouring polar atoms at broadside have
/// coherence at most `epsilon`.
double polar_ring_step(std::size_t n, double spacing, double wavelength, double epsilon = 0.5);

/// Angular atoms on the phi grid, polar atoms on rings mu_k = k * mu_step
/// (k = 1..G_r) at every phi; joint concatenates both.
Dictionary build_dictionary(std::size_t n, double spacing, double wavelength, DictionaryDomain domain,
                            std::size_t angular_bins, std::optional<std::size_t> range_rings = std::nullopt,
                            double epsilon = 0.5);

/// Atom for a grid label. Near-field atoms (mu > 0) use the second-order
/// phase k (z phi - mu z^2 / 2), so equal mu steps give equal coherence at every phi.
CVec dictionary_atom(std::size_t n, double spacing, double wavelength, const AtomLabel& label);

struct PilotSet {
    CMat sensing;        // Q x N
    CVec observations;   // Q
    double noise_power = 0.0;  // per observation
};

/// Q random hologram observations: row q is (psi_q o f)^T normalised, psi_q
/// uniform in [0, 1]^N and f the feed-0 propagation vector of `cfg`. Noise is
/// scaled to the realised signal power; snr_db = +inf gives no noise.
PilotSet simulate_pilots(const HybridChannel& channel, const RhsConfig& cfg, std::size_t q, double snr_db,
                         std::uint64_t seed);

struct SupportAtom {
    std::size_t index = 0;
    cd coefficient{0.0, 0.0};
};

struct EstimateReport {
    CVec estimate;
    std::vector<SupportAtom> support;
    double residual_norm = 0.0;
    std::size_t iterations = 0;
    std::vector<double> residual_trace;  // ||r|| after each iteration
};

/// Orthogonal matching pursuit with exactly K atoms.
EstimateReport omp(const PilotSet& pilots, const Dictionary& dict, std::size_t sparsity);

struct PdOmpOptions {
    std::optional<double> residual_tol;  // on ||r||^2; default noise_power * Q * 1.1
    std::size_t max_paths = 8;
    double diffusion_threshold = 0.5;    // atom coherence defining a diffusion set
    /// A path is kept only if it lowers ||r||^2 by more than this many noise
    /// powers; negative selects 2 ln(G). Zero disables the test.
    double gain_floor = -1.0;
};

/// Power-diffusion-aware OMP over a joint dictionary. Every iteration takes
/// the strongest correlation, forms its diffusion set, keeps the set member
/// that best explains the observations and bars the whole set afterwards.
/// Earlier paths are then re-placed within their own sets.
EstimateReport pd_omp(const PilotSet& pilots, const Dictionary& dict, const PdOmpOptions& options = {});

/// ||estimate - truth||^2 / ||truth||^2.
double nmse(const CVec& estimate, const CVec& truth);

}  // namespace holobeam

#endif
