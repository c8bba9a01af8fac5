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

#ifndef HOLOBEAM_METRICS_HPP
#define HOLOBEAM_METRICS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "holobeam/rhs_model.hpp"
#include "holobeam/types.hpp"

namespace holobeam {

struct SinrBreakdown {
    double signal = 0.0;
    double interference = 0.0;
    double noise = 0.0;

    double sinr() const { return signal / (interference + noise); }
};

/// Downlink SINR of `user` for x = B_c c + B_s s with unit-power independent
/// symbols: the other users' streams and every radar stream interfere.
SinrBreakdown sinr(const CVec& user_channel, const Beamformer& bf, const RhsConfig& cfg, const ApertureWindow& window,
                   const CMat& comm_beams, const CMat& radar_beams, std::size_t user, double noise);

/// log2 det(I + H R H^H / N0) in bits/s/Hz.
double mimo_rate(const CMat& channel, const CMat& covariance, double noise);

/// Fraction of samples strictly below `threshold`.
double outage_probability(const std::vector<double>& rate_samples, double threshold);

struct RadarUtilityConfig {
    std::vector<Location> directions;                 // J target directions; index 0 is the reference
    double alpha0 = 0.0;                              // RMSC weight
    std::vector<std::pair<double, double>> bands;     // (gamma_l, gamma_u) per direction, empty = unconstrained

    void validate() const;
};

struct RadarUtility {
    double utility = 0.0;
    double average_power = 0.0;  // P_a
    double rmsc = 0.0;
    std::vector<double> powers;  // P(theta_j, phi_j)
};

/// P_a - alpha0 * RMSC for the radiated covariance M B B^H M^H.
/// A single direction has RMSC = 0.
RadarUtility radar_utility(const Beamformer& bf, const RhsConfig& cfg, const ApertureWindow& window, const CMat& digital,
                           const RadarUtilityConfig& radar);

/// (1 - t / T) * sum R_u.
double throughput(double training_slots, double frame_slots, const std::vector<double>& rates);

/// 1 - cost_rhs / cost_pa.
double cost_effectiveness(double cost_rhs, double cost_pa);

}  // namespace holobeam

#endif
