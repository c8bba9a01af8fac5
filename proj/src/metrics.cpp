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

#include "holobeam/metrics.hpp"

#include <cmath>
#include <numeric>

#include "holobeam/error.hpp"
#include "holobeam/wavefield.hpp"

namespace holobeam {

SinrBreakdown sinr(const CVec& user_channel, const Beamformer& bf, const RhsConfig& cfg, const ApertureWindow& window,
                   const CMat& comm_beams, const CMat& radar_beams, std::size_t user, double noise) {
    require(noise > 0.0, "noise power must be positive");
    require(static_cast<std::size_t>(user_channel.size()) == bf.elements(), "channel length must equal element count");
    require(static_cast<std::size_t>(comm_beams.rows()) == bf.feeds(), "B_c rows must equal feed count");
    require(radar_beams.size() == 0 || static_cast<std::size_t>(radar_beams.rows()) == bf.feeds(),
            "B_s rows must equal feed count");
    require(user < static_cast<std::size_t>(comm_beams.cols()), "user index out of range");

    const Eigen::RowVectorXcd g = user_channel.transpose() * window.mask(cfg).cast<cd>().asDiagonal() * bf.matrix;
    SinrBreakdown out;
    out.noise = noise;
    for (Eigen::Index u = 0; u < comm_beams.cols(); ++u) {
        const double p = std::norm((g * comm_beams.col(u))(0));
        if (static_cast<std::size_t>(u) == user)
            out.signal = p;
        else
            out.interference += p;
    }
    if (radar_beams.size() > 0) out.interference += (g * radar_beams).squaredNorm();
    return out;
}

double mimo_rate(const CMat& channel, const CMat& covariance, double noise) {
    require(noise > 0.0, "noise power must be positive");
    require(covariance.rows() == covariance.cols() && covariance.cols() == channel.cols(),
            "covariance must be square with the channel's column count");
    require((covariance - covariance.adjoint()).norm() <= 1e-9 * std::max(1.0, covariance.norm()),
            "covariance must be Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(covariance, Eigen::EigenvaluesOnly);
    if (covariance.rows() > 0 && es.eigenvalues().minCoeff() < -1e-9)
        fail(ErrorKind::argument, "covariance must be positive semidefinite");
    const CMat gram = channel * covariance * channel.adjoint() / noise;
    Eigen::SelfAdjointEigenSolver<CMat> eg(gram, Eigen::EigenvaluesOnly);
    double rate = 0.0;
    for (Eigen::Index i = 0; i < eg.eigenvalues().size(); ++i) rate += std::log2(1.0 + std::max(0.0, eg.eigenvalues()(i)));
    return rate;
}

double outage_probability(const std::vector<double>& rate_samples, double threshold) {
    require(!rate_samples.empty(), "outage needs at least one rate sample");
    const auto below = std::count_if(rate_samples.begin(), rate_samples.end(), [&](double r) { return r < threshold; });
    return static_cast<double>(below) / static_cast<double>(rate_samples.size());
}

void RadarUtilityConfig::validate() const {
    require(!directions.empty(), "radar utility needs at least one direction");
    require(alpha0 >= 0.0, "alpha0 must be non-negative");
    require(bands.empty() || bands.size() == directions.size(), "one band per direction required");
    for (const auto& [lo, hi] : bands) require(lo <= hi, "band lower bound exceeds upper bound");
}

RadarUtility radar_utility(const Beamformer& bf, const RhsConfig& cfg, const ApertureWindow& window, const CMat& digital,
                           const RadarUtilityConfig& radar) {
    radar.validate();
    require(static_cast<std::size_t>(digital.rows()) == bf.feeds(), "digital beamformer rows must equal feed count");
    const CMat radiated = window.mask(cfg).cast<cd>().asDiagonal() * bf.matrix * digital;
    const std::size_t j_count = radar.directions.size();
    std::vector<Eigen::RowVectorXcd> rows;
    rows.reserve(j_count);
    RadarUtility out;
    for (const auto& dir : radar.directions) {
        rows.push_back(steering(cfg, dir).transpose() * radiated);
        out.powers.push_back(rows.back().squaredNorm());
    }
    out.average_power = std::accumulate(out.powers.begin(), out.powers.end(), 0.0) / static_cast<double>(j_count);
    if (j_count > 1) {
        double acc = 0.0;
        for (std::size_t a = 0; a + 1 < j_count; ++a)
            for (std::size_t b = a + 1; b < j_count; ++b) acc += std::norm(rows[a].dot(rows[b]));
        // rows[a].dot(rows[b]) conjugates rows[a]; |.| is unaffected.
        out.rmsc = std::sqrt(2.0 / static_cast<double>(j_count * (j_count - 1)) * acc);
    }
    out.utility = out.average_power - radar.alpha0 * out.rmsc;
    return out;
}

double throughput(double training_slots, double frame_slots, const std::vector<double>& rates) {
    require(frame_slots > 0.0, "frame must contain at least one slot");
    require(training_slots >= 0.0, "training slots must be non-negative");
    require(training_slots <= frame_slots, "training slots exceed the frame");
    const double sum = std::accumulate(rates.begin(), rates.end(), 0.0);
    return (1.0 - training_slots / frame_slots) * sum;
}

double cost_effectiveness(double cost_rhs, double cost_pa) {
    require(cost_pa > 0.0, "PA cost must be positive");
    return 1.0 - cost_rhs / cost_pa;
}

}  // namespace holobeam
