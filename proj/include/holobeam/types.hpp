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

#ifndef HOLOBEAM_TYPES_HPP
#define HOLOBEAM_TYPES_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace holobeam {

using cd = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double speed_of_light = 299792458.0;

inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// A propagation target seen from the surface origin (element (0, 0)).
///
/// `theta` is measured from broadside towards the feed axis (+z), so that
/// sin(theta) is the direction cosine along the rows. `phi` tilts the
/// direction towards the row-stacking axis (+y); it is zero for linear
/// arrays. A finite `range` selects the exact spherical-wave model.
struct Location {
    double theta = 0.0;
    double phi = 0.0;
    double range = inf;

    bool far_field() const { return !(range < inf); }
};

}  // namespace holobeam

#endif
