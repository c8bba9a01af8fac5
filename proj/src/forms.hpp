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

#ifndef HOLOBEAM_SRC_FORMS_HPP
#define HOLOBEAM_SRC_FORMS_HPP

#include <cmath>
#include <vector>

#include "holobeam/types.hpp"

namespace holobeam::detail {

// Every quantity of one block is a quadratic (or complex bilinear) form of
// the real block vector v: g_j = A_j v with A_j complex K x dim.
struct BlockForms {
    std::vector<Mat> power;                // targets: ||g_j||^2
    std::vector<std::vector<CMat>> cross;  // targets a < b: g_b^H g_a (symmetrised)
    std::vector<Mat> user_signal;          // |g_u[u]|^2
    std::vector<Mat> user_interference;    // sum_{k != u} |g_u[k]|^2
};

inline Mat gram(const CMat& a) {
    const Mat m = (a.adjoint() * a).real();
    return 0.5 * (m + m.transpose());
}

inline BlockForms make_forms(const std::vector<CMat>& target_maps, const std::vector<CMat>& user_maps, std::size_t users) {
    BlockForms f;
    for (const auto& a : target_maps) f.power.push_back(gram(a));
    f.cross.resize(target_maps.size());
    for (std::size_t a = 0; a < target_maps.size(); ++a)
        for (std::size_t b = a + 1; b < target_maps.size(); ++b) {
            const CMat c = target_maps[a].transpose() * target_maps[b].conjugate();
            f.cross[a].push_back(0.5 * (c + c.transpose()));
        }
    for (std::size_t u = 0; u < users; ++u) {
        const CMat& a = user_maps[u];
        CMat sig = a.row(static_cast<Eigen::Index>(u));
        CMat rest(a.rows() - 1, a.cols());
        Eigen::Index k = 0;
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            if (r != static_cast<Eigen::Index>(u)) rest.row(k++) = a.row(r);
        f.user_signal.push_back(gram(sig));
        f.user_interference.push_back(rest.rows() > 0 ? gram(rest) : Mat::Zero(a.cols(), a.cols()));
    }
    return f;
}

inline double utility(const BlockForms& f, double alpha0, const Vec& v, Vec* grad) {
    const auto j = f.power.size();
    double pa = 0.0;
    if (grad) grad->setZero(v.size());
    for (const auto& p : f.power) {
        const Vec pv = p * v;
        pa += v.dot(pv);
        if (grad) *grad += 2.0 * pv;
    }
    pa /= static_cast<double>(j);
    if (grad) *grad /= static_cast<double>(j);
    if (j < 2 || alpha0 == 0.0) return pa;
    double acc = 0.0;
    Vec gacc = Vec::Zero(v.size());
    for (const auto& row : f.cross)
        for (const auto& c : row) {
            const CVec cv = c * v.cast<cd>();
            const cd val = v.cast<cd>().dot(cv);  // v real: v^T C v
            acc += std::norm(val);
            if (grad) gacc += 2.0 * (std::conj(val) * 2.0 * cv).real();
        }
    const double w = 2.0 / static_cast<double>(j * (j - 1));
    const double rmsc = std::sqrt(w * acc);
    if (grad && rmsc > 0.0) *grad -= alpha0 * (w / (2.0 * rmsc)) * gacc;
    return pa - alpha0 * rmsc;
}

}  // namespace holobeam::detail

#endif
