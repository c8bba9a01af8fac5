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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "holobeam/chanest.hpp"
#include "holobeam/random.hpp"

using namespace holobeam;

TEST_SUITE_BEGIN("chanest");

namespace {

constexpr double lambda = 0.01;

HybridChannel on_grid(const Dictionary& dict, const std::vector<std::pair<std::size_t, cd>>& paths) {
    HybridChannel ch;
    ch.element_count = static_cast<std::size_t>(dict.atoms.rows());
    ch.vector = CVec::Zero(dict.atoms.rows());
    for (const auto& [g, gain] : paths) ch.vector += gain * dict.atoms.col(static_cast<Eigen::Index>(g));
    return ch;
}

double max_coherence(const CMat& atoms) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < atoms.cols(); ++i)
        for (Eigen::Index j = i + 1; j < atoms.cols(); ++j)
            worst = std::max(worst, std::abs(atoms.col(i).dot(atoms.col(j))));
    return worst;
}

}  // namespace

TEST_CASE("angular dictionary on the DFT grid is orthonormal") {
    const auto d = build_dictionary(32, lambda / 2, lambda, DictionaryDomain::angular, 32);
    CHECK(d.size() == 32);
    for (Eigen::Index g = 0; g < d.atoms.cols(); ++g) CHECK(d.atoms.col(g).norm() == doctest::Approx(1.0));
    CHECK(max_coherence(d.atoms) <= 1e-10);
    const auto grid = angular_grid(4);
    CHECK(grid == std::vector<double>{-0.75, -0.25, 0.25, 0.75});
}

TEST_CASE("joint dictionary layout") {
    const auto d = build_dictionary(32, lambda / 4, lambda, DictionaryDomain::joint, 16, 3);
    CHECK(d.size() == 16 + 16 * 3);
    CHECK(d.angular_count == 16);
    CHECK_THROWS_AS(build_dictionary(32, lambda / 4, lambda, DictionaryDomain::polar, 16), Error);
    CHECK_THROWS_AS(build_dictionary(32, lambda / 4, lambda, DictionaryDomain::angular, 1), Error);

    // adjacent rings at one phi respect the coherence bound
    const auto polar = build_dictionary(64, lambda / 4, lambda, DictionaryDomain::polar, 8, 6, 0.5);
    for (std::size_t i = 0; i + 1 < polar.size(); ++i) {
        if (polar.grid[i].phi != polar.grid[i + 1].phi) continue;
        const auto a = static_cast<Eigen::Index>(i);
        CHECK(std::abs(polar.atoms.col(a).dot(polar.atoms.col(a + 1))) <= 0.5 + 1e-9);
    }
}

TEST_CASE("vanishing mu reproduces the far-field atom") {
    const CVec far = dictionary_atom(64, lambda / 4, lambda, {0.3, 0.0});
    const CVec near = dictionary_atom(64, lambda / 4, lambda, {0.3, 1e-9});
    CHECK((far - near).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("near-field atoms track the spherical wavefront") {
    const double phi = 0.3, r = 10.0;
    const double mu = (1.0 - phi * phi) / r;
    const CVec atom = dictionary_atom(200, lambda / 4, lambda, {phi, mu});
    const CVec exact = steering(200, lambda / 4, lambda, std::asin(phi), r);
    CHECK(std::abs(atom.dot(exact)) >= 0.99);
}

TEST_CASE("pilot simulation") {
    const auto cfg = RhsConfig::linear(200, lambda / 4, lambda);
    const auto ch = synth_channel({PathSpec{Regime::far, 0.2}, PathSpec{Regime::near, -0.4, 0.0, 3.0}}, 200, lambda / 4,
                                  lambda, 3);
    const auto clean = simulate_pilots(ch, cfg, 20, inf, 4);
    CHECK(clean.sensing.rows() == 20);
    CHECK(clean.sensing.cols() == 200);
    CHECK(clean.noise_power == 0.0);
    CHECK((clean.observations - clean.sensing * ch.vector).norm() == 0.0);
    for (Eigen::Index q = 0; q < 20; ++q) CHECK(clean.sensing.row(q).norm() == doctest::Approx(1.0));

    const auto a = simulate_pilots(ch, cfg, 20, 10.0, 4);
    const auto b = simulate_pilots(ch, cfg, 20, 10.0, 4);
    CHECK(a.observations == b.observations);
    CHECK(a.sensing == b.sensing);
    const double signal = (a.sensing * ch.vector).squaredNorm();
    CHECK(a.noise_power * 20.0 == doctest::Approx(0.1 * signal).epsilon(1e-9));
}

TEST_CASE("OMP") {
    const std::size_t n = 128;
    const auto cfg = RhsConfig::linear(n, lambda / 4, lambda);
    const auto dict = build_dictionary(n, lambda / 4, lambda, DictionaryDomain::angular, n / 2);

    SUBCASE("single on-grid path is recovered exactly") {
        const auto ch = on_grid(dict, {{20, {0.6, -0.3}}});
        const auto r = omp(simulate_pilots(ch, cfg, 16, inf, 2), dict, 1);
        REQUIRE(r.support.size() == 1);
        CHECK(r.support[0].index == 20);
        CHECK(nmse(r.estimate, ch.vector) <= 1e-20);
    }
    SUBCASE("residual is orthogonal to the chosen atoms and shrinks") {
        const auto ch = synth_channel({PathSpec{Regime::far, 0.21}, PathSpec{Regime::far, -0.5}}, n, lambda / 4, lambda, 5);
        const auto p = simulate_pilots(ch, cfg, 24, 15.0, 6);
        const auto r = omp(p, dict, 4);
        CHECK(r.support.size() == 4);
        CVec fit = CVec::Zero(24);
        for (const auto& s : r.support) fit += s.coefficient * (p.sensing * dict.atoms.col(static_cast<Eigen::Index>(s.index)));
        const CVec resid = p.observations - fit;
        for (const auto& s : r.support)
            CHECK(std::abs((p.sensing * dict.atoms.col(static_cast<Eigen::Index>(s.index))).dot(resid)) <= 1e-8);
        for (std::size_t i = 1; i < r.residual_trace.size(); ++i) CHECK(r.residual_trace[i] <= r.residual_trace[i - 1] + 1e-12);
        CHECK_THROWS_AS(omp(p, dict, 25), Error);
    }
    SUBCASE("zero observations give a zero estimate") {
        PilotSet p;
        p.sensing = CMat::Identity(8, n);
        p.observations = CVec::Zero(8);
        const auto r = omp(p, dict, 2);
        CHECK(r.estimate.norm() == 0.0);
        CHECK(r.residual_norm == 0.0);
    }
    SUBCASE("a near-field path smears across angular atoms") {
        const auto ch = synth_channel({PathSpec{Regime::far, 0.3, 0.0, inf, cd(1.0, 0.0)},
                                       PathSpec{Regime::near, -0.2, 0.0, 1.0, cd(1.0, 0.0)}},
                                      n, lambda / 4, lambda, 7);
        const auto r = omp(simulate_pilots(ch, cfg, 24, inf, 8), dict, 2);
        CHECK(nmse(r.estimate, ch.vector) > 1e-2);
    }
}

TEST_CASE("PD-OMP") {
    const std::size_t n = 128;
    const auto cfg = RhsConfig::linear(n, lambda / 4, lambda);
    const auto angular = build_dictionary(n, lambda / 4, lambda, DictionaryDomain::angular, n / 2);
    const auto joint = build_dictionary(n, lambda / 4, lambda, DictionaryDomain::joint, n / 2, 8);

    SUBCASE("far-only on-grid channel matches OMP") {
        const auto ch = on_grid(angular, {{40, {1.0, 0.5}}});
        const auto p = simulate_pilots(ch, cfg, 16, inf, 9);
        const auto a = omp(p, angular, 1);
        const auto b = pd_omp(p, joint);
        CHECK((a.estimate - b.estimate).norm() <= 1e-12 * ch.vector.norm());
    }
    SUBCASE("noiseless on-grid hybrid channel is recovered") {
        const std::size_t near = joint.angular_count + 10 * 8 + 2;  // phi index 10, third ring
        const auto ch = on_grid(joint, {{45, {1.0, 0.0}}, {near, {0.0, 0.8}}});
        const auto r = pd_omp(simulate_pilots(ch, cfg, 32, inf, 3), joint);
        CHECK(nmse(r.estimate, ch.vector) <= 1e-10);
    }
    SUBCASE("no two selected atoms share a diffusion set") {
        const auto ch = synth_channel({PathSpec{Regime::far, 0.25}, PathSpec{Regime::near, -0.3, 0.0, 2.0}}, n, lambda / 4,
                                      lambda, 4);
        const auto r = pd_omp(simulate_pilots(ch, cfg, 20, 10.0, 5), joint);
        for (std::size_t i = 0; i < r.support.size(); ++i)
            for (std::size_t j = i + 1; j < r.support.size(); ++j) {
                const auto a = static_cast<Eigen::Index>(r.support[i].index);
                const auto b = static_cast<Eigen::Index>(r.support[j].index);
                CHECK(std::abs(joint.atoms.col(a).dot(joint.atoms.col(b))) < 0.5);
            }
    }
    CHECK_THROWS_AS(pd_omp(PilotSet{CMat::Identity(4, n), CVec::Zero(4), 0.0}, angular), Error);
}

TEST_CASE("NMSE") {
    CVec h(3);
    h << cd(1.0, 2.0), cd(-0.5, 0.0), cd(0.0, 3.0);
    CHECK(nmse(h, h) == 0.0);
    CHECK(nmse(CVec::Zero(3), h) == doctest::Approx(1.0));
    CHECK(nmse(2.0 * h, h) == doctest::Approx(1.0));
    CHECK_THROWS_AS(nmse(h, CVec::Zero(3)), Error);
}

TEST_SUITE_END();
