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

#include "holobeam/random.hpp"
#include "holobeam/wavefield.hpp"

using namespace holobeam;

TEST_SUITE_BEGIN("wavefield");

TEST_CASE("broadside steering is flat") {
    const CVec a = steering(4, 0.005, 0.01, 0.0);
    for (int n = 0; n < 4; ++n) CHECK(std::abs(a(n) - cd(0.5, 0.0)) < 1e-15);
}

TEST_CASE("steering vectors have unit norm") {
    Rng rng(17);
    for (int i = 0; i < 10000; ++i) {
        const auto n = static_cast<std::size_t>(uniform(rng, 1.0, 64.0));
        const double theta = uniform(rng, -1.5, 1.5);
        std::optional<double> r;
        if (i % 2) r = uniform(rng, 0.1, 50.0);
        const double norm = steering(n, uniform(rng, 0.001, 0.005), 0.01, theta, r).norm();
        REQUIRE(std::abs(norm - 1.0) < 1e-12);
    }
}

TEST_CASE("far range near-field steering approaches the plane wave") {
    const double lambda = 0.01;
    const CVec a = steering(32, lambda / 2, lambda, 0.4);
    const CVec b = steering(32, lambda / 2, lambda, 0.4, 1e6 * lambda);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("DFT grid steering vectors are orthogonal") {
    const std::size_t n = 16;
    const double lambda = 0.01, d = lambda / 2;
    std::vector<CVec> grid;
    for (int q = -7; q <= 7; ++q) grid.push_back(steering(n, d, lambda, std::asin(q * lambda / (n * d))));
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) worst = std::max(worst, std::abs(grid[i].dot(grid[j])));
    CHECK(worst <= 1e-10);
}

TEST_CASE("Rayleigh distance") {
    CHECK(rayleigh_distance(1.0, 0.0125) == doctest::Approx(160.0).epsilon(1e-14));
    CHECK(rayleigh_distance(0.01, 0.01) == doctest::Approx(0.02).epsilon(1e-14));
    const double lambda = speed_of_light / 30e9;
    const double r = rayleigh_distance(256 * lambda / 4, lambda);
    CHECK(r == doctest::Approx(81.9).epsilon(1e-3));
    CHECK_THROWS_AS(rayleigh_distance(0.0, 0.01), Error);
}

TEST_CASE("beampattern") {
    const double lambda = 0.01;
    const auto cfg = RhsConfig::linear(64, lambda / 4, lambda);
    const auto window = ApertureWindow::full(cfg);
    const double target = deg2rad(25.0);
    const auto bf = make_beamformer(cfg, pattern_for_direction(cfg, target));
    const auto grid = direction_grid(deg2rad(-80.0), deg2rad(80.0), deg2rad(0.5));

    SUBCASE("no excitation gives no power") {
        for (const auto& s : beampattern(bf, cfg, window, CMat::Zero(1, 1), grid)) CHECK(s.power == 0.0);
    }
    SUBCASE("peak lands on the designed direction") {
        const auto pat = beampattern(bf, cfg, window, CMat::Ones(1, 1), grid);
        const auto best = std::max_element(pat.begin(), pat.end(),
                                           [](const auto& a, const auto& b) { return a.power < b.power; });
        CHECK(std::abs(best->direction.theta - target) <= deg2rad(0.5) + 1e-12);
    }
    SUBCASE("power is quadratic in the excitation") {
        double p1 = 0.0, p2 = 0.0;
        for (const auto& s : beampattern(bf, cfg, window, CMat::Ones(1, 1), grid)) p1 += s.power;
        for (const auto& s : beampattern(bf, cfg, window, CMat::Constant(1, 1, cd(2.0, 0.0)), grid)) p2 += s.power;
        CHECK(p2 == doctest::Approx(4.0 * p1).epsilon(1e-12));
    }
    SUBCASE("rank-one excitation matches the radiated field") {
        const CMat x = CMat::Constant(1, 1, cd(0.3, -0.7));
        const CVec y = apply_beamformer(bf, cfg, window, x.col(0));
        const Location dir{deg2rad(-12.0), 0.0, inf};
        const double want = std::norm((steering(cfg, dir).transpose() * y).value());
        CHECK(beampattern(bf, cfg, window, x, {dir})[0].power == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK_THROWS_AS(beampattern(bf, cfg, window, CMat::Ones(2, 1), grid), Error);
}

TEST_CASE("channel synthesis") {
    const double lambda = 0.01, d = lambda / 2;
    SUBCASE("single broadside far path") {
        const auto ch = synth_channel({PathSpec{Regime::far, 0.0, 0.0, inf, cd(1.0, 0.0)}}, 8, d, lambda, 1);
        CHECK((ch.vector - steering(8, d, lambda, 0.0)).norm() < 1e-15);
        CHECK(ch.vector.norm() == doctest::Approx(1.0));
    }
    SUBCASE("drawn gains are seeded") {
        const std::vector<PathSpec> spec{{Regime::far, 0.3}, {Regime::near, -0.2, 0.0, 2.0}};
        const auto a = synth_channel(spec, 16, d, lambda, 9);
        const auto b = synth_channel(spec, 16, d, lambda, 9);
        CHECK(a.vector == b.vector);
        CHECK(a.paths[0].gain.has_value());
    }
    SUBCASE("unit-gain hybrid channel equals the path sum") {
        const std::vector<PathSpec> spec{{Regime::far, 0.3, 0.0, inf, cd(1.0, 0.0)},
                                         {Regime::near, -0.2, 0.0, 2.0, cd(1.0, 0.0)}};
        const auto ch = synth_channel(spec, 16, d, lambda, 2);
        const CVec want = steering(16, d, lambda, 0.3) + steering(16, d, lambda, -0.2, 2.0);
        CHECK((ch.vector - want).norm() < 1e-14);
        CHECK(ch.vector.squaredNorm() <= 4.0);
    }
    CHECK_THROWS_AS(synth_channel({}, 4, d, lambda, 1), Error);
}

TEST_SUITE_END();
