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

#include "holobeam/beamtrain.hpp"
#include "holobeam/metrics.hpp"
#include "holobeam/random.hpp"

using namespace holobeam;

TEST_SUITE_BEGIN("beamtrain");

namespace {

constexpr double lambda = 0.01;

RhsConfig row(std::size_t cols = 128) {
    auto cfg = RhsConfig::linear(cols, lambda / 6, lambda);
    cfg.attenuation = 1.0;
    return cfg;
}

const Codebook& small_book() {
    static const Codebook book = [] {
        CodebookOptions o;
        o.layers = 3;
        o.mu_max = 0.1;
        return design_angle_codebook(row(), o);
    }();
    return book;
}

}  // namespace

TEST_CASE("phi-mu transform") {
    auto p = phi_mu_transform(0.0, 10.0);
    CHECK(p.phi == doctest::Approx(0.0));
    CHECK(p.mu == doctest::Approx(0.1));
    CHECK(phi_mu_transform(0.7).mu == 0.0);
    p = phi_mu_transform(deg2rad(30.0), 3.0);
    CHECK(p.phi == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.mu == doctest::Approx(0.25).epsilon(1e-14));
    const Location back = phi_mu_inverse(p);
    CHECK(back.theta == doctest::Approx(deg2rad(30.0)).epsilon(1e-14));
    CHECK(back.range == doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(phi_mu_transform(0.1, 0.0), Error);
    CHECK_THROWS_AS(phi_mu_transform(0.1, -1.0), Error);

    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        const double theta = uniform(rng, -1.5, 1.5), r = uniform(rng, 0.01, 100.0);
        const Location l = phi_mu_inverse(phi_mu_transform(theta, r));
        REQUIRE(std::abs(l.theta - theta) <= 1e-12);
        REQUIRE(std::abs(l.range - r) <= 1e-9 * r);
    }
}

TEST_CASE("codebook structure") {
    const auto& book = small_book();
    REQUIRE(book.layers.size() == 3);
    for (std::size_t s = 0; s < book.layers.size(); ++s) {
        const auto& layer = book.layers[s];
        CHECK(layer.cells.size() == (std::size_t{2} << s));
        CHECK(layer.cells.front().lo == doctest::Approx(-book.span));
        CHECK(layer.cells.back().hi == doctest::Approx(book.span));
        for (std::size_t k = 0; k + 1 < layer.cells.size(); ++k)
            CHECK(layer.cells[k].hi == doctest::Approx(layer.cells[k + 1].lo));
        if (s > 0)
            for (std::size_t k = 0; k < layer.cells.size(); ++k) {
                const auto& parent = book.layers[s - 1].cells[k / 2];
                CHECK(layer.cells[k].lo >= parent.lo - 1e-12);
                CHECK(layer.cells[k].hi <= parent.hi + 1e-12);
            }
        CHECK(layer.contrast >= 3.0);
        for (const auto& cw : layer.codewords) {
            CHECK(cw.pattern.in_box());
            const auto local = RhsConfig::linear(layer.aperture, lambda / 6, lambda);
            auto c = local;
            c.attenuation = 1.0;
            CHECK(leakage_margins(c, cw.pattern, ApertureWindow::full(c)).minCoeff() >= -leakage_tolerance);
        }
    }
}

TEST_CASE("first layer separates the two half spans") {
    CodebookOptions o;
    o.layers = 1;
    o.mu_max = 0.1;
    const auto book = design_angle_codebook(row(), o);
    const auto& l = book.layers[0];
    for (double phi : {-book.span / 2, book.span / 2}) {
        const std::size_t cell = phi < 0 ? 0 : 1;
        const double own = codeword_gain(row(), l.codewords[cell].pattern, {phi, 0.0});
        const double other = codeword_gain(row(), l.codewords[1 - cell].pattern, {phi, 0.0});
        CHECK(own > other);
    }
}

TEST_CASE("single-beam width follows the active aperture") {
    const std::size_t na = 64;
    const auto cfg = row(na);
    const auto beam = pattern_for_direction(cfg, 0.0);
    const double peak = codeword_gain(cfg, beam, {0.0, 0.0});
    double edge = 0.0;
    for (double phi = 0.0; phi < 0.5; phi += 1e-5)
        if (codeword_gain(cfg, beam, {phi, 0.0}) < peak / std::sqrt(2.0)) {
            edge = phi;
            break;
        }
    const double want = lambda / (static_cast<double>(na) * cfg.element_spacing);
    CHECK(2.0 * edge == doctest::Approx(want).epsilon(0.15));
}

TEST_CASE("distance codewords average the per-user patterns") {
    const auto cfg = row();
    const RangeBins bins{3, 0.2};
    const auto one = design_distance_codewords(cfg, {0.3}, bins);
    const auto twice = design_distance_codewords(cfg, {0.3, 0.3}, bins);
    REQUIRE(one.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) CHECK((one[j].amplitudes - twice[j].amplitudes).norm() < 1e-12);
    const auto pair = design_distance_codewords(cfg, {-0.4, 0.3}, bins);
    for (std::size_t j = 0; j < 3; ++j) {
        const double mu = bins.center(j);
        const double far_off = codeword_gain(cfg, pair[j], {0.0, mu});
        CHECK(codeword_gain(cfg, pair[j], {-0.4, mu}) > 3.0 * far_off);
        CHECK(codeword_gain(cfg, pair[j], {0.3, mu}) > 3.0 * far_off);
    }
}

TEST_CASE("sliding window candidates and ties") {
    auto cfg = row(40);
    const auto ch = synth_channel({PathSpec{Regime::far, 0.2, 0.0, inf, cd(1.0, 0.0)}}, cfg, 1);
    CHECK(sliding_window_select(cfg, 12, ch, HolographicPattern::ones(12)).candidates == 29);
    CHECK(sliding_window_select(cfg, 40, ch, HolographicPattern::ones(40)).candidates == 1);
    for (std::size_t n = 1; n <= 40; n += 3)
        CHECK(sliding_window_select(cfg, n, ch, HolographicPattern::ones(n)).candidates == 40 - n + 1);

    HybridChannel flat;
    flat.element_count = 40;
    flat.vector = CVec::Constant(40, cd(1.0, 0.0));
    Rng rng(3);
    const HolographicPattern cw(uniform_vector(rng, 12));
    const auto pick = sliding_window_select(cfg, 12, flat, cw);
    CHECK(pick.index == 0);
    for (std::size_t w = 1; w < 29; ++w)
        CHECK(window_power(cfg, flat.vector, cw, w) < window_power(cfg, flat.vector, cw, w - 1));
}

TEST_CASE("noiseless training on cell centres") {
    const auto cfg = row();
    const auto& book = small_book();
    const RangeBins bins{1, book.mu_max};
    std::size_t slots = 0;
    for (std::size_t users : {1, 2, 4}) {
        Rng rng(users);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<TrainingUser> us;
            std::vector<std::size_t> want;
            for (std::size_t u = 0; u < users; ++u) {
                const auto k = static_cast<std::size_t>(uniform(rng, 0.0, 8.0));
                want.push_back(k);
                const Location l = phi_mu_inverse({book.layers.back().cells[k].center(), 0.0});
                us.push_back({l.theta, l.range, 0.0});
            }
            TrainingOptions o;
            o.bins = bins;
            const auto tr = run_training(cfg, us, book, o);
            if (slots == 0) slots = tr.slots_used;
            CHECK(tr.slots_used == slots);
            for (std::size_t u = 0; u < users; ++u) {
                CHECK(tr.users[u].cell == want[u]);
                CHECK(tr.users[u].cell_correct);
                const auto& path = tr.users[u].path;
                for (std::size_t s = 1; s < path.size(); ++s) CHECK(path[s] / 2 == path[s - 1]);
            }
        }
    }
    CHECK(slots == 2 * book.layers.size() + bins.count);
}

TEST_CASE("users outside the span are flagged") {
    const auto& book = small_book();
    TrainingOptions o;
    o.bins = RangeBins{1, book.mu_max};
    const auto tr = run_training(row(), {{deg2rad(75.0), inf, 0.0}, {0.0, inf, 0.0}}, book, o);
    CHECK(tr.users[0].failed);
    CHECK(!tr.users[0].cell_correct);
    CHECK(!tr.users[1].failed);
}

TEST_CASE("zero forcing nulls inter-user leakage") {
    auto cfg = RhsConfig::planar(4, 128, lambda / 6, lambda);
    cfg.attenuation = 1.0;
    CodebookOptions co;
    co.layers = 3;
    co.mu_max = 0.1;
    const auto book = design_angle_codebook(cfg, co);
    TrainingOptions o;
    o.bins = RangeBins{1, book.mu_max};
    const std::vector<TrainingUser> us{{-0.5, inf, deg2rad(-20.0)}, {0.1, inf, deg2rad(5.0)}, {0.6, 4.0, deg2rad(30.0)}};
    const auto tr = run_training(cfg, us, book, o);
    REQUIRE(tr.digital.has_value());
    CHECK(tr.max_leakage_ratio <= 1e-8);
    CHECK(tr.digital->squaredNorm() == doctest::Approx(o.tx_power));
}

TEST_CASE("deeper codebooks cost throughput") {
    double last = inf;
    for (std::size_t layers = 1; layers <= 6; ++layers) {
        const double eta = throughput(static_cast<double>(2 * layers + 2), 100.0, {4.0, 3.0});
        CHECK(eta <= last);
        last = eta;
    }
}

TEST_SUITE_END();
