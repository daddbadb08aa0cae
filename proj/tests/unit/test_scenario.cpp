// SPDX-License-Identifier: Apache-2.0
//
// sync-lab: fingerprint-spectrum CFO/TO synchronization toolkit for OFDM sensing
// Copyright (C) 2026 The sync-lab Authors
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

#include <catch_amalgamated.hpp>

#include <algorithm>

#include "synclab/scenario.hpp"

using namespace synclab;
using Catch::Matchers::WithinRel;

namespace {

bool has_code(const std::vector<Violation>& v, const std::string& code)
{
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == code; });
}

} // namespace

TEST_CASE("derive_grids resolutions")
{
    OfdmParams o{28e9, 100e3, 128, 16, 32, 1};
    GridSpec g = derive_grids(o);
    CHECK_THAT(g.delay_resolution_s, WithinRel(78.125e-9, 1e-12));
    CHECK_THAT(g.doppler_resolution_hz, WithinRel(1.0 / (32 * 144 / 12.8e6), 1e-12));
    CHECK_THAT(g.doppler_resolution_hz, WithinRel(2777.78, 1e-6));
    CHECK(g.n_delay_bins == 128);
    CHECK(g.n_doppler_bins == 32);

    o.k_pad = 2;
    g = derive_grids(o);
    CHECK_THAT(g.delay_resolution_s, WithinRel(39.0625e-9, 1e-12));
}

TEST_CASE("grid cells tile the unambiguous span")
{
    for (int k : {1, 2, 4, 8}) {
        OfdmParams o{28e9, 60e3, 64, 8, 20, k};
        const GridSpec g = derive_grids(o);
        CHECK_THAT(g.n_delay_bins * g.delay_resolution_s, WithinRel(1.0 / o.subcarrier_spacing_hz, 1e-12));
        CHECK_THAT(g.n_doppler_bins * g.doppler_resolution_hz, WithinRel(1.0 / o.symbol_duration(), 1e-12));
        CHECK_THAT(o.sample_interval() * o.n_subcarriers * o.subcarrier_spacing_hz, WithinRel(1.0, 1e-12));
        CHECK(o.symbol_samples() == o.n_subcarriers + o.n_cp);
    }
}

TEST_CASE("steering_vector examples")
{
    const double lambda = 0.01;
    for (const cd& x : steering_vector(5, lambda / 2, lambda, kPi / 2))
        CHECK(std::abs(x - cd(1.0, 0.0)) < 1e-12);

    const CVector one = steering_vector(1, lambda / 2, lambda, 0.3);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == cd(1.0, 0.0));

    const CVector alt = steering_vector(4, lambda / 2, lambda, 0.0);
    const double expect[] = {1, -1, 1, -1};
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(alt[static_cast<std::size_t>(k)] - cd(expect[k], 0.0)) < 1e-12);
}

TEST_CASE("steering_vector is unimodular")
{
    for (double angle : {-2.0, -0.3, 0.0, 0.7, 1.9, 3.1})
        for (const cd& x : steering_vector(16, 0.37, 0.011, angle))
            CHECK(std::abs(std::abs(x) - 1.0) < 1e-12);
}

TEST_CASE("steering precoder points at the requested departure angle")
{
    const ArrayParams a = ArrayParams::uniform(4, 4, 28e9);
    const CVector w = steering_precoder(a, 0.6);
    double n2 = 0.0;
    for (const cd& x : w)
        n2 += std::norm(x);
    CHECK_THAT(n2, WithinRel(1.0, 1e-12));
    const CVector omega = steering_vector(4, a.spacing_m, a.wavelength_m, 0.6);
    cd gain{};
    for (int k = 0; k < 4; ++k)
        gain += omega[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)];
    CHECK_THAT(std::abs(gain), WithinRel(2.0, 1e-12));
}

TEST_CASE("path static flag follows velocity")
{
    PathParams p;
    CHECK(p.is_static());
    p.velocity_mps = 1e-300;
    CHECK_FALSE(p.is_static());
    p.velocity_mps = 5.0;
    CHECK_THAT(p.doppler_hz(28e9), WithinRel(2 * 5.0 / kSpeedOfLight * 28e9, 1e-12));
    CHECK_THAT(p.doppler_hz(28e9), WithinRel(933.98, 1e-5));
}

TEST_CASE("validate examples")
{
    CHECK(validate(full_scenario()).empty());
    CHECK(validate(desk_scenario()).empty());
    CHECK(full_scenario().array.n_rx == 64);
    CHECK(full_scenario().ofdm.n_subcarriers == 128);
    CHECK(full_scenario().ofdm.n_cp == 16);

    Scenario s = desk_scenario();
    for (auto& p : s.paths)
        p.velocity_mps = 3.0;
    CHECK(has_code(validate(s), "no-static-path"));

    s = desk_scenario();
    s.paths[1].delay_s = 1.5 / s.ofdm.subcarrier_spacing_hz;
    CHECK(has_code(validate(s), "delay-exceeds-symbol"));

    s = desk_scenario();
    s.paths.clear();
    CHECK(has_code(validate(s), "no-path"));
}

TEST_CASE("validate reports every violation")
{
    Scenario s = desk_scenario();
    s.ofdm.k_pad = 0;
    s.array.precoder = {cd(1.0, 0.0), cd(1.0, 0.0)};
    s.antenna_index = 99;
    s.paths[0].delay_s = -1e-9;
    s.noise_variance = -1.0;
    const auto v = validate(s);
    for (const char* code :
         {"bad-k-pad", "precoder-not-unit-norm", "antenna-index-out-of-range", "negative-delay", "bad-noise-variance"})
        CHECK(has_code(v, code));
    CHECK_THROWS_AS(require_valid(s), Error);
}

TEST_CASE("drift must stay inside the unambiguous range")
{
    Scenario s = desk_scenario();
    s.offsets.to_drift_s = 0.5 / s.ofdm.subcarrier_spacing_hz;
    CHECK(has_code(validate(s), "to-drift-ambiguous"));
    s = desk_scenario();
    s.offsets.cfo_drift_hz = -0.5 / s.ofdm.symbol_duration();
    CHECK(has_code(validate(s), "cfo-drift-ambiguous"));
    s.offsets.cfo_drift_hz = -0.49 / s.ofdm.symbol_duration();
    CHECK(validate(s).empty());
}

TEST_CASE("offsets advance by the drift")
{
    OffsetState o{10.0, 1e-7, 2.5, 3e-8};
    const OffsetState a = o.advanced();
    CHECK(a.cfo_hz == 12.5);
    CHECK_THAT(a.to_s, WithinRel(1.3e-7, 1e-15));
    CHECK(a.cfo_drift_hz == o.cfo_drift_hz);
    CHECK(a.to_drift_s == o.to_drift_s);
}

TEST_CASE("desk preset has two static and two dynamic paths")
{
    const Scenario s = desk_scenario();
    CHECK(s.paths.size() == 4);
    CHECK(s.static_count() == 2);
    CHECK(s.ofdm.n_subcarriers == 64);
    CHECK(s.ofdm.n_cp == 8);
    CHECK(s.ofdm.n_symbols == 32);
    CHECK(s.ofdm.k_pad == 4);
    CHECK(s.array.n_rx == 8);
    CHECK(s.array.n_tx == 2);
}
