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

#include <Eigen/SVD>
#include <sstream>

#include "oracles.hpp"
#include "synclab/channel.hpp"

using namespace synclab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Scenario single_path(double delay_s = 0.0)
{
    Scenario s = desk_scenario();
    s.array = ArrayParams::uniform(8, 1, s.ofdm.carrier_hz);
    s.paths = {PathParams{}};
    s.paths[0].delay_s = delay_s;
    s.offsets = {};
    return s;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("path_amplitude examples")
{
    Scenario s = single_path();
    CHECK(std::abs(path_amplitude(s, 0, 0) - cd(1.0, 0.0)) < 1e-12);

    s.offsets.to_s = 0.5 / s.ofdm.carrier_hz;
    CHECK(std::abs(path_amplitude(s, 0, 0) - cd(-1.0, 0.0)) < 1e-9);

    CHECK_THROWS_AS(path_amplitude(s, 3, 0), Error);
    CHECK_THROWS_AS(path_amplitude(s, 0, 8), Error);
}

TEST_CASE("path_amplitude matches a literal re-evaluation")
{
    const Scenario s = full_scenario();
    for (std::size_t l = 0; l < s.paths.size(); ++l)
        for (int m : {0, 5, 63}) {
            const PathParams& p = s.paths[l];
            const double lambda = s.array.wavelength_m;
            const double d = s.array.spacing_m;
            cd tx{};
            for (int k = 0; k < s.array.n_tx; ++k)
                tx += std::exp(cd(0.0, kTwoPi * k * d * std::cos(p.aod_rad) / lambda)) *
                      s.array.precoder[static_cast<std::size_t>(k)];
            const cd expect = std::exp(cd(0.0, -kTwoPi * s.ofdm.carrier_hz * (s.offsets.to_s + p.delay_s))) *
                              p.gain * std::exp(cd(0.0, kTwoPi * m * d * std::cos(p.aoa_rad) / lambda)) * tx;
            CHECK(std::abs(path_amplitude(s, l, m) - expect) < 1e-12);
        }
}

TEST_CASE("doppler_vector examples")
{
    Scenario s = single_path();
    for (const cd& x : doppler_vector(s, 0))
        CHECK(std::abs(x - cd(1.0, 0.0)) < 1e-12);

    const double tsym = s.ofdm.symbol_duration();
    s.offsets.cfo_hz = 1.0 / (s.ofdm.n_symbols * tsym);
    const CVector v = doppler_vector(s, 0);
    const cd step = std::polar(1.0, -kTwoPi / s.ofdm.n_symbols);
    for (std::size_t g = 1; g < v.size(); ++g)
        CHECK(std::abs(v[g] / v[g - 1] - step) < 1e-12);

    // Doppler and CFO enter identically.
    Scenario moving = single_path();
    moving.paths[0].velocity_mps = 5.0;
    Scenario shifted = single_path();
    shifted.offsets.cfo_hz = 2 * 5.0 / kSpeedOfLight * shifted.ofdm.carrier_hz;
    const CVector a = doppler_vector(moving, 0);
    const CVector b = doppler_vector(shifted, 0);
    for (std::size_t g = 0; g < a.size(); ++g)
        CHECK(std::abs(a[g] - b[g]) < 1e-9);
}

TEST_CASE("delay_vector examples")
{
    Scenario s = single_path();
    for (const cd& x : delay_vector(s, 0))
        CHECK(std::abs(x - cd(1.0, 0.0)) < 1e-12);

    const int p = 3;
    s.paths[0].delay_s = p * s.ofdm.sample_interval();
    const CVector v = delay_vector(s, 0);
    const int nc = s.ofdm.n_subcarriers;
    for (int n = 0; n < nc; ++n)
        CHECK(std::abs(v[static_cast<std::size_t>(n)] - std::polar(1.0, -kTwoPi * n * p / nc)) < 1e-12);

    s.paths[0].delay_s = 0.3137e-6;
    s.offsets.to_s = 0.0271e-6;
    const CVector w = delay_vector(s, 0);
    for (int n = 0; n < nc; ++n)
        CHECK(std::abs(w[static_cast<std::size_t>(n)] -
                       std::exp(cd(0.0, -kTwoPi * n * s.ofdm.subcarrier_spacing_hz * (0.3137e-6 + 0.0271e-6)))) <
              1e-12);
}

TEST_CASE("single noiseless path gives a rank-1 snapshot with constant magnitude")
{
    Scenario s = single_path(5 * single_path().ofdm.sample_interval());
    s.paths[0].gain = std::polar(0.7, 0.4);
    const SnapshotMatrix snap = synth_snapshot(s, DataSymbols::qpsk(s.ofdm.n_subcarriers, 3, 0), 0);
    CHECK(snap.n_symbols() == s.ofdm.n_symbols);
    CHECK(snap.n_subcarriers() == s.ofdm.n_subcarriers);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(snap.data));
    const auto sv = svd.singularValues();
    CHECK(sv(1) / sv(0) < 1e-9);
    const double mag = std::abs(path_amplitude(s, 0, 0));
    for (Eigen::Index i = 0; i < snap.data.size(); ++i)
        CHECK_THAT(std::abs(snap.data(i)), WithinRel(mag, 1e-9));
}

TEST_CASE("compensation round trip cancels the data symbols")
{
    const Scenario s = desk_scenario();
    const CMatrix model = stacked_model(s);
    for (int frame = 0; frame < 3; ++frame) {
        const SnapshotMatrix snap = synth_snapshot(s, DataSymbols::qpsk(s.ofdm.n_subcarriers, 11, frame), frame);
        CHECK(max_abs_diff(snap.data, model) < 1e-9 * model.cwiseAbs().maxCoeff());
    }
    const SnapshotMatrix unit = synth_snapshot(s, DataSymbols::unit(s.ofdm.n_subcarriers), 0);
    CHECK(max_abs_diff(unit.data, model) < 1e-9 * model.cwiseAbs().maxCoeff());
}

TEST_CASE("non-unit data symbols are rejected")
{
    const Scenario s = desk_scenario();
    DataSymbols d = DataSymbols::unit(s.ofdm.n_subcarriers);
    d.symbols[4] = cd(1.1, 0.0);
    try {
        synth_snapshot(s, d, 0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::non_unit_symbol);
    }
    for (const cd& c : DataSymbols::qpsk(64, 1, 0).symbols)
        CHECK_THAT(std::abs(c), WithinAbs(1.0, 1e-12));
}

TEST_CASE("pure noise snapshot has the configured second moment")
{
    Scenario s = desk_scenario();
    s.paths[0].gain = 0.0;
    s.paths[1].gain = 0.0;
    s.paths[2].gain = 0.0;
    s.paths[3].gain = 0.0;
    s.noise_variance = 0.37;
    s.ofdm.n_symbols = 128;
    double sum = 0.0;
    double sum_sq = 0.0;
    cd mean{};
    std::size_t count = 0;
    for (int frame = 0; frame < 4; ++frame) {
        const SnapshotMatrix snap = synth_snapshot(s, DataSymbols::unit(s.ofdm.n_subcarriers), frame);
        for (Eigen::Index i = 0; i < snap.data.size(); ++i) {
            const double e = std::norm(snap.data(i));
            sum += e;
            sum_sq += e * e;
            mean += snap.data(i);
            ++count;
        }
    }
    const double n = static_cast<double>(count);
    const double m = sum / n;
    const double se = std::sqrt((sum_sq / n - m * m) / n);
    CHECK(std::abs(m - 0.37) < 4 * se);
    CHECK(std::abs(mean / n) < 4 * std::sqrt(0.37 / n));
}

TEST_CASE("frame drift changes entries by the predicted phase factors")
{
    Scenario s = single_path(0.41e-6);
    s.paths[0].velocity_mps = 0.0;
    s.offsets = OffsetState{1.3e3, 0.11e-6, 0.77e3, 0.052e-6};
    Scenario s2 = s;
    s2.offsets = s.offsets.advanced();
    const SnapshotMatrix a = synth_snapshot(s, DataSymbols::qpsk(s.ofdm.n_subcarriers, 1, 0), 0);
    const SnapshotMatrix b = synth_snapshot(s2, DataSymbols::qpsk(s.ofdm.n_subcarriers, 1, 1), 1);
    const OfdmParams& o = s.ofdm;
    const double df = s.offsets.cfo_drift_hz;
    const double dt = s.offsets.to_drift_s;
    for (int g = 0; g < o.n_symbols; ++g)
        for (int n = 0; n < o.n_subcarriers; ++n) {
            const double phase = -kTwoPi * o.carrier_hz * dt - kTwoPi * df * (g * o.symbol_duration() + o.cp_duration()) -
                                 kTwoPi * n * o.subcarrier_spacing_hz * dt;
            CHECK(std::abs(b.data(g, n) - a.data(g, n) * std::polar(1.0, phase)) < 1e-9);
        }
}

TEST_CASE("snapshot synthesis properties")
{
    Scenario s = desk_scenario();
    s.noise_variance = 0.2;
    const DataSymbols d = DataSymbols::qpsk(s.ofdm.n_subcarriers, 5, 2);
    const SnapshotMatrix a = synth_snapshot(s, d, 2);
    const SnapshotMatrix b = synth_snapshot(s, d, 2);
    CHECK(a.data == b.data);
    const SnapshotMatrix c = synth_snapshot(s, d, 3);
    CHECK(a.data != c.data);

    // Linearity over path sets.
    Scenario all = desk_scenario();
    Scenario first = all;
    Scenario second = all;
    first.paths.resize(2);
    second.paths.erase(second.paths.begin(), second.paths.begin() + 2);
    second.paths[0].velocity_mps = 0.0;
    all.paths[2].velocity_mps = 0.0;
    CHECK(max_abs_diff(stacked_model(all), stacked_model(first) + stacked_model(second)) < 1e-12);

    // Velocity v with zero CFO equals a static path under CFO 2 v f_c / c.
    Scenario moving = single_path(0.3e-6);
    moving.paths[0].velocity_mps = 7.5;
    Scenario cfo = single_path(0.3e-6);
    cfo.offsets.cfo_hz = moving.paths[0].doppler_hz(moving.ofdm.carrier_hz);
    CHECK(max_abs_diff(synth_snapshot(moving, DataSymbols::unit(64), 0).data,
                       synth_snapshot(cfo, DataSymbols::unit(64), 0).data) < 1e-9);
}

TEST_CASE("exact synthesis stays close to the constant-phase approximation")
{
    Scenario s = desk_scenario();
    s.ofdm.n_symbols = 8;
    const DataSymbols d = DataSymbols::qpsk(s.ofdm.n_subcarriers, 9, 0);
    const SnapshotMatrix approx = synth_snapshot(s, d, 0);
    const SnapshotMatrix exact = synth_snapshot(s, d, 0, SynthesisMode::exact);
    const double rel = (approx.data - exact.data).norm() / approx.data.norm();
    // Intra-symbol drift of a few kHz against 100 kHz spacing: a few percent.
    CHECK(rel < 0.2);
    CHECK(rel > 0.0);

    Scenario still = single_path(0.2e-6);
    const SnapshotMatrix a = synth_snapshot(still, DataSymbols::unit(64), 0);
    const SnapshotMatrix b = synth_snapshot(still, DataSymbols::unit(64), 0, SynthesisMode::exact);
    CHECK(max_abs_diff(a.data, b.data) < 1e-9);
}

TEST_CASE("snapshot dump round trip")
{
    Scenario s = desk_scenario();
    s.noise_variance = 0.1;
    const SnapshotMatrix a = synth_snapshot(s, DataSymbols::qpsk(64, 1, 4), 4);
    std::stringstream ss;
    write_snapshot(ss, a);
    CHECK(ss.str().size() == 8 + 12 + static_cast<std::size_t>(a.data.size()) * 8);
    const SnapshotMatrix b = read_snapshot(ss);
    CHECK(b.frame_id == 4);
    CHECK(b.n_symbols() == a.n_symbols());
    CHECK(b.n_subcarriers() == a.n_subcarriers());
    CHECK(max_abs_diff(a.data, b.data) < 1e-5 * a.data.cwiseAbs().maxCoeff());

    std::stringstream bad("not a dump at all");
    CHECK_THROWS_AS(read_snapshot(bad), Error);
}
