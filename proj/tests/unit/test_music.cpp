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

#include "oracles.hpp"
#include "synclab/channel.hpp"
#include "synclab/delay_doppler.hpp"
#include "synclab/report.hpp"

using namespace synclab;

namespace {

std::size_t argmax(const RVector& v) { return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin()); }

// Cyclic width of the region above half the peak around the argmax.
int half_power_width(const RVector& v)
{
    const std::size_t n = v.size();
    const std::size_t k = argmax(v);
    const double half = 0.5 * v[k];
    int w = 1;
    for (std::size_t d = 1; d < n && v[(k + d) % n] >= half; ++d)
        ++w;
    for (std::size_t d = 1; d < n && v[(k + n - d) % n] >= half; ++d)
        ++w;
    return w;
}

CMatrix tones(const std::vector<double>& cells, int rows, int len, int n_grid, std::mt19937_64& rng, double noise)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(noise / 2));
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    CMatrix m = CMatrix::Zero(rows, len);
    for (int r = 0; r < rows; ++r) {
        for (double k : cells) {
            const double phase0 = ph(rng);
            for (int t = 0; t < len; ++t)
                m(r, t) += std::polar(1.0, phase0 - kTwoPi * t * k / n_grid);
        }
        for (int t = 0; t < len; ++t)
            m(r, t) += cd(nd(rng), nd(rng));
    }
    return m;
}

} // namespace

TEST_CASE("music_pseudospectrum peaks at on-grid tones")
{
    std::mt19937_64 rng(1);
    const int len = 32;
    const int n_grid = 128;
    for (int trial = 0; trial < 5; ++trial) {
        std::uniform_int_distribution<int> cell(0, n_grid - 1);
        const double a = cell(rng);
        double b = cell(rng);
        while (std::abs(wrap_signed(static_cast<long>(b - a), n_grid)) < 12)
            b = cell(rng);
        const RVector p = music_pseudospectrum(tones({a, b}, 16, len, n_grid, rng, 1e-3), 20, 2, n_grid);
        // The two largest local maxima sit on the tones.
        std::vector<std::pair<double, int>> peaks;
        for (int k = 0; k < n_grid; ++k)
            if (p[static_cast<std::size_t>(k)] > p[static_cast<std::size_t>((k + 1) % n_grid)] &&
                p[static_cast<std::size_t>(k)] >= p[static_cast<std::size_t>((k + n_grid - 1) % n_grid)])
                peaks.emplace_back(p[static_cast<std::size_t>(k)], k);
        std::sort(peaks.rbegin(), peaks.rend());
        REQUIRE(peaks.size() >= 2);
        std::vector<int> found = {peaks[0].second, peaks[1].second};
        std::sort(found.begin(), found.end());
        std::vector<int> expect = {static_cast<int>(a), static_cast<int>(b)};
        std::sort(expect.begin(), expect.end());
        CHECK(found == expect);
    }
}

TEST_CASE("music_pseudospectrum is sharper than the rectangular periodogram")
{
    std::mt19937_64 rng(2);
    const int len = 32;
    const int n_grid = 256;
    const CMatrix rows = tones({40.0}, 8, len, n_grid, rng, 1e-2);
    const RVector p = music_pseudospectrum(rows, 21, 1, n_grid);

    RVector periodogram(static_cast<std::size_t>(n_grid), 0.0);
    for (int r = 0; r < rows.rows(); ++r)
        for (int k = 0; k < n_grid; ++k) {
            CVector row(rows.row(r).data(), rows.row(r).data() + len);
            periodogram[static_cast<std::size_t>(k)] += std::norm(oracle::dtft(row, static_cast<double>(k) / n_grid, +1.0));
        }
    CHECK(argmax(p) == 40);
    CHECK(argmax(periodogram) == 40);
    CHECK(half_power_width(p) < half_power_width(periodogram));
}

TEST_CASE("music_pseudospectrum rejects bad inputs")
{
    std::mt19937_64 rng(3);
    const CMatrix rows = tones({3.0}, 4, 16, 64, rng, 0.1);
    CHECK_THROWS_AS(music_pseudospectrum(rows, 10, 0, 64), Error);
    CHECK_THROWS_AS(music_pseudospectrum(rows, 1, 1, 64), Error);
    CHECK_THROWS_AS(music_pseudospectrum(rows, 17, 1, 64), Error);
    CHECK_THROWS_AS(music_pseudospectrum(rows, 10, 10, 64), Error);
    CHECK_THROWS_AS(music_pseudospectrum(rows, 10, 1, 8), Error);
    try {
        music_pseudospectrum(CMatrix::Zero(4, 16), 10, 1, 64);
        FAIL("expected rank-deficient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::rank_deficient);
    }
    // One noiseless tone has rank 1, below order 2.
    try {
        music_pseudospectrum(tones({3.0}, 1, 16, 64, rng, 0.0), 10, 2, 64, false);
        FAIL("expected rank-deficient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::rank_deficient);
    }
}

TEST_CASE("music_map agrees with the fft2d peak on a single path")
{
    std::mt19937_64 rng(4);
    for (PseudospectrumScale scale : {PseudospectrumScale::linear, PseudospectrumScale::db_above_floor})
        for (int trial = 0; trial < 4; ++trial) {
            Scenario s = oracle::on_grid_scenario(rng, 1, 0, 4);
            s.noise_variance = 1e-3;
            const GridSpec grid = derive_grids(s.ofdm);
            const SnapshotMatrix snap = synth_snapshot(s, DataSymbols::qpsk(s.ofdm.n_subcarriers, 11, 0), 0);
            const DelayDopplerMap fft = transform_fft2d(snap, make_window(WindowKind::rectangular, s.ofdm.n_symbols),
                                                        make_window(WindowKind::rectangular, s.ofdm.n_subcarriers), grid);
            SubarrayConfig cfg;
            cfg.scale = scale;
            const DelayDopplerMap mm = music_map(snap, grid, 1, cfg);
            CHECK(mm.method == MapMethod::music);
            CHECK(mm.separable_surrogate);
            Eigen::Index fr = 0, fc = 0, mr = 0, mc = 0;
            const double fpeak = fft.data.cwiseAbs().maxCoeff(&fr, &fc);
            const double mpeak = mm.data.cwiseAbs().maxCoeff(&mr, &mc);
            CHECK(fr == mr);
            CHECK(fc == mc);
            CHECK(std::abs(mpeak - fpeak) < 1e-9 * fpeak);
            CHECK(mm.data.imag().cwiseAbs().maxCoeff() == 0.0);
        }
}

TEST_CASE("music_map is separable")
{
    std::mt19937_64 rng(5);
    Scenario s = oracle::on_grid_scenario(rng, 3, 1, 2);
    s.noise_variance = 0.01;
    const GridSpec grid = derive_grids(s.ofdm);
    const DelayDopplerMap mm = music_map(synth_snapshot(s, DataSymbols::qpsk(s.ofdm.n_subcarriers, 2, 0), 0), grid, 3);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(mm.data));
    const auto sv = svd.singularValues();
    CHECK(sv(1) < 1e-9 * sv(0));
}

TEST_CASE("db_above_floor keeps the peak location and clips the floor")
{
    std::mt19937_64 rng(6);
    Scenario s = oracle::on_grid_scenario(rng, 2, 1, 4);
    s.noise_variance = 0.05;
    const GridSpec grid = derive_grids(s.ofdm);
    const SnapshotMatrix snap = synth_snapshot(s, DataSymbols::qpsk(s.ofdm.n_subcarriers, 3, 0), 0);
    SubarrayConfig lin;
    SubarrayConfig db;
    db.scale = PseudospectrumScale::db_above_floor;
    const CMatrix a = music_map(snap, grid, 2, lin).data;
    const CMatrix b = music_map(snap, grid, 2, db).data;
    Eigen::Index ar = 0, ac = 0, br = 0, bc = 0;
    a.cwiseAbs().maxCoeff(&ar, &ac);
    b.cwiseAbs().maxCoeff(&br, &bc);
    CHECK(ar == br);
    CHECK(ac == bc);
    // At least half of each axis lies at or below the median and is clipped to zero.
    const auto zeros = (b.cwiseAbs().array() == 0.0).count();
    CHECK(zeros >= b.size() / 2);
    CHECK(to_string(PseudospectrumScale::db_above_floor) == "db_above_floor");
    CHECK(parse_pseudospectrum_scale("linear") == PseudospectrumScale::linear);
    CHECK_THROWS_AS(parse_pseudospectrum_scale("log"), Error);
}

TEST_CASE("MUSIC response across SNR: narrower than rect, floor rises as SNR falls")
{
    const int n = 64;
    const int k = 4;
    const auto rect = mainlobe_metrics(padded_spectrum(make_window(WindowKind::rectangular, n), k));
    double prev_floor = -1.0;
    for (double snr : {10.0, 0.0, -10.0}) {
        const RVector p = music_window_response(n, k, snr, 7);
        const auto m = mainlobe_metrics(std::span<const double>(p));
        CHECK(m.peak_index == 0);
        CHECK(m.mainlobe_width_bins < rect.mainlobe_width_bins);
        RVector sorted = p;
        std::sort(sorted.begin(), sorted.end());
        const double floor = sorted[sorted.size() / 2] / sorted.back();
        CHECK(floor > prev_floor);
        prev_floor = floor;
    }
}
