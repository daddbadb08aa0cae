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

#include "oracles.hpp"
#include "synclab/channel.hpp"
#include "synclab/sync.hpp"

using namespace synclab;

namespace {

struct Frames {
    DelayDopplerMap ref;
    DelayDopplerMap next;
    GridSpec grid;
};

Frames two_frames(const Scenario& s, WindowKind kind = WindowKind::rectangular)
{
    Frames f;
    f.grid = derive_grids(s.ofdm);
    const Window wg = make_window(kind, s.ofdm.n_symbols);
    const Window wn = make_window(kind, s.ofdm.n_subcarriers);
    const DataSymbols unit = DataSymbols::unit(s.ofdm.n_subcarriers);
    Scenario later = s;
    later.offsets = s.offsets.advanced();
    f.ref = transform_fft2d(synth_snapshot(s, unit, 0), wg, wn, f.grid);
    f.next = transform_fft2d(synth_snapshot(later, unit, 1), wg, wn, f.grid);
    return f;
}

SyncEstimate run(const Frames& f)
{
    const int k0 = locate_static_row(f.ref);
    return estimate_offsets(cross_correlate(f.next, extract_fingerprint(f.ref, k0)), f.grid, k0);
}

Scenario static_scenario(int k_pad = 4)
{
    std::mt19937_64 rng(100);
    Scenario s = oracle::on_grid_scenario(rng, 1, 1, k_pad);
    s.offsets = {};
    return s;
}

} // namespace

TEST_CASE("locate_static_row examples")
{
    Scenario s = static_scenario();
    const GridSpec grid = derive_grids(s.ofdm);
    CHECK(locate_static_row(two_frames(s).ref) == 0);

    s.offsets.cfo_hz = 7 * grid.doppler_resolution_hz;
    CHECK(locate_static_row(two_frames(s).ref) == 7);

    // Strong static path plus a weak fast path.
    PathParams dyn;
    dyn.gain = 0.1;
    dyn.delay_s = 9 * grid.delay_resolution_s;
    dyn.velocity_mps = 20 * grid.doppler_resolution_hz * kSpeedOfLight / (2 * s.ofdm.carrier_hz);
    s.paths.push_back(dyn);
    const Frames f = two_frames(s);
    CHECK(locate_static_row(f.ref) == 7);

    const std::vector<DelayDopplerMap> frames = {f.ref, f.next};
    CHECK(locate_static_row(std::span<const DelayDopplerMap>(frames), 1) == 7);

    DelayDopplerMap zero = f.ref;
    zero.data.setZero();
    CHECK_THROWS_AS(locate_static_row(zero), Error);
}

TEST_CASE("extract_fingerprint examples")
{
    const Frames f = two_frames(static_scenario());
    const FingerprintSpectrum fp = extract_fingerprint(f.ref, 0);
    double direct = 0.0;
    for (int p = 0; p < f.ref.n_cols(); ++p)
        direct += std::norm(f.ref.data(0, p));
    CHECK(std::abs(fp.norm_sq - direct) <= 1e-12 * direct);
    CHECK(fp.row_index == 0);

    // Single path: the fingerprint is a scaled copy of the path's delay spectrum.
    const Scenario s = static_scenario();
    CVector tau = delay_vector(s, 0);
    const double n = f.grid.n_delay_bins;
    const cd ratio = fp.values[0] / oracle::dtft(tau, 0.0, +1.0);
    for (int p = 0; p < f.ref.n_cols(); ++p)
        CHECK(std::abs(fp.values[static_cast<std::size_t>(p)] - ratio * oracle::dtft(tau, p / n, +1.0)) <
              1e-9 * std::sqrt(fp.norm_sq));

    DelayDopplerMap zero = f.ref;
    zero.data.row(3).setZero();
    try {
        extract_fingerprint(zero, 3);
        FAIL("expected zero-norm");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::zero_norm);
    }
    CHECK_THROWS_AS(extract_fingerprint(f.ref, f.ref.n_rows()), Error);
    CHECK_THROWS_AS(extract_fingerprint(f.ref, -1), Error);
}

TEST_CASE("cross_correlate examples")
{
    const Frames f = two_frames(static_scenario());
    const FingerprintSpectrum fp = extract_fingerprint(f.ref, 0);

    const CorrelationMap self = cross_correlate(f.ref, fp);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    const double peak = self.data.cwiseAbs().maxCoeff(&r, &c);
    CHECK(r == 0);
    CHECK(c == 0);
    CHECK(std::abs(self.data(0, 0) - cd(1.0, 0.0)) < 1e-12);
    CHECK(peak <= 1.0 + 1e-12);

    // Cyclically shifted map.
    DelayDopplerMap shifted = f.ref;
    const int k = 5;
    const int p = 11;
    for (int i = 0; i < f.ref.n_rows(); ++i)
        for (int q = 0; q < f.ref.n_cols(); ++q)
            shifted.data((i + k) % f.ref.n_rows(), (q + p) % f.ref.n_cols()) = f.ref.data(i, q);
    const CorrelationMap moved = cross_correlate(shifted, fp);
    moved.data.cwiseAbs().maxCoeff(&r, &c);
    CHECK(r == k);
    CHECK(c == p);

    const CorrelationMap window = cross_correlate(shifted, fp, RowRange{f.ref.n_rows() - 2, 4});
    REQUIRE(window.rows.size() == 4);
    CHECK(window.rows[2] == 0);
    CHECK(window.rows[3] == 1);

    CHECK_THROWS_AS(cross_correlate(shifted, fp, RowRange{0, 0}), Error);
    FingerprintSpectrum short_fp = fp;
    short_fp.values.pop_back();
    CHECK_THROWS_AS(cross_correlate(shifted, short_fp), Error);
}

TEST_CASE("cross_correlate FFT path equals the direct sum")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        DelayDopplerMap m;
        m.data = oracle::random_matrix(8, 8, rng);
        const FingerprintSpectrum fp = extract_fingerprint(m, trial % 8);
        DelayDopplerMap other;
        other.data = oracle::random_matrix(8, 8, rng);
        const CorrelationMap a = cross_correlate(other, fp);
        for (int i = 0; i < 8; ++i) {
            const CVector row(other.data.row(i).data(), other.data.row(i).data() + 8);
            const CVector direct = oracle::circular_xcorr(row, fp.values);
            for (int q = 0; q < 8; ++q)
                CHECK(std::abs(a.data(i, q) - direct[static_cast<std::size_t>(q)] / fp.norm_sq) < 1e-9);
        }
    }
}

TEST_CASE("estimate_offsets examples")
{
    Scenario s = static_scenario();
    const GridSpec grid = derive_grids(s.ofdm);
    SyncEstimate e = run(two_frames(s));
    CHECK(e.row_shift == 0);
    CHECK(e.col_shift == 0);
    CHECK(e.cfo_drift_hz == 0.0);
    CHECK(e.to_drift_s == 0.0);

    s.offsets.cfo_drift_hz = 3 * grid.doppler_resolution_hz;
    s.offsets.to_drift_s = 5 * grid.delay_resolution_s;
    e = run(two_frames(s));
    CHECK(e.row_shift == 3);
    CHECK(e.col_shift == 5);
    CHECK(e.cfo_drift_hz == 3 * grid.doppler_resolution_hz);
    CHECK(e.to_drift_s == 5 * grid.delay_resolution_s);
    CHECK(e.peak_to_median_ratio > 1.0);
    CHECK_FALSE(e.refined_col_shift.has_value());

    s.offsets.to_drift_s = 5.4 * grid.delay_resolution_s;
    e = run(two_frames(s));
    CHECK(e.col_shift == 5);
    CHECK(e.row_shift == 3);

    // Sub-grid refinement moves toward the true fractional drift.
    const int k0 = locate_static_row(two_frames(s).ref);
    const Frames f = two_frames(s);
    e = estimate_offsets(cross_correlate(f.next, extract_fingerprint(f.ref, k0)), f.grid, k0, {true});
    REQUIRE(e.refined_col_shift.has_value());
    CHECK(*e.refined_col_shift > 5.0);
    CHECK(*e.refined_col_shift < 6.0);
}

TEST_CASE("estimate_offsets breaks ties lexicographically")
{
    CorrelationMap c;
    c.data = CMatrix::Constant(3, 4, cd(1.0, 0.0));
    c.rows = {0, 1, 2};
    GridSpec g;
    g.n_doppler_bins = 3;
    g.n_delay_bins = 4;
    const SyncEstimate e = estimate_offsets(c, g, 0);
    CHECK(e.row_shift == 0);
    CHECK(e.col_shift == 0);
}

TEST_CASE("exact recovery on noiseless on-grid families")
{
    std::mt19937_64 rng(2024);
    int cases = 0;
    for (int l : {1, 2, 4})
        for (int ls : {1, 2})
            for (int k : {2, 4}) {
                if (ls > l)
                    continue;
                for (int trial = 0; trial < 6; ++trial) {
                    const Scenario s = oracle::on_grid_scenario(rng, l, ls, k);
                    const GridSpec grid = derive_grids(s.ofdm);
                    const SyncEstimate e = run(two_frames(s));
                    CHECK(e.row_shift == std::lround(s.offsets.cfo_drift_hz / grid.doppler_resolution_hz));
                    CHECK(e.col_shift == std::lround(s.offsets.to_drift_s / grid.delay_resolution_s));
                    ++cases;
                }
            }
    CHECK(cases == 60);
}

TEST_CASE("argmax is invariant to scaling the reference")
{
    std::mt19937_64 rng(5);
    const Scenario s = oracle::on_grid_scenario(rng, 3, 2, 2);
    const Frames f = two_frames(s, WindowKind::hann);
    const int k0 = locate_static_row(f.ref);
    const SyncEstimate base = estimate_offsets(cross_correlate(f.next, extract_fingerprint(f.ref, k0)), f.grid, k0);
    for (cd c : {cd(2.0, 0.0), cd(0.0, 1.0), cd(-0.5, 0.0)}) {
        DelayDopplerMap scaled = f.ref;
        scaled.data *= c;
        const SyncEstimate e = estimate_offsets(cross_correlate(f.next, extract_fingerprint(scaled, k0)), f.grid, k0);
        CHECK(e.row_shift == base.row_shift);
        CHECK(e.col_shift == base.col_shift);
    }
}

TEST_CASE("shifts near the cyclic boundary are reported signed")
{
    Scenario s = static_scenario(2);
    const GridSpec grid = derive_grids(s.ofdm);
    s.offsets.to_s = 8 * grid.delay_resolution_s;
    s.offsets.to_drift_s = -1 * grid.delay_resolution_s;
    s.offsets.cfo_drift_hz = -1 * grid.doppler_resolution_hz;
    SyncEstimate e = run(two_frames(s));
    CHECK(e.col_shift == -1);
    CHECK(e.row_shift == -1);
    CHECK(e.to_drift_s == -grid.delay_resolution_s);

    s.offsets.to_drift_s = (grid.n_delay_bins / 2) * grid.delay_resolution_s;
    e = run(two_frames(s));
    CHECK(e.col_shift == grid.n_delay_bins / 2);
}
