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

// Independent reference implementations used only by tests. They evaluate the
// defining sums directly and share no code with the library's fast paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "synclab/common.hpp"
#include "synclab/scenario.hpp"

namespace oracle {

using synclab::cd;
using synclab::CMatrix;
using synclab::CVector;
using synclab::kTwoPi;

// sum_n x[n] exp(sign j 2 pi f n)
inline cd dtft(const CVector& x, double f, double sign)
{
    cd acc{};
    for (std::size_t n = 0; n < x.size(); ++n)
        acc += x[n] * std::polar(1.0, sign * kTwoPi * f * static_cast<double>(n));
    return acc;
}

// A[q] = sum_p x[(q + p) mod n] conj(y[p])
inline CVector circular_xcorr(const CVector& x, const CVector& y)
{
    const std::size_t n = x.size();
    CVector out(n);
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t p = 0; p < n; ++p)
            out[q] += x[(q + p) % n] * std::conj(y[p]);
    return out;
}

inline CMatrix random_matrix(int rows, int cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m(r, c) = cd(n(rng), n(rng));
    return m;
}

inline CVector random_vector(std::size_t len, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    CVector v(len);
    for (auto& x : v)
        x = cd(n(rng), n(rng));
    return v;
}

// Small scenario whose delays, offsets and drifts all sit on the K-padded grid.
// Static paths use distinct delay cells, dynamic paths use on-grid Doppler.
inline synclab::Scenario on_grid_scenario(std::mt19937_64& rng, int n_paths, int n_static, int k_pad, int g = 16,
                                          int nc = 16)
{
    using namespace synclab;
    Scenario s;
    s.ofdm = OfdmParams{28e9, 100e3, nc, nc / 4, g, k_pad};
    s.array = ArrayParams::uniform(4, 2, s.ofdm.carrier_hz);
    const GridSpec grid = derive_grids(s.ofdm);
    std::uniform_int_distribution<int> delay_cell(0, k_pad * nc / 2);
    std::uniform_int_distribution<int> doppler_cell(1, k_pad * g / 4);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    std::uniform_real_distribution<double> mag(0.4, 1.0);
    std::vector<int> used;
    for (int l = 0; l < n_paths; ++l) {
        PathParams p;
        int cell = delay_cell(rng);
        while (std::find(used.begin(), used.end(), cell) != used.end())
            cell = delay_cell(rng);
        used.push_back(cell);
        p.delay_s = cell * grid.delay_resolution_s;
        p.gain = std::polar(l == 0 ? 1.0 : mag(rng), phase(rng));
        if (l >= n_static) {
            const double fd = (l % 2 ? 1 : -1) * doppler_cell(rng) * grid.doppler_resolution_hz;
            p.velocity_mps = fd * kSpeedOfLight / (2.0 * s.ofdm.carrier_hz);
            p.gain *= 0.5;
        }
        p.aoa_rad = phase(rng);
        p.aod_rad = phase(rng);
        s.paths.push_back(p);
    }
    std::uniform_int_distribution<int> off(0, k_pad * g - 1);
    std::uniform_int_distribution<int> off_tau(0, k_pad * nc / 4);
    std::uniform_int_distribution<int> drift_row(-k_pad * g / 2 + 1, k_pad * g / 2 - 1);
    std::uniform_int_distribution<int> drift_col(-k_pad * nc / 2 + 1, k_pad * nc / 2 - 1);
    s.offsets.cfo_hz = off(rng) * grid.doppler_resolution_hz;
    s.offsets.to_s = off_tau(rng) * grid.delay_resolution_s;
    s.offsets.cfo_drift_hz = drift_row(rng) * grid.doppler_resolution_hz;
    s.offsets.to_drift_s = drift_col(rng) * grid.delay_resolution_s;
    return s;
}

} // namespace oracle
