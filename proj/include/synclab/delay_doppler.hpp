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

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "synclab/channel.hpp"
#include "synclab/common.hpp"
#include "synclab/scenario.hpp"
#include "synclab/window.hpp"

namespace synclab {

enum class MapMethod { fft2d, music };

std::string to_string(MapMethod method);

// Xi: rows are Doppler bins (K G), columns delay bins (K N_c). Row i holds
// Doppler i * F_R, column p holds delay p * T_R, both modulo the span.
struct DelayDopplerMap {
    CMatrix data;
    MapMethod method = MapMethod::fft2d;
    GridSpec grid;
    bool separable_surrogate = false; // true for MUSIC maps

    int n_rows() const { return static_cast<int>(data.rows()); }
    int n_cols() const { return static_cast<int>(data.cols()); }
};

// Snapshot in the top-left corner of a (K G) x (K N_c) zero matrix.
CMatrix zero_pad(const SnapshotMatrix& snapshot, int k_pad);

// Windowed, zero-padded 2D transform. Both axes use the unnormalized
// exp(+j 2 pi k n / M) kernel, which puts a path with Doppler f and delay
// tau at (f / F_R, tau / T_R). Parseval under this scaling:
//   sum |Xi|^2 = (K G)(K N_c) sum |diag(psi_G) Gamma diag(psi_Nc)|^2.
DelayDopplerMap transform_fft2d(const SnapshotMatrix& snapshot, const Window& win_g, const Window& win_nc,
                                const GridSpec& grid);

// Brute-force double sum at normalized cell position (nu_doppler, nu_delay):
//   sum_g sum_n psi_G[g] psi_Nc[n] Gamma[g,n] exp(+j 2 pi (nu_doppler g + nu_delay n)).
// This is the DTFT of the windowed snapshot evaluated at f = -nu; the map
// cell (i, p) equals the oracle at (i / (K G), p / (K N_c)). Test use only.
cd dtft_oracle(const SnapshotMatrix& snapshot, const Window& win_g, const Window& win_nc, double nu_doppler,
               double nu_delay);

enum class PseudospectrumScale {
    linear,         // 1 / (a^H E_n E_n^H a), peak 1
    db_above_floor, // max(0, dB above the median level), peak 1
};

std::string to_string(PseudospectrumScale scale);
PseudospectrumScale parse_pseudospectrum_scale(std::string_view name);

struct SubarrayConfig {
    int delay_length = 0;        // 0 -> floor(2 N_c / 3)
    int doppler_length = 0;      // 0 -> floor(2 G / 3)
    int doppler_model_order = 0; // 0 -> same as the delay-axis order
    bool forward_backward = true;
    PseudospectrumScale scale = PseudospectrumScale::linear;
};

// MUSIC pseudospectrum 1 / ||E_n^H a(k)||^2 on an n_grid-point grid, where
// each row of `rows` is one observation along the axis of interest and
// a(k)[t] = exp(-j 2 pi t k / n_grid). Spatial smoothing with subarrays of
// length subarray_length, optional forward-backward averaging.
RVector music_pseudospectrum(const CMatrix& rows, int subarray_length, int model_order, int n_grid,
                             bool forward_backward = true);

// Separable per-axis MUSIC surrogate: outer product of the peak-normalized
// Doppler and delay pseudospectra, scaled to the rect-window fft2d peak.
DelayDopplerMap music_map(const SnapshotMatrix& snapshot, const GridSpec& grid, int model_order,
                          const SubarrayConfig& smoothing = {});

// Binary map dump: "SLMAP001", u32 rows, u32 cols, u32 method, then
// little-endian complex64 row-major.
void write_map(std::ostream& os, const DelayDopplerMap& map);
DelayDopplerMap read_map(std::istream& is);

enum class CutAxis { row, column };

// CSV "bin,value_re,value_im,magnitude,magnitude_db" of one row or column.
void write_cut_csv(std::ostream& os, const DelayDopplerMap& map, CutAxis axis, int index);

} // namespace synclab
