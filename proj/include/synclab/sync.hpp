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

#include <optional>
#include <span>
#include <vector>

#include "synclab/common.hpp"
#include "synclab/delay_doppler.hpp"

namespace synclab {

// beta_n = Xi[K0, :]
struct FingerprintSpectrum {
    CVector values;
    int row_index = 0;
    double norm_sq = 0.0;
};

// Contiguous cyclic block of map rows: first, first+1, ..., first+count-1 (mod K G).
struct RowRange {
    int first = 0;
    int count = 0;
};

// A[i, q] = sum_p Xi_new[row_i, (q + p) mod K N_c] conj(beta[p]) / |beta|^2
struct CorrelationMap {
    CMatrix data;
    std::vector<int> rows; // map row searched by each correlation row
    double normalizer = 0.0;
};

struct SyncEstimate {
    int row_shift = 0; // in (-K G / 2, K G / 2]
    int col_shift = 0; // in (-K N_c / 2, K N_c / 2]
    double cfo_drift_hz = 0.0;
    double to_drift_s = 0.0;
    double peak_magnitude = 0.0;
    double peak_to_median_ratio = 0.0;
    // Parabolic sub-bin refinement, only when requested.
    std::optional<double> refined_row_shift;
    std::optional<double> refined_col_shift;
};

struct EstimateOptions {
    bool subgrid_refinement = false;
};

// Row with the largest total energy; ties go to the lowest index.
int locate_static_row(const DelayDopplerMap& map, std::optional<int> static_count_hint = std::nullopt);

// Multi-frame variant: among the highest-energy candidate rows of the first
// frame, prefer the one whose top-`static_count_hint` column peaks repeat in
// the most frames. Falls back to the energy argmax.
int locate_static_row(std::span<const DelayDopplerMap> frames, int static_count_hint);

FingerprintSpectrum extract_fingerprint(const DelayDopplerMap& map, int k0);

CorrelationMap cross_correlate(const DelayDopplerMap& map_new, const FingerprintSpectrum& fp,
                               std::optional<RowRange> row_range = std::nullopt);

// Argmax of |A| (lexicographically smallest on ties), wrapped to signed shifts.
SyncEstimate estimate_offsets(const CorrelationMap& corr, const GridSpec& grid, int k0,
                              const EstimateOptions& options = {});

} // namespace synclab
