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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synclab/common.hpp"

namespace synclab {

enum class WindowKind { rectangular, hann, hamming, blackman, custom };

std::string to_string(WindowKind kind);
WindowKind parse_window_kind(std::string_view name);

struct Window {
    CVector taps;
    WindowKind kind = WindowKind::custom;

    std::size_t size() const { return taps.size(); }
};

// Symmetric cosine-sum windows, n = 0..N-1, x = 2 pi n / (N-1):
//   rectangular  1
//   hann         0.5  - 0.5  cos x
//   hamming      0.54 - 0.46 cos x
//   blackman     0.42 - 0.5  cos x + 0.08 cos 2x   (endpoints clamped to 0)
Window make_window(WindowKind kind, int length);
Window custom_window(CVector taps);

// DFT of [taps, 0_{(K-1)N}], i.e. DTFT samples at f = i / (K N).
CVector padded_spectrum(const Window& window, int k_pad);

// rho[q] = sum_p x[(p+q) mod n] conj(x[p]), via n * DFT(|IDFT(x)|^2).
CVector circular_autocorrelation(std::span<const cd> spectrum);

struct SpectrumMetrics {
    double mainlobe_width_bins = 0.0; // -3 dB full width, interpolated
    double null_to_null_bins = 0.0;
    double peak_sidelobe_db = 0.0;    // relative to the peak
    std::size_t peak_index = 0;
};

// Metrics of |spectrum|, treated as cyclic. Throws ambiguous_peak on tied maxima.
SpectrumMetrics mainlobe_metrics(std::span<const cd> spectrum);
SpectrumMetrics mainlobe_metrics(std::span<const double> magnitude);

// Stable ascending order by -3 dB width, ties by lower peak sidelobe.
std::vector<Window> rank_windows(std::vector<Window> windows, int k_pad);

} // namespace synclab
