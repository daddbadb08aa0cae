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

#include "synclab/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synclab/fft.hpp"

namespace synclab {

std::string to_string(WindowKind kind)
{
    switch (kind) {
    case WindowKind::rectangular: return "rectangular";
    case WindowKind::hann: return "hann";
    case WindowKind::hamming: return "hamming";
    case WindowKind::blackman: return "blackman";
    case WindowKind::custom: return "custom";
    }
    return "custom";
}

WindowKind parse_window_kind(std::string_view name)
{
    if (name == "rectangular" || name == "rect")
        return WindowKind::rectangular;
    if (name == "hann" || name == "hanning")
        return WindowKind::hann;
    if (name == "hamming")
        return WindowKind::hamming;
    if (name == "blackman")
        return WindowKind::blackman;
    throw Error(ErrorCode::invalid_argument, "unknown window kind '" + std::string(name) + "'");
}

Window make_window(WindowKind kind, int length)
{
    if (length < 2)
        throw Error(ErrorCode::invalid_argument, "window length must be >= 2");
    if (kind == WindowKind::custom)
        throw Error(ErrorCode::invalid_argument, "custom windows are built with custom_window()");
    Window w;
    w.kind = kind;
    w.taps.resize(static_cast<std::size_t>(length));
    const double denom = static_cast<double>(length - 1);
    for (int n = 0; n < length; ++n) {
        const double x = kTwoPi * n / denom;
        double v = 1.0;
        switch (kind) {
        case WindowKind::hann: v = 0.5 - 0.5 * std::cos(x); break;
        case WindowKind::hamming: v = 0.54 - 0.46 * std::cos(x); break;
        case WindowKind::blackman: v = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x); break;
        default: break;
        }
        w.taps[static_cast<std::size_t>(n)] = cd(std::max(v, 0.0), 0.0);
    }
    return w;
}

Window custom_window(CVector taps)
{
    if (taps.size() < 2)
        throw Error(ErrorCode::invalid_argument, "window length must be >= 2");
    if (std::all_of(taps.begin(), taps.end(), [](cd t) { return t == cd{}; }))
        throw Error(ErrorCode::invalid_argument, "window taps are all zero");
    return {std::move(taps), WindowKind::custom};
}

CVector padded_spectrum(const Window& window, int k_pad)
{
    if (k_pad < 1)
        throw Error(ErrorCode::invalid_argument, "zero-padding ratio must be >= 1");
    CVector buf(window.size() * static_cast<std::size_t>(k_pad), cd{});
    std::copy(window.taps.begin(), window.taps.end(), buf.begin());
    fft::forward(buf);
    return buf;
}

CVector circular_autocorrelation(std::span<const cd> spectrum)
{
    if (spectrum.empty())
        throw Error(ErrorCode::invalid_argument, "empty spectrum");
    const double n = static_cast<double>(spectrum.size());
    CVector t = fft::backward_copy(spectrum);
    // IDFT with 1/n, squared magnitude, forward DFT, times n  ->  |.|^2 / n.
    for (auto& x : t)
        x = cd(std::norm(x) / n, 0.0);
    fft::forward(t);
    return t;
}

namespace {

std::size_t unique_peak(std::span<const double> mag)
{
    const auto it = std::max_element(mag.begin(), mag.end());
    const double peak = *it;
    if (!(peak > 0.0))
        throw Error(ErrorCode::ambiguous_peak, "spectrum has no positive peak");
    const double tol = peak * 1e-12;
    const auto ties = std::count_if(mag.begin(), mag.end(), [&](double v) { return std::abs(v - peak) <= tol; });
    if (ties > 1)
        throw Error(ErrorCode::ambiguous_peak, "spectrum peak is tied between bins");
    return static_cast<std::size_t>(it - mag.begin());
}

// Distance (in bins, fractional) from the peak to the -3 dB crossing walking
// in direction dir, linear interpolation in magnitude.
double half_power_distance(std::span<const double> mag, std::size_t peak, int dir)
{
    const long n = static_cast<long>(mag.size());
    const double level = mag[peak] / std::sqrt(2.0);
    double prev = mag[peak];
    for (long k = 1; k < n; ++k) {
        const double cur = mag[static_cast<std::size_t>(wrap_index(static_cast<long>(peak) + dir * k, n))];
        if (cur < level)
            return static_cast<double>(k - 1) + (prev - level) / (prev - cur);
        prev = cur;
    }
    return static_cast<double>(n) / 2.0;
}

// First local minimum below -40 dB walking away from the peak; the first
// strict local minimum when none qualifies.
long null_distance(std::span<const double> mag, std::size_t peak, int dir)
{
    const long n = static_cast<long>(mag.size());
    const double deep = mag[peak] * 1e-2;
    auto at = [&](long k) { return mag[static_cast<std::size_t>(wrap_index(static_cast<long>(peak) + dir * k, n))]; };
    long first_min = -1;
    for (long k = 1; k < n / 2 + 1; ++k) {
        const double cur = at(k);
        const bool local_min = cur <= at(k - 1) && cur < at(k + 1);
        if (!local_min)
            continue;
        if (first_min < 0)
            first_min = k;
        if (cur <= deep)
            return k;
    }
    return first_min > 0 ? first_min : n / 2;
}

} // namespace

SpectrumMetrics mainlobe_metrics(std::span<const double> mag)
{
    if (mag.size() < 3)
        throw Error(ErrorCode::invalid_argument, "spectrum too short for mainlobe metrics");
    SpectrumMetrics m;
    const std::size_t peak = unique_peak(mag);
    m.peak_index = peak;
    m.mainlobe_width_bins = half_power_distance(mag, peak, +1) + half_power_distance(mag, peak, -1);
    const long right = null_distance(mag, peak, +1);
    const long left = null_distance(mag, peak, -1);
    m.null_to_null_bins = static_cast<double>(right + left);

    const long n = static_cast<long>(mag.size());
    double side = 0.0;
    for (long k = right + 1; k < n - left; ++k)
        side = std::max(side, mag[static_cast<std::size_t>(wrap_index(static_cast<long>(peak) + k, n))]);
    m.peak_sidelobe_db = side > 0.0 ? 20.0 * std::log10(side / mag[peak]) : -std::numeric_limits<double>::infinity();
    return m;
}

SpectrumMetrics mainlobe_metrics(std::span<const cd> spectrum)
{
    RVector mag(spectrum.size());
    std::transform(spectrum.begin(), spectrum.end(), mag.begin(), [](cd x) { return std::abs(x); });
    return mainlobe_metrics(std::span<const double>(mag));
}

std::vector<Window> rank_windows(std::vector<Window> windows, int k_pad)
{
    std::vector<std::pair<SpectrumMetrics, Window>> scored;
    scored.reserve(windows.size());
    for (auto& w : windows) {
        const CVector spec = padded_spectrum(w, k_pad);
        scored.emplace_back(mainlobe_metrics(std::span<const cd>(spec)), std::move(w));
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first.mainlobe_width_bins != b.first.mainlobe_width_bins)
            return a.first.mainlobe_width_bins < b.first.mainlobe_width_bins;
        return a.first.peak_sidelobe_db < b.first.peak_sidelobe_db;
    });
    std::vector<Window> out;
    out.reserve(scored.size());
    for (auto& [metrics, w] : scored)
        out.push_back(std::move(w));
    return out;
}

} // namespace synclab
