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

#include "synclab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace synclab {

GridSpec derive_grids(const OfdmParams& ofdm)
{
    GridSpec g;
    g.k_pad = ofdm.k_pad;
    g.n_delay_bins = ofdm.k_pad * ofdm.n_subcarriers;
    g.n_doppler_bins = ofdm.k_pad * ofdm.n_symbols;
    g.delay_resolution_s = 1.0 / (g.n_delay_bins * ofdm.subcarrier_spacing_hz);
    g.doppler_resolution_hz = 1.0 / (g.n_doppler_bins * ofdm.symbol_duration());
    return g;
}

OffsetState OffsetState::advanced() const
{
    OffsetState next = *this;
    next.cfo_hz += cfo_drift_hz;
    next.to_s += to_drift_s;
    return next;
}

ArrayParams ArrayParams::uniform(int n_rx, int n_tx, double carrier_hz)
{
    ArrayParams a;
    a.n_rx = n_rx;
    a.n_tx = n_tx;
    a.wavelength_m = kSpeedOfLight / carrier_hz;
    a.spacing_m = 0.5 * a.wavelength_m;
    a.precoder.assign(static_cast<std::size_t>(std::max(n_tx, 0)), cd(1.0 / std::sqrt(static_cast<double>(n_tx)), 0.0));
    return a;
}

int Scenario::static_count() const
{
    return static_cast<int>(std::count_if(paths.begin(), paths.end(), [](const PathParams& p) { return p.is_static(); }));
}

CVector steering_vector(int n_elem, double spacing_m, double wavelength_m, double angle_rad)
{
    if (n_elem < 1)
        throw Error(ErrorCode::invalid_argument, "steering vector needs at least one element");
    if (!(wavelength_m > 0.0))
        throw Error(ErrorCode::invalid_argument, "wavelength must be positive");
    const double step = kTwoPi * spacing_m * std::cos(angle_rad) / wavelength_m;
    CVector v(static_cast<std::size_t>(n_elem));
    for (int k = 0; k < n_elem; ++k)
        v[static_cast<std::size_t>(k)] = std::polar(1.0, step * k);
    return v;
}

CVector steering_precoder(const ArrayParams& array, double aod_rad)
{
    CVector w = steering_vector(array.n_tx, array.spacing_m, array.wavelength_m, aod_rad);
    const double scale = 1.0 / std::sqrt(static_cast<double>(array.n_tx));
    // Conjugate so that Omega_t(aod) * w is real and maximal.
    for (auto& x : w)
        x = std::conj(x) * scale;
    return w;
}

std::vector<Violation> validate(const Scenario& s)
{
    std::vector<Violation> out;
    auto add = [&out](const char* code, std::string msg) { out.push_back({code, std::move(msg)}); };
    const OfdmParams& o = s.ofdm;

    if (!(o.carrier_hz > 0.0) || !std::isfinite(o.carrier_hz))
        add("bad-carrier", "carrier frequency must be positive");
    if (!(o.subcarrier_spacing_hz > 0.0) || !std::isfinite(o.subcarrier_spacing_hz))
        add("bad-subcarrier-spacing", "subcarrier spacing must be positive");
    if (o.n_subcarriers < 2)
        add("bad-subcarrier-count", "need at least 2 subcarriers");
    if (o.n_cp < 0)
        add("bad-cp", "CP length must be nonnegative");
    if (o.n_symbols < 2)
        add("bad-symbol-count", "need at least 2 symbols per frame");
    if (o.k_pad < 1)
        add("bad-k-pad", "zero-padding ratio must be >= 1");

    const ArrayParams& a = s.array;
    if (a.n_rx < 1 || a.n_tx < 1)
        add("bad-array", "array sizes must be positive");
    if (!(a.wavelength_m > 0.0))
        add("bad-wavelength", "wavelength must be positive");
    if (a.spacing_m < 0.0)
        add("bad-spacing", "element spacing must be nonnegative");
    if (static_cast<int>(a.precoder.size()) != a.n_tx) {
        add("precoder-size", "precoder length must equal the number of transmit elements");
    } else {
        double n2 = 0.0;
        for (const auto& w : a.precoder)
            n2 += std::norm(w);
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
            add("precoder-not-unit-norm", "precoder must have unit Euclidean norm");
    }
    if (s.antenna_index < 0 || s.antenna_index >= a.n_rx)
        add("antenna-index-out-of-range", "antenna index must be within the receive array");

    if (s.paths.empty())
        add("no-path", "scenario has no propagation paths");
    else if (s.static_count() == 0)
        add("no-static-path", "at least one static path is needed for a fingerprint row");

    const bool spacing_ok = o.subcarrier_spacing_hz > 0.0;
    for (std::size_t i = 0; i < s.paths.size(); ++i) {
        const auto& p = s.paths[i];
        std::ostringstream where;
        where << "path " << i;
        if (p.delay_s < 0.0)
            add("negative-delay", where.str() + ": delay must be nonnegative");
        if (spacing_ok && p.delay_s >= 1.0 / o.subcarrier_spacing_hz)
            add("delay-exceeds-symbol", where.str() + ": delay must be shorter than one OFDM symbol");
        if (!std::isfinite(std::abs(p.gain)) || !std::isfinite(p.velocity_mps))
            add("non-finite-path", where.str() + ": non-finite parameter");
    }

    if (s.noise_variance < 0.0 || !std::isfinite(s.noise_variance))
        add("bad-noise-variance", "noise variance must be finite and nonnegative");

    if (spacing_ok && o.n_subcarriers > 0 && o.n_symbols > 0) {
        const double doppler_span = 1.0 / o.symbol_duration();
        const double delay_span = 1.0 / o.subcarrier_spacing_hz;
        if (std::abs(s.offsets.cfo_drift_hz) >= 0.5 * doppler_span)
            add("cfo-drift-ambiguous", "CFO drift exceeds half the unambiguous Doppler span");
        if (std::abs(s.offsets.to_drift_s) >= 0.5 * delay_span)
            add("to-drift-ambiguous", "TO drift exceeds half the unambiguous delay span");
    }
    return out;
}

void require_valid(const Scenario& scenario)
{
    const auto v = validate(scenario);
    if (v.empty())
        return;
    std::string msg;
    for (const auto& x : v)
        msg += (msg.empty() ? "" : "; ") + x.code + " (" + x.message + ")";
    throw Error(ErrorCode::config, msg);
}

namespace {

PathParams path(cd gain, double delay_s, double velocity, double aoa_deg, double aod_deg)
{
    PathParams p;
    p.gain = gain;
    p.delay_s = delay_s;
    p.velocity_mps = velocity;
    p.aoa_rad = aoa_deg * kPi / 180.0;
    p.aod_rad = aod_deg * kPi / 180.0;
    return p;
}

} // namespace

Scenario desk_scenario()
{
    Scenario s;
    s.ofdm = OfdmParams{28e9, 100e3, 64, 8, 32, 4};
    s.array = ArrayParams::uniform(8, 2, s.ofdm.carrier_hz);
    s.paths = {
        path({1.0, 0.0}, 0.40e-6, 0.0, 40.0, 30.0),
        path(std::polar(0.8, 1.1), 1.15e-6, 0.0, 75.0, 60.0),
        path(std::polar(0.6, -0.7), 0.75e-6, 12.0, 110.0, 95.0),
        path(std::polar(0.5, 2.3), 2.05e-6, -20.0, 135.0, 120.0),
    };
    // Drift of exactly (2 F_R, 8 T_R) on the K = 4 grid.
    s.offsets = OffsetState{3.2e3, 0.25e-6, 2.0 / (4 * 32 * 72 / 6.4e6), 8.0 / (4 * 64 * 100e3)};
    s.noise_variance = 0.0;
    s.antenna_index = 0;
    s.seed = 1;
    return s;
}

Scenario full_scenario()
{
    Scenario s = desk_scenario();
    s.ofdm = OfdmParams{28e9, 100e3, 128, 16, 64, 4};
    s.array = ArrayParams::uniform(64, 2, s.ofdm.carrier_hz);
    return s;
}

} // namespace synclab
