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

#include <cstdint>
#include <string>
#include <vector>

#include "synclab/common.hpp"

namespace synclab {

// OFDM numerology. Sample interval, CP duration and symbol duration are
// derived, so T_sam * N_c * delta_f == 1 and N_sym == N_c + N_cp hold by
// construction.
struct OfdmParams {
    double carrier_hz = 28e9;
    double subcarrier_spacing_hz = 100e3;
    int n_subcarriers = 64;  // N_c
    int n_cp = 8;            // CP length in samples
    int n_symbols = 32;      // G, symbols per frame
    int k_pad = 4;           // zero-padding ratio K

    int symbol_samples() const { return n_subcarriers + n_cp; }
    double sample_interval() const { return 1.0 / (n_subcarriers * subcarrier_spacing_hz); }
    double cp_duration() const { return n_cp * sample_interval(); }
    double symbol_duration() const { return symbol_samples() * sample_interval(); }
};

// Sampling grid of the zero-padded delay-Doppler map.
struct GridSpec {
    double delay_resolution_s = 0.0;    // T_R = 1 / (K N_c delta_f)
    double doppler_resolution_hz = 0.0; // F_R = 1 / (K G T_sym)
    int n_delay_bins = 0;               // K N_c
    int n_doppler_bins = 0;             // K G
    int k_pad = 1;
};

GridSpec derive_grids(const OfdmParams& ofdm);

struct PathParams {
    cd gain{1.0, 0.0};
    double delay_s = 0.0;
    double velocity_mps = 0.0; // radial, projected onto the path normal
    double aoa_rad = 0.0;
    double aod_rad = 0.0;

    bool is_static() const { return velocity_mps == 0.0; }
    double doppler_hz(double carrier_hz) const { return 2.0 * velocity_mps / kSpeedOfLight * carrier_hz; }
};

// Clock offsets of the reference frame and their drift to the next frame.
struct OffsetState {
    double cfo_hz = 0.0;
    double to_s = 0.0;
    double cfo_drift_hz = 0.0;
    double to_drift_s = 0.0;

    // Offsets of the following frame: (cfo + drift, to + drift), same drift.
    OffsetState advanced() const;
};

struct ArrayParams {
    int n_rx = 8;
    int n_tx = 2;
    double spacing_m = 0.0;
    double wavelength_m = 0.0;
    CVector precoder; // length n_tx, unit norm

    // Half-wavelength ULA at the given carrier with a uniform 1/sqrt(M_t) precoder.
    static ArrayParams uniform(int n_rx, int n_tx, double carrier_hz);
};

struct Scenario {
    OfdmParams ofdm;
    ArrayParams array;
    std::vector<PathParams> paths;
    OffsetState offsets;
    double noise_variance = 0.0; // per-sample complex AWGN power
    int antenna_index = 0;
    std::uint64_t seed = 0;

    int static_count() const;
};

// exp(j 2 pi k d cos(angle) / lambda), k = 0 .. n_elem-1.
CVector steering_vector(int n_elem, double spacing_m, double wavelength_m, double angle_rad);

// Unit-norm precoder pointing the transmit array at the given departure angle.
CVector steering_precoder(const ArrayParams& array, double aod_rad);

struct Violation {
    std::string code;
    std::string message;
};

// Every violated invariant, in a fixed order. Empty means the scenario is usable.
std::vector<Violation> validate(const Scenario& scenario);

// Throws Error(config) listing all violations when validate() is not empty.
void require_valid(const Scenario& scenario);

// Full-scale and desk-scale presets.
Scenario desk_scenario();
Scenario full_scenario();

} // namespace synclab
