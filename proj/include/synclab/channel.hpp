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
#include <iosfwd>
#include <string>

#include "synclab/common.hpp"
#include "synclab/scenario.hpp"

namespace synclab {

enum class Constellation { qpsk, unit };

// Per-subcarrier data symbols c_n. Every symbol has unit magnitude so that
// the compensation D^-1 is exact.
struct DataSymbols {
    CVector symbols;
    Constellation constellation = Constellation::unit;

    static DataSymbols unit(int n_subcarriers);
    // Independent uniform QPSK symbols from the (seed, frame_id) data stream.
    static DataSymbols qpsk(int n_subcarriers, std::uint64_t seed, int frame_id);
};

// Compensated snapshot Gamma_m: rows are OFDM symbols g, columns subcarriers n.
struct SnapshotMatrix {
    CMatrix data;
    int frame_id = 0;
    OffsetState offsets_applied;

    int n_symbols() const { return static_cast<int>(data.rows()); }
    int n_subcarriers() const { return static_cast<int>(data.cols()); }
};

enum class SynthesisMode {
    approximate, // Doppler/CFO phase held constant within a symbol
    exact,       // per-sample evaluation including intra-symbol drift
};

// alpha_l[m] = exp(-j 2 pi f_c (to + tau_l)) a_l Omega_r[m] (Omega_t . w)
cd path_amplitude(const Scenario& scenario, std::size_t path_index, int antenna_index);

// theta_l[g] = exp(-j 2 pi (f_D + cfo) ((g-1) T_sym + T_cp)), g = 1..G
CVector doppler_vector(const Scenario& scenario, std::size_t path_index);

// tau_l[n] = exp(-j 2 pi n delta_f (to + tau_l)), n = 0..N_c-1
CVector delay_vector(const Scenario& scenario, std::size_t path_index);

// Synthesizes time-domain symbols with the data, compensates them with
// F^H D^-1 and adds CN(0, sigma^2) noise drawn from the (seed, frame_id)
// noise stream. The scenario's own offsets are applied as-is.
SnapshotMatrix synth_snapshot(const Scenario& scenario, const DataSymbols& data, int frame_id,
                              SynthesisMode mode = SynthesisMode::approximate);

// Noiseless stacked model sum_l alpha_l theta_l tau_l, evaluated directly.
CMatrix stacked_model(const Scenario& scenario);

// Mean |Gamma|^2 of the noiseless snapshot; the SNR reference power.
double signal_power(const Scenario& scenario);

// Binary dump: "SLSNAP01", u32 G, u32 N_c, i32 frame_id, then G*N_c
// little-endian complex64 (re, im) pairs in row-major order.
void write_snapshot(std::ostream& os, const SnapshotMatrix& snap);
SnapshotMatrix read_snapshot(std::istream& is);
void write_snapshot_file(const std::string& path, const SnapshotMatrix& snap);
SnapshotMatrix read_snapshot_file(const std::string& path);

} // namespace synclab
