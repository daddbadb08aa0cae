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

#include "synclab/channel.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "synclab/detail/binary_io.hpp"
#include "synclab/fft.hpp"
#include "synclab/random.hpp"

namespace synclab {
namespace {

constexpr char kSnapshotMagic[8] = {'S', 'L', 'S', 'N', 'A', 'P', '0', '1'};

void check_path(const Scenario& s, std::size_t path_index)
{
    if (path_index >= s.paths.size())
        throw Error(ErrorCode::index_out_of_range, "path index " + std::to_string(path_index) + " out of range");
}

cd transmit_factor(const Scenario& s, const PathParams& p)
{
    const CVector omega_t = steering_vector(s.array.n_tx, s.array.spacing_m, s.array.wavelength_m, p.aod_rad);
    cd acc{0.0, 0.0};
    for (std::size_t k = 0; k < omega_t.size() && k < s.array.precoder.size(); ++k)
        acc += omega_t[k] * s.array.precoder[k];
    return acc;
}

void add_noise(CMatrix& m, double variance, std::uint64_t seed, int frame_id)
{
    if (variance <= 0.0)
        return;
    auto rng = make_stream(seed, frame_id, Stream::noise);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double re = n(rng);
            const double im = n(rng);
            m(r, c) += cd(re, im);
        }
}

// Per-sample synthesis of one OFDM symbol (CP removed),
// normalized to the unitary IDFT used by the approximate path.
CVector exact_time_symbol(const Scenario& s, const DataSymbols& data, int g)
{
    const OfdmParams& o = s.ofdm;
    const int nc = o.n_subcarriers;
    const double tsam = o.sample_interval();
    const double scale = 1.0 / std::sqrt(static_cast<double>(nc));
    CVector y(static_cast<std::size_t>(nc), cd{0.0, 0.0});
    for (std::size_t l = 0; l < s.paths.size(); ++l) {
        const PathParams& p = s.paths[l];
        const cd alpha = path_amplitude(s, l, s.antenna_index);
        const double beta = 2.0 * p.velocity_mps / kSpeedOfLight;
        const double delay = s.offsets.to_s + p.delay_s;
        for (int u = 0; u < nc; ++u) {
            const double t = u * tsam + g * o.symbol_duration() + o.cp_duration();
            const double common = -kTwoPi * (o.carrier_hz * beta + s.offsets.cfo_hz) * t;
            cd acc{0.0, 0.0};
            for (int n = 0; n < nc; ++n) {
                const double phase = -kTwoPi * n * o.subcarrier_spacing_hz * beta * t
                                     - kTwoPi * n * o.subcarrier_spacing_hz * delay
                                     + kTwoPi * static_cast<double>(n) * u / nc;
                acc += data.symbols[static_cast<std::size_t>(n)] * std::polar(1.0, phase);
            }
            y[static_cast<std::size_t>(u)] += alpha * std::polar(1.0, common) * acc * scale;
        }
    }
    return y;
}

} // namespace

DataSymbols DataSymbols::unit(int n_subcarriers)
{
    return {CVector(static_cast<std::size_t>(n_subcarriers), cd{1.0, 0.0}), Constellation::unit};
}

DataSymbols DataSymbols::qpsk(int n_subcarriers, std::uint64_t seed, int frame_id)
{
    auto rng = make_stream(seed, frame_id, Stream::data);
    std::uniform_int_distribution<int> pick(0, 3);
    const double h = 1.0 / std::sqrt(2.0);
    DataSymbols d;
    d.constellation = Constellation::qpsk;
    d.symbols.resize(static_cast<std::size_t>(n_subcarriers));
    for (auto& c : d.symbols) {
        const int k = pick(rng);
        c = cd((k & 1) ? -h : h, (k & 2) ? -h : h);
    }
    return d;
}

cd path_amplitude(const Scenario& s, std::size_t path_index, int antenna_index)
{
    check_path(s, path_index);
    if (antenna_index < 0 || antenna_index >= s.array.n_rx)
        throw Error(ErrorCode::index_out_of_range, "antenna index " + std::to_string(antenna_index) + " out of range");
    const PathParams& p = s.paths[path_index];
    const double carrier_phase = -kTwoPi * s.ofdm.carrier_hz * (s.offsets.to_s + p.delay_s);
    const double rx_step = kTwoPi * s.array.spacing_m * std::cos(p.aoa_rad) / s.array.wavelength_m;
    const cd rx = std::polar(1.0, rx_step * antenna_index);
    return std::polar(1.0, carrier_phase) * p.gain * rx * transmit_factor(s, p);
}

CVector doppler_vector(const Scenario& s, std::size_t path_index)
{
    check_path(s, path_index);
    const OfdmParams& o = s.ofdm;
    const double f = s.paths[path_index].doppler_hz(o.carrier_hz) + s.offsets.cfo_hz;
    CVector v(static_cast<std::size_t>(o.n_symbols));
    for (int g = 0; g < o.n_symbols; ++g)
        v[static_cast<std::size_t>(g)] = std::polar(1.0, -kTwoPi * f * (g * o.symbol_duration() + o.cp_duration()));
    return v;
}

CVector delay_vector(const Scenario& s, std::size_t path_index)
{
    check_path(s, path_index);
    const OfdmParams& o = s.ofdm;
    const double delay = s.offsets.to_s + s.paths[path_index].delay_s;
    CVector v(static_cast<std::size_t>(o.n_subcarriers));
    for (int n = 0; n < o.n_subcarriers; ++n)
        v[static_cast<std::size_t>(n)] = std::polar(1.0, -kTwoPi * n * o.subcarrier_spacing_hz * delay);
    return v;
}

CMatrix stacked_model(const Scenario& s)
{
    const int g_count = s.ofdm.n_symbols;
    const int nc = s.ofdm.n_subcarriers;
    CMatrix m = CMatrix::Zero(g_count, nc);
    for (std::size_t l = 0; l < s.paths.size(); ++l) {
        const cd alpha = path_amplitude(s, l, s.antenna_index);
        const CVector theta = doppler_vector(s, l);
        const CVector tau = delay_vector(s, l);
        for (int g = 0; g < g_count; ++g) {
            const cd rowc = alpha * theta[static_cast<std::size_t>(g)];
            for (int n = 0; n < nc; ++n)
                m(g, n) += rowc * tau[static_cast<std::size_t>(n)];
        }
    }
    return m;
}

double signal_power(const Scenario& s)
{
    const CMatrix m = stacked_model(s);
    return m.squaredNorm() / static_cast<double>(m.size());
}

SnapshotMatrix synth_snapshot(const Scenario& s, const DataSymbols& data, int frame_id, SynthesisMode mode)
{
    const int g_count = s.ofdm.n_symbols;
    const int nc = s.ofdm.n_subcarriers;
    if (static_cast<int>(data.symbols.size()) != nc)
        throw Error(ErrorCode::dimension_mismatch, "data symbol count must equal the number of subcarriers");
    for (const auto& c : data.symbols)
        if (std::abs(std::abs(c) - 1.0) > 1e-12)
            throw Error(ErrorCode::non_unit_symbol, "data symbols must have unit magnitude");

    const double scale = 1.0 / std::sqrt(static_cast<double>(nc));
    SnapshotMatrix out;
    out.frame_id = frame_id;
    out.offsets_applied = s.offsets;
    out.data.resize(g_count, nc);

    const CMatrix model = mode == SynthesisMode::approximate ? stacked_model(s) : CMatrix();
    CVector buf(static_cast<std::size_t>(nc));
    for (int g = 0; g < g_count; ++g) {
        if (mode == SynthesisMode::approximate) {
            // Y_g = (sum_l ... tau_l) D F: modulate, then unitary IDFT.
            for (int n = 0; n < nc; ++n)
                buf[static_cast<std::size_t>(n)] = model(g, n) * data.symbols[static_cast<std::size_t>(n)];
            fft::backward(buf);
            for (auto& x : buf)
                x *= scale;
        } else {
            buf = exact_time_symbol(s, data, g);
        }
        // Compensation Y_g F^H D^-1.
        fft::forward(buf);
        for (int n = 0; n < nc; ++n)
            out.data(g, n) = buf[static_cast<std::size_t>(n)] * scale / data.symbols[static_cast<std::size_t>(n)];
    }
    add_noise(out.data, s.noise_variance, s.seed, frame_id);
    return out;
}

void write_snapshot(std::ostream& os, const SnapshotMatrix& snap)
{
    os.write(kSnapshotMagic, sizeof(kSnapshotMagic));
    detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(snap.data.rows()));
    detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(snap.data.cols()));
    detail::write_le<std::int32_t>(os, snap.frame_id);
    for (Eigen::Index r = 0; r < snap.data.rows(); ++r)
        for (Eigen::Index c = 0; c < snap.data.cols(); ++c)
            detail::write_complex64(os, snap.data(r, c));
    if (!os)
        throw Error(ErrorCode::io, "failed to write snapshot");
}

SnapshotMatrix read_snapshot(std::istream& is)
{
    char magic[8];
    if (!is.read(magic, sizeof(magic)) || !std::equal(magic, magic + 8, kSnapshotMagic))
        throw Error(ErrorCode::io, "not a snapshot dump");
    const auto rows = detail::read_le<std::uint32_t>(is);
    const auto cols = detail::read_le<std::uint32_t>(is);
    SnapshotMatrix snap;
    snap.frame_id = detail::read_le<std::int32_t>(is);
    snap.data.resize(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c)
            snap.data(r, c) = detail::read_complex64(is);
    return snap;
}

void write_snapshot_file(const std::string& path, const SnapshotMatrix& snap)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error(ErrorCode::io, "cannot open " + path);
    write_snapshot(os, snap);
}

SnapshotMatrix read_snapshot_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error(ErrorCode::io, "cannot open " + path);
    return read_snapshot(is);
}

} // namespace synclab
