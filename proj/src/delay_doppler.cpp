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

#include "synclab/delay_doppler.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "synclab/detail/binary_io.hpp"
#include "synclab/fft.hpp"

namespace synclab {
namespace {

constexpr char kMapMagic[8] = {'S', 'L', 'M', 'A', 'P', '0', '0', '1'};

} // namespace

std::string to_string(MapMethod method)
{
    return method == MapMethod::music ? "music" : "fft2d";
}

CMatrix zero_pad(const SnapshotMatrix& snapshot, int k_pad)
{
    if (k_pad < 1)
        throw Error(ErrorCode::invalid_argument, "zero-padding ratio must be >= 1");
    const Eigen::Index g = snapshot.data.rows();
    const Eigen::Index nc = snapshot.data.cols();
    CMatrix out = CMatrix::Zero(k_pad * g, k_pad * nc);
    out.topLeftCorner(g, nc) = snapshot.data;
    return out;
}

DelayDopplerMap transform_fft2d(const SnapshotMatrix& snapshot, const Window& win_g, const Window& win_nc,
                                const GridSpec& grid)
{
    const Eigen::Index g = snapshot.data.rows();
    const Eigen::Index nc = snapshot.data.cols();
    if (static_cast<Eigen::Index>(win_g.size()) != g || static_cast<Eigen::Index>(win_nc.size()) != nc)
        throw Error(ErrorCode::dimension_mismatch, "window lengths must match the snapshot (G, N_c)");
    if (grid.n_doppler_bins != grid.k_pad * g || grid.n_delay_bins != grid.k_pad * nc)
        throw Error(ErrorCode::dimension_mismatch, "grid does not match the snapshot size");

    CMatrix m = zero_pad(snapshot, grid.k_pad);
    for (Eigen::Index r = 0; r < g; ++r)
        for (Eigen::Index c = 0; c < nc; ++c)
            m(r, c) *= win_g.taps[static_cast<std::size_t>(r)] * win_nc.taps[static_cast<std::size_t>(c)];

    // Rows first; only the first G rows are nonzero.
    for (Eigen::Index r = 0; r < g; ++r)
        fft::backward(std::span<cd>(m.row(r).data(), static_cast<std::size_t>(m.cols())));
    fft::backward_cols(m);

    DelayDopplerMap map;
    map.data = std::move(m);
    map.method = MapMethod::fft2d;
    map.grid = grid;
    return map;
}

cd dtft_oracle(const SnapshotMatrix& snapshot, const Window& win_g, const Window& win_nc, double nu_doppler,
               double nu_delay)
{
    cd acc{0.0, 0.0};
    for (Eigen::Index g = 0; g < snapshot.data.rows(); ++g)
        for (Eigen::Index n = 0; n < snapshot.data.cols(); ++n) {
            const double phase = kTwoPi * (nu_doppler * static_cast<double>(g) + nu_delay * static_cast<double>(n));
            acc += win_g.taps[static_cast<std::size_t>(g)] * win_nc.taps[static_cast<std::size_t>(n)] *
                   snapshot.data(g, n) * std::polar(1.0, phase);
        }
    return acc;
}

void write_map(std::ostream& os, const DelayDopplerMap& map)
{
    os.write(kMapMagic, sizeof(kMapMagic));
    detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(map.data.rows()));
    detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(map.data.cols()));
    detail::write_le<std::uint32_t>(os, map.method == MapMethod::music ? 1u : 0u);
    for (Eigen::Index r = 0; r < map.data.rows(); ++r)
        for (Eigen::Index c = 0; c < map.data.cols(); ++c)
            detail::write_complex64(os, map.data(r, c));
    if (!os)
        throw Error(ErrorCode::io, "failed to write map");
}

DelayDopplerMap read_map(std::istream& is)
{
    char magic[8];
    if (!is.read(magic, sizeof(magic)) || !std::equal(magic, magic + 8, kMapMagic))
        throw Error(ErrorCode::io, "not a delay-Doppler map dump");
    const auto rows = detail::read_le<std::uint32_t>(is);
    const auto cols = detail::read_le<std::uint32_t>(is);
    const auto method = detail::read_le<std::uint32_t>(is);
    DelayDopplerMap map;
    map.method = method == 1 ? MapMethod::music : MapMethod::fft2d;
    map.separable_surrogate = map.method == MapMethod::music;
    map.grid.n_doppler_bins = static_cast<int>(rows);
    map.grid.n_delay_bins = static_cast<int>(cols);
    map.data.resize(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c)
            map.data(r, c) = detail::read_complex64(is);
    return map;
}

void write_cut_csv(std::ostream& os, const DelayDopplerMap& map, CutAxis axis, int index)
{
    const int limit = axis == CutAxis::row ? map.n_rows() : map.n_cols();
    if (index < 0 || index >= limit)
        throw Error(ErrorCode::index_out_of_range, "cut index out of range");
    const int len = axis == CutAxis::row ? map.n_cols() : map.n_rows();
    double peak = 0.0;
    for (int k = 0; k < len; ++k)
        peak = std::max(peak, std::abs(axis == CutAxis::row ? map.data(index, k) : map.data(k, index)));
    os << "bin,value_re,value_im,magnitude,magnitude_db\n";
    for (int k = 0; k < len; ++k) {
        const cd v = axis == CutAxis::row ? map.data(index, k) : map.data(k, index);
        const double mag = std::abs(v);
        const double db = (peak > 0.0 && mag > 0.0) ? 20.0 * std::log10(mag / peak) : -300.0;
        os << k << ',' << v.real() << ',' << v.imag() << ',' << mag << ',' << db << '\n';
    }
}

} // namespace synclab
