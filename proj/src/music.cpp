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

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "synclab/delay_doppler.hpp"
#include "synclab/fft.hpp"

namespace synclab {
namespace {

using Dense = Eigen::MatrixXcd;

Dense smoothed_covariance(const CMatrix& rows, int m, bool forward_backward)
{
    const Eigen::Index len = rows.cols();
    const Eigen::Index shifts = len - m + 1;
    Dense cov = Dense::Zero(m, m);
    Dense hankel(m, shifts);
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        for (Eigen::Index s = 0; s < shifts; ++s)
            for (Eigen::Index t = 0; t < m; ++t)
                hankel(t, s) = rows(r, s + t);
        cov.noalias() += hankel * hankel.adjoint();
    }
    cov /= static_cast<double>(rows.rows() * shifts);
    if (forward_backward) {
        // (R + J conj(R) J) / 2 with J the exchange matrix.
        Dense flipped(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                flipped(i, j) = std::conj(cov(m - 1 - i, m - 1 - j));
        cov = 0.5 * (cov + flipped);
    }
    return cov;
}

// Rescales to peak 1 in place.
void rescale(RVector& p, PseudospectrumScale scale)
{
    if (scale == PseudospectrumScale::db_above_floor) {
        RVector sorted = p;
        const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
        std::nth_element(sorted.begin(), mid, sorted.end());
        const double floor = *mid;
        for (double& v : p)
            v = std::max(0.0, 10.0 * std::log10(v / floor));
    }
    const double peak = *std::max_element(p.begin(), p.end());
    if (peak > 0.0)
        for (double& v : p)
            v /= peak;
}

} // namespace

std::string to_string(PseudospectrumScale scale)
{
    return scale == PseudospectrumScale::linear ? "linear" : "db_above_floor";
}

PseudospectrumScale parse_pseudospectrum_scale(std::string_view name)
{
    if (name == "linear")
        return PseudospectrumScale::linear;
    if (name == "db_above_floor")
        return PseudospectrumScale::db_above_floor;
    throw Error(ErrorCode::invalid_argument, "unknown pseudospectrum scale '" + std::string(name) + "'");
}

RVector music_pseudospectrum(const CMatrix& rows, int subarray_length, int model_order, int n_grid,
                             bool forward_backward)
{
    const int len = static_cast<int>(rows.cols());
    if (model_order < 1)
        throw Error(ErrorCode::invalid_argument, "MUSIC model order must be >= 1");
    if (subarray_length < 2 || subarray_length > len)
        throw Error(ErrorCode::invalid_argument, "subarray length must be in [2, observation length]");
    if (model_order >= subarray_length)
        throw Error(ErrorCode::invalid_argument, "MUSIC model order must be smaller than the subarray length");
    if (n_grid < subarray_length)
        throw Error(ErrorCode::invalid_argument, "pseudospectrum grid shorter than the subarray");

    const Dense cov = smoothed_covariance(rows, subarray_length, forward_backward);
    Eigen::SelfAdjointEigenSolver<Dense> eig(cov);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorCode::rank_deficient, "eigendecomposition failed");
    const Eigen::VectorXd& values = eig.eigenvalues(); // ascending
    const double top = values(subarray_length - 1);
    if (!(top > 0.0))
        throw Error(ErrorCode::rank_deficient, "covariance is zero");
    int rank = 0;
    for (int k = 0; k < subarray_length; ++k)
        if (values(k) > 1e-10 * top)
            ++rank;
    if (rank < model_order)
        throw Error(ErrorCode::rank_deficient, "covariance rank " + std::to_string(rank) +
                                                   " is below the requested model order " +
                                                   std::to_string(model_order));

    // ||E_n^H a(k)||^2 = sum_j |DFT(conj(e_j))[k]|^2 on the zero-padded grid.
    RVector denom(static_cast<std::size_t>(n_grid), 0.0);
    CVector buf(static_cast<std::size_t>(n_grid));
    const int noise_dim = subarray_length - model_order;
    for (int j = 0; j < noise_dim; ++j) {
        std::fill(buf.begin(), buf.end(), cd{});
        for (int t = 0; t < subarray_length; ++t)
            buf[static_cast<std::size_t>(t)] = std::conj(eig.eigenvectors()(t, j));
        fft::forward(buf);
        for (int k = 0; k < n_grid; ++k)
            denom[static_cast<std::size_t>(k)] += std::norm(buf[static_cast<std::size_t>(k)]);
    }
    RVector p(static_cast<std::size_t>(n_grid));
    for (int k = 0; k < n_grid; ++k)
        p[static_cast<std::size_t>(k)] = 1.0 / std::max(denom[static_cast<std::size_t>(k)], 1e-300);
    return p;
}

DelayDopplerMap music_map(const SnapshotMatrix& snapshot, const GridSpec& grid, int model_order,
                          const SubarrayConfig& smoothing)
{
    const int g = snapshot.n_symbols();
    const int nc = snapshot.n_subcarriers();
    if (grid.n_doppler_bins != grid.k_pad * g || grid.n_delay_bins != grid.k_pad * nc)
        throw Error(ErrorCode::dimension_mismatch, "grid does not match the snapshot size");

    const int delay_len = smoothing.delay_length > 0 ? smoothing.delay_length : (2 * nc) / 3;
    const int doppler_len = smoothing.doppler_length > 0 ? smoothing.doppler_length : (2 * g) / 3;
    const int doppler_order = smoothing.doppler_model_order > 0 ? smoothing.doppler_model_order : model_order;

    RVector delay = music_pseudospectrum(snapshot.data, delay_len, model_order, grid.n_delay_bins,
                                         smoothing.forward_backward);
    const CMatrix columns = snapshot.data.transpose();
    RVector doppler = music_pseudospectrum(columns, doppler_len, doppler_order, grid.n_doppler_bins,
                                           smoothing.forward_backward);
    rescale(delay, smoothing.scale);
    rescale(doppler, smoothing.scale);

    const Window rect_g = make_window(WindowKind::rectangular, g);
    const Window rect_nc = make_window(WindowKind::rectangular, nc);
    const double scale = transform_fft2d(snapshot, rect_g, rect_nc, grid).data.cwiseAbs().maxCoeff();

    DelayDopplerMap map;
    map.method = MapMethod::music;
    map.grid = grid;
    map.separable_surrogate = true;
    map.data.resize(grid.n_doppler_bins, grid.n_delay_bins);
    for (int i = 0; i < grid.n_doppler_bins; ++i) {
        const double row = scale * doppler[static_cast<std::size_t>(i)];
        for (int p = 0; p < grid.n_delay_bins; ++p)
            map.data(i, p) = cd(row * delay[static_cast<std::size_t>(p)], 0.0);
    }
    return map;
}

} // namespace synclab
