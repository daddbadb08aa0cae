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

#include "synclab/sync.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "synclab/fft.hpp"

namespace synclab {
namespace {

RVector row_energies(const DelayDopplerMap& map)
{
    RVector e(static_cast<std::size_t>(map.n_rows()));
    for (int i = 0; i < map.n_rows(); ++i)
        e[static_cast<std::size_t>(i)] = map.data.row(i).squaredNorm();
    return e;
}

int argmax_lowest(const RVector& v)
{
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::set<int> top_columns(const DelayDopplerMap& map, int row, int count)
{
    std::vector<int> idx(static_cast<std::size_t>(map.n_cols()));
    for (int c = 0; c < map.n_cols(); ++c)
        idx[static_cast<std::size_t>(c)] = c;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(count, 1)), idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k), idx.end(), [&](int a, int b) {
        const double ma = std::abs(map.data(row, a));
        const double mb = std::abs(map.data(row, b));
        return ma != mb ? ma > mb : a < b;
    });
    return {idx.begin(), idx.begin() + static_cast<long>(k)};
}

// Vertex offset of the parabola through (-1, a), (0, b), (1, c).
double parabolic_offset(double a, double b, double c)
{
    const double denom = a - 2.0 * b + c;
    return denom == 0.0 ? 0.0 : 0.5 * (a - c) / denom;
}

} // namespace

int locate_static_row(const DelayDopplerMap& map, std::optional<int> /*static_count_hint*/)
{
    const RVector e = row_energies(map);
    if (*std::max_element(e.begin(), e.end()) <= 0.0)
        throw Error(ErrorCode::zero_norm, "delay-Doppler map is all zero");
    return argmax_lowest(e);
}

int locate_static_row(std::span<const DelayDopplerMap> frames, int static_count_hint)
{
    if (frames.empty())
        throw Error(ErrorCode::invalid_argument, "no frames given");
    const int fallback = locate_static_row(frames.front());
    if (frames.size() < 2 || static_count_hint < 1)
        return fallback;

    const RVector e = row_energies(frames.front());
    std::vector<int> order(e.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return e[static_cast<std::size_t>(a)] > e[static_cast<std::size_t>(b)]; });
    const std::size_t candidates = std::min<std::size_t>(order.size(), 4);

    int best = fallback;
    int best_votes = -1;
    for (std::size_t c = 0; c < candidates; ++c) {
        const int row = order[c];
        const auto ref = top_columns(frames.front(), row, static_count_hint);
        int votes = 0;
        for (std::size_t f = 1; f < frames.size(); ++f)
            if (frames[f].n_rows() == frames.front().n_rows() && top_columns(frames[f], row, static_count_hint) == ref)
                ++votes;
        if (votes > best_votes) {
            best_votes = votes;
            best = row;
        }
    }
    return best_votes > 0 ? best : fallback;
}

FingerprintSpectrum extract_fingerprint(const DelayDopplerMap& map, int k0)
{
    if (k0 < 0 || k0 >= map.n_rows())
        throw Error(ErrorCode::index_out_of_range, "fingerprint row " + std::to_string(k0) + " out of range");
    FingerprintSpectrum fp;
    fp.row_index = k0;
    fp.values.assign(map.data.row(k0).data(), map.data.row(k0).data() + map.n_cols());
    for (const auto& v : fp.values)
        fp.norm_sq += std::norm(v);
    if (!(fp.norm_sq > 0.0))
        throw Error(ErrorCode::zero_norm, "fingerprint row has zero norm");
    return fp;
}

CorrelationMap cross_correlate(const DelayDopplerMap& map_new, const FingerprintSpectrum& fp,
                               std::optional<RowRange> row_range)
{
    const int n = map_new.n_cols();
    if (static_cast<int>(fp.values.size()) != n)
        throw Error(ErrorCode::dimension_mismatch, "fingerprint length differs from the map width");
    if (!(fp.norm_sq > 0.0))
        throw Error(ErrorCode::zero_norm, "fingerprint normalizer is zero");

    const int total = map_new.n_rows();
    const RowRange range = row_range.value_or(RowRange{0, total});
    if (range.count < 1 || range.count > total)
        throw Error(ErrorCode::invalid_argument, "row range must cover between 1 and all rows");

    // Correlation theorem: DFT(A_i) = DFT(Xi_i) conj(DFT(beta)).
    CVector beta_f = fft::forward_copy(fp.values);
    for (auto& b : beta_f)
        b = std::conj(b);

    CorrelationMap corr;
    corr.normalizer = fp.norm_sq;
    corr.data.resize(range.count, n);
    corr.rows.resize(static_cast<std::size_t>(range.count));
    const double scale = 1.0 / (static_cast<double>(n) * fp.norm_sq);
    CVector buf(static_cast<std::size_t>(n));
    for (int r = 0; r < range.count; ++r) {
        const int row = static_cast<int>(wrap_index(range.first + r, total));
        corr.rows[static_cast<std::size_t>(r)] = row;
        for (int c = 0; c < n; ++c)
            buf[static_cast<std::size_t>(c)] = map_new.data(row, c);
        fft::forward(buf);
        for (int c = 0; c < n; ++c)
            buf[static_cast<std::size_t>(c)] *= beta_f[static_cast<std::size_t>(c)];
        fft::backward(buf);
        for (int c = 0; c < n; ++c)
            corr.data(r, c) = buf[static_cast<std::size_t>(c)] * scale;
    }
    return corr;
}

SyncEstimate estimate_offsets(const CorrelationMap& corr, const GridSpec& grid, int k0, const EstimateOptions& options)
{
    if (corr.data.size() == 0)
        throw Error(ErrorCode::invalid_argument, "empty correlation map");
    const Eigen::Index rows = corr.data.rows();
    const Eigen::Index cols = corr.data.cols();

    RVector mags(static_cast<std::size_t>(corr.data.size()));
    Eigen::Index best_r = 0;
    Eigen::Index best_c = 0;
    double best = -1.0;
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double m = std::abs(corr.data(r, c));
            mags[k++] = m;
            if (m > best) {
                best = m;
                best_r = r;
                best_c = c;
            }
        }

    const long n_rows = grid.n_doppler_bins > 0 ? grid.n_doppler_bins : static_cast<long>(rows);
    const long n_cols = grid.n_delay_bins > 0 ? grid.n_delay_bins : static_cast<long>(cols);
    const int map_row = corr.rows.empty() ? static_cast<int>(best_r) : corr.rows[static_cast<std::size_t>(best_r)];

    SyncEstimate est;
    est.row_shift = static_cast<int>(wrap_signed(map_row - k0, n_rows));
    est.col_shift = static_cast<int>(wrap_signed(static_cast<long>(best_c), n_cols));
    est.cfo_drift_hz = est.row_shift * grid.doppler_resolution_hz;
    est.to_drift_s = est.col_shift * grid.delay_resolution_s;
    est.peak_magnitude = best;

    auto mid = mags.begin() + static_cast<long>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    est.peak_to_median_ratio = *mid > 0.0 ? best / *mid : std::numeric_limits<double>::infinity();

    if (options.subgrid_refinement) {
        auto at = [&](Eigen::Index r, Eigen::Index c) { return std::abs(corr.data(r, c)); };
        const double left = at(best_r, (best_c + cols - 1) % cols);
        const double right = at(best_r, (best_c + 1) % cols);
        est.refined_col_shift = est.col_shift + parabolic_offset(left, best, right);
        double row_off = 0.0;
        if (best_r > 0 && best_r + 1 < rows)
            row_off = parabolic_offset(at(best_r - 1, best_c), best, at(best_r + 1, best_c));
        est.refined_row_shift = est.row_shift + row_off;
    }
    return est;
}

} // namespace synclab
