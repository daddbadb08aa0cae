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

#include "synclab/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "synclab/channel.hpp"
#include "synclab/random.hpp"
#include "synclab/sync.hpp"
#include "synclab/theory.hpp"

namespace synclab {
namespace {

struct TrialOutcome {
    bool ok = false;
    long col_error = 0;
    long row_error = 0;
};

struct Truth {
    double to_cells = 0.0;
    long to_index = 0;
    long cfo_index = 0;
};

Truth truth_of(const Scenario& s, const GridSpec& grid)
{
    Truth t;
    t.to_cells = s.offsets.to_drift_s / grid.delay_resolution_s;
    t.to_index = std::lround(t.to_cells);
    t.cfo_index = std::lround(s.offsets.cfo_drift_hz / grid.doppler_resolution_hz);
    return t;
}

int distinct_dopplers(const Scenario& s)
{
    std::set<double> v;
    for (const auto& p : s.paths)
        v.insert(p.velocity_mps);
    return static_cast<int>(v.size());
}

struct Pipeline {
    const CampaignConfig& config;
    GridSpec grid;
    int music_order = 1;
    MusicSettings music;

    explicit Pipeline(const CampaignConfig& c) : config(c), grid(derive_grids(c.scenario.ofdm)), music(c.music)
    {
        music_order = c.music.model_order > 0 ? c.music.model_order : static_cast<int>(c.scenario.paths.size());
        if (music.doppler_model_order <= 0)
            music.doppler_model_order = distinct_dopplers(c.scenario);
    }

    SyncEstimate estimate(const std::pair<SnapshotMatrix, SnapshotMatrix>& snaps, std::size_t w) const
    {
        return estimate_pair(snaps.first, snaps.second, grid, config.windows[w], music, music_order);
    }

    std::pair<SnapshotMatrix, SnapshotMatrix> frames(double noise_variance, std::uint64_t seed) const
    {
        Scenario ref = config.scenario;
        ref.noise_variance = noise_variance;
        ref.seed = seed;
        Scenario next = ref;
        next.offsets = ref.offsets.advanced();
        const int nc = ref.ofdm.n_subcarriers;
        return {synth_snapshot(ref, DataSymbols::qpsk(nc, seed, 0), 0),
                synth_snapshot(next, DataSymbols::qpsk(nc, seed, 1), 1)};
    }
};

template <typename Job>
int run_parallel(std::size_t job_count, int requested_threads, Job&& job)
{
    int threads = requested_threads > 0 ? requested_threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(job_count, 1))));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next.fetch_add(1); j < job_count; j = next.fetch_add(1))
            job(j);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return threads;
}

} // namespace

WindowChoice parse_window_choice(const std::string& name)
{
    if (name == "music")
        return {"music", MapMethod::music, WindowKind::rectangular};
    const WindowKind kind = parse_window_kind(name);
    return {to_string(kind), MapMethod::fft2d, kind};
}

CampaignConfig desk_campaign()
{
    CampaignConfig c;
    c.scenario = desk_scenario();
    for (double snr = -40.0; snr <= 0.0 + 1e-9; snr += 5.0)
        c.snr_grid_db.push_back(snr);
    for (const char* w : {"rectangular", "hamming", "hann", "blackman", "music"})
        c.windows.push_back(parse_window_choice(w));
    return c;
}

SyncEstimate estimate_pair(const SnapshotMatrix& ref, const SnapshotMatrix& next, const GridSpec& grid,
                           const WindowChoice& window, const MusicSettings& music, int music_order,
                           const EstimateOptions& options)
{
    const int g = ref.n_symbols();
    const int nc = ref.n_subcarriers();
    if (window.method == MapMethod::fft2d) {
        const Window wg = make_window(window.kind, g);
        const Window wn = make_window(window.kind, nc);
        const DelayDopplerMap a = transform_fft2d(ref, wg, wn, grid);
        const DelayDopplerMap b = transform_fft2d(next, wg, wn, grid);
        const int k0 = locate_static_row(a);
        return estimate_offsets(cross_correlate(b, extract_fingerprint(a, k0)), grid, k0, options);
    }
    const Window rg = make_window(WindowKind::rectangular, g);
    const Window rn = make_window(WindowKind::rectangular, nc);
    const int k0 = locate_static_row(transform_fft2d(ref, rg, rn, grid));
    const int k1 = locate_static_row(transform_fft2d(next, rg, rn, grid));
    SubarrayConfig smoothing = music.smoothing;
    if (music.doppler_model_order > 0)
        smoothing.doppler_model_order = music.doppler_model_order;
    const DelayDopplerMap a = music_map(ref, grid, music_order, smoothing);
    const DelayDopplerMap b = music_map(next, grid, music_order, smoothing);
    return estimate_offsets(cross_correlate(b, extract_fingerprint(a, k0), RowRange{k1, 1}), grid, k0, options);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t snr_index, std::size_t trial_index)
{
    return derive_seed({master_seed, static_cast<std::uint64_t>(snr_index), static_cast<std::uint64_t>(trial_index)});
}

double noise_variance_for_snr(const Scenario& scenario, double snr_db)
{
    if (std::isinf(snr_db) && snr_db > 0.0)
        return 0.0;
    Scenario quiet = scenario;
    quiet.noise_variance = 0.0;
    return signal_power(quiet) / std::pow(10.0, snr_db / 10.0);
}

CampaignResult run_campaign(const CampaignConfig& config)
{
    require_valid(config.scenario);
    if (config.trials_per_point < 1)
        throw Error(ErrorCode::config, "trials_per_point must be >= 1");
    if (config.snr_grid_db.empty())
        throw Error(ErrorCode::config, "SNR grid is empty");
    if (config.windows.empty())
        throw Error(ErrorCode::config, "no windows selected");

    const auto start = std::chrono::steady_clock::now();
    const Pipeline pipe(config);
    const Truth truth = truth_of(config.scenario, pipe.grid);
    const std::size_t n_win = config.windows.size();
    const std::size_t n_snr = config.snr_grid_db.size();
    const std::size_t n_trials = static_cast<std::size_t>(config.trials_per_point);
    const long n_cols = pipe.grid.n_delay_bins;
    const long n_rows = pipe.grid.n_doppler_bins;

    RVector variances(n_snr);
    for (std::size_t s = 0; s < n_snr; ++s)
        variances[s] = noise_variance_for_snr(config.scenario, config.snr_grid_db[s]);

    // outcomes[(snr * trials + trial) * n_win + window]; reduced sequentially below.
    std::vector<TrialOutcome> outcomes(n_snr * n_trials * n_win);
    const int threads = run_parallel(n_snr * n_trials, config.threads, [&](std::size_t job) {
        const std::size_t s = job / n_trials;
        const std::size_t t = job % n_trials;
        const std::uint64_t seed = trial_seed(config.master_seed, s, t);
        std::pair<SnapshotMatrix, SnapshotMatrix> snaps;
        try {
            snaps = pipe.frames(variances[s], seed);
        } catch (const std::exception&) {
            return;
        }
        for (std::size_t w = 0; w < n_win; ++w) {
            TrialOutcome& out = outcomes[job * n_win + w];
            try {
                const SyncEstimate est = pipe.estimate(snaps, w);
                out.col_error = wrap_signed(est.col_shift - truth.to_index, n_cols);
                out.row_error = wrap_signed(est.row_shift - truth.cfo_index, n_rows);
                out.ok = true;
            } catch (const std::exception&) {
                out.ok = false;
            }
        }
    });

    CampaignResult result;
    result.to_drift_cells = truth.to_cells;
    result.to_truth_index = truth.to_index;
    result.cfo_truth_index = truth.cfo_index;
    result.quantization_error_cells = truth.to_cells - static_cast<double>(truth.to_index);
    result.signal_power = noise_variance_for_snr(config.scenario, 0.0);
    result.threads_used = threads;
    const double tr2 = pipe.grid.delay_resolution_s * pipe.grid.delay_resolution_s;

    for (std::size_t w = 0; w < n_win; ++w) {
        MseCurve curve;
        curve.window_label = config.windows[w].label;
        for (std::size_t s = 0; s < n_snr; ++s) {
            MsePoint pt;
            pt.snr_db = config.snr_grid_db[s];
            double sum = 0.0;
            double sum_sq = 0.0;
            double row_sum = 0.0;
            for (std::size_t t = 0; t < n_trials; ++t) {
                const TrialOutcome& o = outcomes[(s * n_trials + t) * n_win + w];
                ++result.total_trials;
                if (!o.ok) {
                    ++pt.failures;
                    ++result.failed_trials;
                    continue;
                }
                const double e2 = static_cast<double>(o.col_error * o.col_error);
                sum += e2;
                sum_sq += e2 * e2;
                row_sum += static_cast<double>(o.row_error * o.row_error);
                ++pt.error_histogram[o.col_error];
                ++pt.trials;
            }
            if (pt.trials > 0) {
                const double n = pt.trials;
                pt.mse_cells_sq = sum / n;
                pt.cfo_mse_cells_sq = row_sum / n;
                const double var = n > 1 ? std::max(0.0, (sum_sq - n * pt.mse_cells_sq * pt.mse_cells_sq) / (n - 1.0)) : 0.0;
                pt.ci95 = 1.96 * std::sqrt(var / n);
            }
            pt.mse_seconds_sq = pt.mse_cells_sq * tr2;
            curve.points.push_back(std::move(pt));
        }
        result.curves.push_back(std::move(curve));
    }

    result.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (static_cast<double>(result.failed_trials) > 0.01 * static_cast<double>(result.total_trials))
        throw Error(ErrorCode::campaign_aborted, std::to_string(result.failed_trials) + " of " +
                                                     std::to_string(result.total_trials) + " trials failed");
    return result;
}

std::vector<TheoryComparisonRow> run_theory_comparison(const CampaignConfig& config)
{
    require_valid(config.scenario);
    if (config.windows.empty() || config.trials_per_point < 2)
        throw Error(ErrorCode::config, "theory comparison needs a window and at least two trials");
    const Pipeline pipe(config);
    const int n = pipe.grid.n_delay_bins;
    if (n > 64)
        throw Error(ErrorCode::config, "theory comparison is limited to K N_c <= 64");
    const Truth truth = truth_of(config.scenario, pipe.grid);
    const std::size_t n_trials = static_cast<std::size_t>(config.trials_per_point);
    // Index of the true peak on the searched row, in [0, K N_c).
    const long target = wrap_index(truth.to_index, n);

    const WindowChoice& wc = config.windows.front();
    if (wc.method != MapMethod::fft2d)
        throw Error(ErrorCode::config, "theory comparison needs an fft2d window first in the window list");
    const Window wg = make_window(wc.kind, config.scenario.ofdm.n_symbols);
    const Window wn = make_window(wc.kind, config.scenario.ofdm.n_subcarriers);

    std::vector<TheoryComparisonRow> rows;
    for (std::size_t s = 0; s < config.snr_grid_db.size(); ++s) {
        TheoryComparisonRow row;
        row.snr_db = config.snr_grid_db[s];
        const double variance = noise_variance_for_snr(config.scenario, row.snr_db);

        std::vector<RVector> samples(n_trials);
        std::vector<char> ok(n_trials, 0);
        run_parallel(n_trials, config.threads, [&](std::size_t t) {
            try {
                const auto snaps = pipe.frames(variance, trial_seed(config.master_seed, s, t));
                const DelayDopplerMap ref = transform_fft2d(snaps.first, wg, wn, pipe.grid);
                const DelayDopplerMap next = transform_fft2d(snaps.second, wg, wn, pipe.grid);
                const int k0 = locate_static_row(ref);
                const int k1 = static_cast<int>(wrap_index(k0 + truth.cfo_index, pipe.grid.n_doppler_bins));
                const CorrelationMap corr = cross_correlate(next, extract_fingerprint(ref, k0), RowRange{k1, 1});
                RVector mag(static_cast<std::size_t>(n));
                for (int q = 0; q < n; ++q)
                    mag[static_cast<std::size_t>(q)] = std::abs(corr.data(0, q));
                samples[t] = std::move(mag);
                ok[t] = 1;
            } catch (const std::exception&) {
            }
        });

        RVector mean(static_cast<std::size_t>(n), 0.0);
        RVector mean_sq(static_cast<std::size_t>(n), 0.0);
        double count = 0.0;
        double err_sum = 0.0;
        double err_sq = 0.0;
        for (std::size_t t = 0; t < n_trials; ++t) {
            if (!ok[t])
                continue;
            count += 1.0;
            const RVector& v = samples[t];
            for (int q = 0; q < n; ++q) {
                mean[static_cast<std::size_t>(q)] += v[static_cast<std::size_t>(q)];
                mean_sq[static_cast<std::size_t>(q)] += v[static_cast<std::size_t>(q)] * v[static_cast<std::size_t>(q)];
            }
            const long arg = static_cast<long>(std::max_element(v.begin(), v.end()) - v.begin());
            const double d = static_cast<double>(arg - target);
            err_sum += d * d;
            err_sq += d * d * d * d;
        }
        if (count < 2.0) {
            row.error = "too few successful trials";
            rows.push_back(row);
            continue;
        }
        for (int q = 0; q < n; ++q) {
            mean[static_cast<std::size_t>(q)] /= count;
            mean_sq[static_cast<std::size_t>(q)] /= count;
        }
        const long peak = static_cast<long>(std::max_element(mean.begin(), mean.end()) - mean.begin());
        double var_sum = 0.0;
        int var_count = 0;
        for (int q = 0; q < n; ++q) {
            if (std::abs(wrap_signed(q - peak, n)) <= 1)
                continue;
            const double m = mean[static_cast<std::size_t>(q)];
            var_sum += (mean_sq[static_cast<std::size_t>(q)] - m * m) * count / (count - 1.0);
            ++var_count;
        }
        row.sigma_bar_sq = std::max(var_sum / std::max(var_count, 1), 1e-300);
        row.empirical_mse = err_sum / count;
        const double var = std::max(0.0, (err_sq - count * row.empirical_mse * row.empirical_mse) / (count - 1.0));
        row.empirical_ci95 = 1.96 * std::sqrt(var / count);
        try {
            MeanSpectrum ms{mean, row.sigma_bar_sq, static_cast<double>(target)};
            row.theoretical_mse = mse_theoretical(ms).mse;
            row.ratio = row.theoretical_mse > 0.0 ? row.empirical_mse / row.theoretical_mse
                                                  : std::numeric_limits<double>::quiet_NaN();
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace synclab
