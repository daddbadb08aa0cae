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
#include <map>
#include <string>
#include <vector>

#include "synclab/delay_doppler.hpp"
#include "synclab/scenario.hpp"
#include "synclab/sync.hpp"
#include "synclab/window.hpp"

namespace synclab {

// One processing chain of a campaign: a traditional window on both axes of
// the 2D FFT, or the MUSIC surrogate map.
struct WindowChoice {
    std::string label;
    MapMethod method = MapMethod::fft2d;
    WindowKind kind = WindowKind::rectangular;
};

// "rectangular", "hann", "hamming", "blackman" or "music".
WindowChoice parse_window_choice(const std::string& name);

struct MusicSettings {
    int model_order = 0;         // 0 -> number of configured paths
    int doppler_model_order = 0; // 0 -> number of distinct path Doppler shifts
    SubarrayConfig smoothing{0, 0, 0, true, PseudospectrumScale::db_above_floor};
};

struct CampaignConfig {
    Scenario scenario;        // offsets carry the drift between the two frames
    RVector snr_grid_db;      // +inf means noiseless
    std::vector<WindowChoice> windows;
    int trials_per_point = 500;
    std::string output_dir = "out";
    std::uint64_t master_seed = 1;
    int threads = 0;          // 0 -> std::thread::hardware_concurrency()
    MusicSettings music;
};

// N_c=64, N_cp=8, G=32, K=4, M_r=8, M_t=2, two static and two moving paths,
// SNR -40:5:0 dB, 500 trials, rectangular/hamming/hann/blackman/music.
CampaignConfig desk_campaign();

// One reference/drifted frame pair through map, static row, fingerprint, correlation and peak search.
// MUSIC maps take their static rows from the rectangular fft2d maps of the same frames, because the
// separable surrogate's Doppler profile does not carry path power.
SyncEstimate estimate_pair(const SnapshotMatrix& ref, const SnapshotMatrix& next, const GridSpec& grid,
                           const WindowChoice& window, const MusicSettings& music, int music_order,
                           const EstimateOptions& options = {});

// Per-trial seed: derive_seed({master_seed, snr_index, trial_index}).
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t snr_index, std::size_t trial_index);

// Noise variance giving the requested per-sample SNR against the mean
// power of the noiseless reference snapshot.
double noise_variance_for_snr(const Scenario& scenario, double snr_db);

struct MsePoint {
    double snr_db = 0.0;
    double mse_cells_sq = 0.0;   // TO index error, wrapped, vs round(drift / T_R)
    double mse_seconds_sq = 0.0;
    int trials = 0;              // successful trials
    double ci95 = 0.0;           // normal-approximation half width, cells^2
    int failures = 0;
    double cfo_mse_cells_sq = 0.0;
    std::map<long, std::uint64_t> error_histogram; // TO index error -> count
};

struct MseCurve {
    std::string window_label;
    std::vector<MsePoint> points;
};

struct CampaignResult {
    std::vector<MseCurve> curves;
    std::uint64_t total_trials = 0;
    std::uint64_t failed_trials = 0;
    double to_drift_cells = 0.0;    // exact drift / T_R
    long to_truth_index = 0;        // round(drift / T_R)
    long cfo_truth_index = 0;       // round(cfo drift / F_R)
    double quantization_error_cells = 0.0;
    double signal_power = 0.0;
    int threads_used = 1;
    double elapsed_s = 0.0;
};

// Fully deterministic given the config, independent of the thread count.
// Throws Error(campaign_aborted) when more than 1% of trials fail.
CampaignResult run_campaign(const CampaignConfig& config);

struct TheoryComparisonRow {
    double snr_db = 0.0;
    double sigma_bar_sq = 0.0;
    double empirical_mse = 0.0;
    double empirical_ci95 = 0.0;
    double theoretical_mse = 0.0;
    double ratio = 0.0; // empirical / theoretical
    std::string error;  // quadrature failure for this row, if any
};

// Bridges simulation and the Gaussian peak model on the K1 = K0 + round(cfo
// drift / F_R) correlation row of the first window choice: the mean |A| row
// is s and the mean per-index variance away from the peak is sigma_bar^2.
// Requires K N_c <= 64.
std::vector<TheoryComparisonRow> run_theory_comparison(const CampaignConfig& config);

} // namespace synclab
