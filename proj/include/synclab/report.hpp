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
#include <vector>

#include "synclab/campaign.hpp"
#include "synclab/window.hpp"

namespace synclab {

// Peak-normalized magnitude curves on a K*N bin grid, peak moved to bin 0.
struct WindowLabCurve {
    std::string label;
    RVector spectrum;
    RVector autocorrelation;
    SpectrumMetrics metrics;
};

// Pseudospectrum of a single on-grid tone in white noise, used as the "MUSIC window".
RVector music_window_response(int length, int k_pad, double snr_db, std::uint64_t seed, int snapshots = 32);

// rect, hamming, hann, blackman, MUSIC at music_snr_db, and the one-hot reference.
std::vector<WindowLabCurve> window_lab_curves(int length, int k_pad, double music_snr_db, std::uint64_t seed);

void write_windows_csv(std::ostream& os, const std::vector<WindowLabCurve>& curves);
void write_autocorr_svg(std::ostream& os, const std::vector<WindowLabCurve>& curves);

void write_curves_csv(std::ostream& os, const std::vector<MseCurve>& curves);
void write_mse_svg(std::ostream& os, const std::vector<MseCurve>& curves);
std::string campaign_json(const CampaignConfig& config, const CampaignResult& result);
std::string theory_comparison_json(const std::vector<TheoryComparisonRow>& rows);

// Writes curves.csv, campaign.json, mse.svg and autocorr.svg into dir (created if missing).
void emit_reports(const CampaignConfig& config, const CampaignResult& result, const std::string& dir);

} // namespace synclab
