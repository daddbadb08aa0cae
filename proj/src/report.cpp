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

#include "synclab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "synclab/config.hpp"
#include "synclab/delay_doppler.hpp"
#include "synclab/random.hpp"

namespace synclab {
namespace {

using nlohmann::json;

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

RVector normalized(RVector v)
{
    const double peak = *std::max_element(v.begin(), v.end());
    if (peak > 0.0)
        for (double& x : v)
            x /= peak;
    return v;
}

// Rotates so the peak lands on bin 0.
RVector centered(const RVector& v)
{
    const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    RVector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        out[k] = v[(k + peak) % v.size()];
    return out;
}

RVector magnitude(const CVector& v)
{
    RVector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        out[k] = std::abs(v[k]);
    return out;
}

WindowLabCurve curve_from_spectrum(std::string label, const RVector& mag)
{
    WindowLabCurve c;
    c.label = std::move(label);
    c.spectrum = normalized(centered(mag));
    CVector as_complex(c.spectrum.begin(), c.spectrum.end());
    c.autocorrelation = normalized(centered(magnitude(circular_autocorrelation(as_complex))));
    c.metrics = mainlobe_metrics(std::span<const double>(c.spectrum));
    return c;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

struct Axes {
    double x0 = 70, y0 = 30, w = 560, h = 340;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void svg_open(std::ostream& os, const Axes& ax, const std::string& title, const std::string& xlabel,
              const std::string& ylabel)
{
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << ax.x0 + ax.w + 180 << "\" height=\""
       << ax.y0 + ax.h + 60 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << ax.x0 + ax.w / 2 << "\" y=\"18\" text-anchor=\"middle\">" << title << "</text>\n";
    os << "<rect x=\"" << ax.x0 << "\" y=\"" << ax.y0 << "\" width=\"" << ax.w << "\" height=\"" << ax.h
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ax.x0 + ax.w / 2 << "\" y=\"" << ax.y0 + ax.h + 40 << "\" text-anchor=\"middle\">"
       << xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << ax.y0 + ax.h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << ax.y0 + ax.h / 2 << ")\">" << ylabel << "</text>\n";
}

void svg_tick_x(std::ostream& os, const Axes& ax, double x, const std::string& label)
{
    os << "<line x1=\"" << ax.px(x) << "\" y1=\"" << ax.y0 + ax.h << "\" x2=\"" << ax.px(x) << "\" y2=\""
       << ax.y0 + ax.h + 5 << "\" stroke=\"black\"/><text x=\"" << ax.px(x) << "\" y=\"" << ax.y0 + ax.h + 18
       << "\" text-anchor=\"middle\">" << label << "</text>\n";
}

void svg_tick_y(std::ostream& os, const Axes& ax, double y, const std::string& label)
{
    os << "<line x1=\"" << ax.x0 - 5 << "\" y1=\"" << ax.py(y) << "\" x2=\"" << ax.x0 << "\" y2=\"" << ax.py(y)
       << "\" stroke=\"black\"/><text x=\"" << ax.x0 - 8 << "\" y=\"" << ax.py(y) + 4
       << "\" text-anchor=\"end\">" << label << "</text>\n";
}

void svg_legend(std::ostream& os, const Axes& ax, std::size_t i, const std::string& label, const char* dash)
{
    const double y = ax.y0 + 10 + 18.0 * static_cast<double>(i);
    const double x = ax.x0 + ax.w + 15;
    os << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 25 << "\" y2=\"" << y << "\" stroke=\""
       << kPalette[i % 7] << "\" stroke-width=\"2\"" << dash << "/><text x=\"" << x + 30 << "\" y=\"" << y + 4
       << "\">" << label << "</text>\n";
}

void svg_polyline(std::ostream& os, const Axes& ax, const std::vector<std::pair<double, double>>& pts,
                  std::size_t color, const char* dash)
{
    if (pts.empty())
        return;
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[color % 7] << "\" stroke-width=\"1.5\"" << dash
       << " points=\"";
    for (const auto& [x, y] : pts)
        os << fmt_short(ax.px(x)) << ',' << fmt_short(ax.py(std::clamp(y, ax.ymin, ax.ymax))) << ' ';
    os << "\"/>\n";
}

json environment_fingerprint(const CampaignResult& result)
{
    return {{"compiler", __VERSION__},
            {"cplusplus", static_cast<long>(__cplusplus)},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"fftw", std::string(fftw_version)},
            {"boost", BOOST_LIB_VERSION},
            {"hardware_threads", std::thread::hardware_concurrency()},
            {"threads_used", result.threads_used},
            {"elapsed_s", result.elapsed_s}};
}

} // namespace

RVector music_window_response(int length, int k_pad, double snr_db, std::uint64_t seed, int snapshots)
{
    if (length < 4 || k_pad < 1 || snapshots < 1)
        throw Error(ErrorCode::invalid_argument, "music_window_response needs length >= 4, k_pad >= 1");
    std::mt19937_64 rng(derive_seed({seed, static_cast<std::uint64_t>(length), 0x6d75736963ULL}));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    const double sigma = std::sqrt(std::pow(10.0, -snr_db / 10.0) / 2.0);
    CMatrix rows(snapshots, length);
    for (int r = 0; r < snapshots; ++r) {
        const cd a = std::polar(1.0, phase(rng));
        for (int t = 0; t < length; ++t)
            rows(r, t) = a + cd(sigma * normal(rng), sigma * normal(rng));
    }
    return music_pseudospectrum(rows, (2 * length) / 3, 1, k_pad * length, true);
}

std::vector<WindowLabCurve> window_lab_curves(int length, int k_pad, double music_snr_db, std::uint64_t seed)
{
    std::vector<WindowLabCurve> out;
    for (WindowKind kind : {WindowKind::rectangular, WindowKind::hamming, WindowKind::hann, WindowKind::blackman})
        out.push_back(curve_from_spectrum(to_string(kind), magnitude(padded_spectrum(make_window(kind, length), k_pad))));
    out.push_back(curve_from_spectrum("music", music_window_response(length, k_pad, music_snr_db, seed)));

    // One-hot has no mainlobe to measure; its metrics stay at zero width.
    WindowLabCurve onehot;
    onehot.label = "onehot";
    onehot.spectrum.assign(static_cast<std::size_t>(k_pad * length), 0.0);
    onehot.spectrum[0] = 1.0;
    onehot.autocorrelation = onehot.spectrum;
    onehot.metrics.peak_sidelobe_db = -std::numeric_limits<double>::infinity();
    out.push_back(std::move(onehot));
    return out;
}

void write_windows_csv(std::ostream& os, const std::vector<WindowLabCurve>& curves)
{
    os << "window,mainlobe_width_bins,null_to_null_bins,peak_sidelobe_db\n";
    for (const auto& c : curves)
        os << c.label << ',' << fmt(c.metrics.mainlobe_width_bins) << ',' << fmt(c.metrics.null_to_null_bins) << ','
           << fmt(c.metrics.peak_sidelobe_db) << '\n';
}

void write_autocorr_svg(std::ostream& os, const std::vector<WindowLabCurve>& curves)
{
    Axes ax;
    const std::size_t n = curves.empty() ? 2 : curves.front().spectrum.size();
    const double span = std::min<double>(static_cast<double>(n) / 2.0, 24.0);
    ax.xmin = -span;
    ax.xmax = span;
    ax.ymin = -80.0;
    ax.ymax = 0.0;
    svg_open(os, ax, "Window spectra (solid) and their autocorrelations (dashed)", "bin offset from peak",
             "magnitude (dB)");
    for (int t = -static_cast<int>(span); t <= static_cast<int>(span); t += 4)
        svg_tick_x(os, ax, t, std::to_string(t));
    for (int d = -80; d <= 0; d += 20)
        svg_tick_y(os, ax, d, std::to_string(d));
    const char* solid = "";
    const char* dashed = " stroke-dasharray=\"5,3\"";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (int which = 0; which < 2; ++which) {
            const RVector& v = which == 0 ? curves[i].spectrum : curves[i].autocorrelation;
            std::vector<std::pair<double, double>> pts;
            const long len = static_cast<long>(v.size());
            for (long k = -static_cast<long>(span); k <= static_cast<long>(span); ++k) {
                const double m = v[static_cast<std::size_t>(wrap_index(k, len))];
                pts.emplace_back(static_cast<double>(k), m > 0.0 ? 20.0 * std::log10(m) : ax.ymin);
            }
            svg_polyline(os, ax, pts, i, which == 0 ? solid : dashed);
        }
        svg_legend(os, ax, i, curves[i].label, solid);
    }
    os << "</svg>\n";
}

void write_curves_csv(std::ostream& os, const std::vector<MseCurve>& curves)
{
    os << "window,snr_db,mse_cells_sq,mse_seconds_sq,trials,ci95\n";
    for (const auto& c : curves)
        for (const auto& p : c.points)
            os << c.window_label << ',' << fmt(p.snr_db) << ',' << fmt(p.mse_cells_sq) << ','
               << fmt(p.mse_seconds_sq) << ',' << p.trials << ',' << fmt(p.ci95) << '\n';
}

void write_mse_svg(std::ostream& os, const std::vector<MseCurve>& curves)
{
    Axes ax;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double xlo = lo;
    double xhi = -lo;
    for (const auto& c : curves)
        for (const auto& p : c.points) {
            if (std::isfinite(p.snr_db)) {
                xlo = std::min(xlo, p.snr_db);
                xhi = std::max(xhi, p.snr_db);
            }
            if (p.mse_cells_sq > 0.0) {
                lo = std::min(lo, p.mse_cells_sq);
                hi = std::max(hi, p.mse_cells_sq);
            }
        }
    if (!std::isfinite(xlo)) {
        xlo = 0.0;
        xhi = 1.0;
    }
    if (xhi <= xlo)
        xhi = xlo + 1.0;
    if (!std::isfinite(lo)) {
        lo = 1e-3;
        hi = 1.0;
    }
    ax.xmin = xlo;
    ax.xmax = xhi;
    ax.ymin = std::floor(std::log10(lo));
    ax.ymax = std::max(std::ceil(std::log10(hi)), ax.ymin + 1.0);
    svg_open(os, ax, "Synchronization MSE", "SNR (dB)", "MSE (cells^2, log scale)");
    const double step = (xhi - xlo) > 20 ? 5.0 : 1.0;
    for (double x = std::ceil(xlo / step) * step; x <= xhi + 1e-9; x += step)
        svg_tick_x(os, ax, x, fmt_short(x));
    for (double d = ax.ymin; d <= ax.ymax + 1e-9; d += 1.0)
        svg_tick_y(os, ax, d, "1e" + std::to_string(static_cast<int>(d)));
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : curves[i].points)
            if (std::isfinite(p.snr_db) && p.mse_cells_sq > 0.0)
                pts.emplace_back(p.snr_db, std::log10(p.mse_cells_sq));
        svg_polyline(os, ax, pts, i, "");
        for (const auto& [x, y] : pts)
            os << "<circle cx=\"" << fmt_short(ax.px(x)) << "\" cy=\"" << fmt_short(ax.py(y)) << "\" r=\"2.5\" fill=\""
               << kPalette[i % 7] << "\"/>\n";
        svg_legend(os, ax, i, curves[i].window_label, "");
    }
    os << "</svg>\n";
}

std::string campaign_json(const CampaignConfig& config, const CampaignResult& result)
{
    json curves = json::array();
    for (const auto& c : result.curves) {
        json points = json::array();
        for (const auto& p : c.points) {
            json hist = json::object();
            for (const auto& [err, count] : p.error_histogram)
                hist[std::to_string(err)] = count;
            points.push_back({{"snr_db", std::isfinite(p.snr_db) ? json(p.snr_db) : json("inf")},
                              {"mse_cells_sq", p.mse_cells_sq},
                              {"mse_seconds_sq", p.mse_seconds_sq},
                              {"trials", p.trials},
                              {"failures", p.failures},
                              {"ci95", p.ci95},
                              {"cfo_mse_cells_sq", p.cfo_mse_cells_sq},
                              {"error_histogram", hist}});
        }
        curves.push_back({{"window", c.window_label}, {"points", points}});
    }
    const json j = {{"config", json::parse(campaign_to_json(config, -1))},
                    {"environment", environment_fingerprint(result)},
                    {"truth",
                     {{"to_drift_cells", result.to_drift_cells},
                      {"to_index", result.to_truth_index},
                      {"cfo_index", result.cfo_truth_index},
                      {"quantization_error_cells", result.quantization_error_cells}}},
                    {"signal_power", result.signal_power},
                    {"total_trials", result.total_trials},
                    {"failed_trials", result.failed_trials},
                    {"curves", curves}};
    return j.dump(2);
}

std::string theory_comparison_json(const std::vector<TheoryComparisonRow>& rows)
{
    json out = json::array();
    for (const auto& r : rows) {
        json row = {{"snr_db", std::isfinite(r.snr_db) ? json(r.snr_db) : json("inf")},
                    {"sigma_bar_sq", r.sigma_bar_sq},
                    {"empirical_mse", r.empirical_mse},
                    {"empirical_ci95", r.empirical_ci95},
                    {"theoretical_mse", r.theoretical_mse},
                    {"ratio", std::isfinite(r.ratio) ? json(r.ratio) : json(nullptr)}};
        if (!r.error.empty())
            row["error"] = r.error;
        out.push_back(row);
    }
    return out.dump(2);
}

void emit_reports(const CampaignConfig& config, const CampaignResult& result, const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::io, "cannot create " + dir + ": " + ec.message());
    auto open = [&](const char* name) {
        std::ofstream f(fs::path(dir) / name, std::ios::binary);
        if (!f)
            throw Error(ErrorCode::io, "cannot write " + (fs::path(dir) / name).string());
        return f;
    };
    {
        auto f = open("curves.csv");
        write_curves_csv(f, result.curves);
    }
    {
        auto f = open("campaign.json");
        f << campaign_json(config, result) << '\n';
    }
    {
        auto f = open("mse.svg");
        write_mse_svg(f, result.curves);
    }
    {
        auto f = open("autocorr.svg");
        const auto& o = config.scenario.ofdm;
        write_autocorr_svg(f, window_lab_curves(o.n_subcarriers, o.k_pad, 0.0, config.master_seed));
    }
}

} // namespace synclab
