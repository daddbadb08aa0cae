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

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "synclab/campaign.hpp"
#include "synclab/channel.hpp"
#include "synclab/config.hpp"
#include "synclab/delay_doppler.hpp"
#include "synclab/report.hpp"
#include "synclab/sync.hpp"
#include "synclab/theory.hpp"
#include "synclab/window.hpp"

namespace {

using namespace synclab;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitTrialFailures = 2;
constexpr int kExitRuntime = 3;

RVector read_spectrum_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io, "cannot open " + path);
    RVector out;
    std::string token;
    while (in >> token) {
        for (char& c : token)
            if (c == ',' || c == '[' || c == ']')
                c = ' ';
        std::istringstream ss(token);
        double v = 0.0;
        while (ss >> v)
            out.push_back(v);
    }
    return out;
}

// Expected correlation row for a window: its spectrum's autocorrelation, peak 1, centred on round(target).
RVector spectrum_from_window(WindowKind kind, int n, int k_pad, double target)
{
    if (n % k_pad != 0)
        throw Error(ErrorCode::invalid_argument, "kn_c must be a multiple of k_pad");
    const CVector spec = padded_spectrum(make_window(kind, n / k_pad), k_pad);
    const CVector ac = circular_autocorrelation(spec);
    double peak = 0.0;
    for (const cd& v : ac)
        peak = std::max(peak, std::abs(v));
    const long shift = std::lround(target);
    RVector s(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q)
        s[static_cast<std::size_t>(q)] = std::abs(ac[static_cast<std::size_t>(wrap_index(q - shift, n))]) / peak;
    return s;
}

json estimate_json(const SyncEstimate& e)
{
    json j = {{"row_shift", e.row_shift},
              {"col_shift", e.col_shift},
              {"cfo_drift_hz", e.cfo_drift_hz},
              {"to_drift_s", e.to_drift_s},
              {"peak_magnitude", e.peak_magnitude},
              {"peak_to_median_ratio", e.peak_to_median_ratio}};
    if (e.refined_row_shift)
        j["refined_row_shift"] = *e.refined_row_shift;
    if (e.refined_col_shift)
        j["refined_col_shift"] = *e.refined_col_shift;
    return j;
}

DelayDopplerMap build_map(const SnapshotMatrix& snap, int k_pad, const std::string& window, int music_order)
{
    OfdmParams o;
    o.n_symbols = snap.n_symbols();
    o.n_subcarriers = snap.n_subcarriers();
    o.k_pad = k_pad;
    GridSpec grid = derive_grids(o);
    const WindowChoice choice = parse_window_choice(window);
    if (choice.method == MapMethod::music)
        return music_map(snap, grid, music_order);
    return transform_fft2d(snap, make_window(choice.kind, o.n_symbols), make_window(choice.kind, o.n_subcarriers),
                           grid);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sync-lab: CFO/TO synchronization from delay-Doppler fingerprint spectra"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Monte Carlo MSE campaign over an SNR and window grid");
    std::string run_config;
    std::string run_out;
    std::uint64_t run_seed = 0;
    int run_trials = 0;
    int run_threads = -1;
    run->add_option("--config", run_config, "campaign JSON file")->required();
    run->add_option("--out", run_out, "output directory (overrides output_dir)");
    auto* seed_opt = run->add_option("--seed", run_seed, "master seed override");
    run->add_option("--trials", run_trials, "trials per SNR point override")->check(CLI::PositiveNumber);
    run->add_option("--threads", run_threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

    // compare
    auto* compare = app.add_subcommand("compare", "empirical vs theoretical MSE per SNR point");
    std::string cmp_config;
    int cmp_trials = 0;
    compare->add_option("--config", cmp_config, "campaign JSON file")->required();
    compare->add_option("--trials", cmp_trials, "trials per SNR point override")->check(CLI::PositiveNumber);

    // theory
    auto* theory = app.add_subcommand("theory", "per-index peak probabilities and MSE for a mean spectrum");
    int th_n = 16;
    double th_var = 0.25;
    double th_target = 0.0;
    int th_k = 4;
    std::string th_source = "onehot";
    theory->add_option("--kn-c", th_n, "spectrum length K*N_c")->check(CLI::Range(2, 4096));
    theory->add_option("--sigma-bar-sq", th_var, "noise variance of each spectrum entry")->check(CLI::PositiveNumber);
    theory->add_option("--target", th_target, "drift in cells (may be fractional)");
    theory->add_option("--k-pad", th_k, "zero padding ratio for from-window sources")->check(CLI::PositiveNumber);
    theory->add_option("--spectrum", th_source, "onehot | from-window:<kind> | from-file:<path>");

    // windows
    auto* windows = app.add_subcommand("windows", "window mainlobe metrics (CSV) and autocorrelation overlay (SVG)");
    int win_len = 64;
    int win_k = 4;
    double win_snr = 0.0;
    std::uint64_t win_seed = 1;
    std::string win_csv;
    std::string win_svg;
    windows->add_option("--length", win_len, "window length")->check(CLI::Range(4, 1 << 16));
    windows->add_option("--k-pad", win_k, "zero padding ratio")->check(CLI::PositiveNumber);
    windows->add_option("--music-snr-db", win_snr, "SNR of the MUSIC tone experiment");
    windows->add_option("--seed", win_seed, "seed of the MUSIC tone experiment");
    windows->add_option("--csv", win_csv, "CSV path (default stdout)");
    windows->add_option("--svg", win_svg, "SVG path");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "estimate CFO/TO drift between two frames");
    std::string est_ref;
    std::string est_new;
    std::string est_config;
    std::string est_window = "rectangular";
    int est_k = 4;
    int est_order = 4;
    bool est_refine = false;
    estimate->add_option("--ref", est_ref, "reference frame snapshot dump");
    estimate->add_option("--new", est_new, "drifted frame snapshot dump");
    estimate->add_option("--config", est_config, "scenario JSON; synthesizes both frames instead of reading dumps");
    estimate->add_option("--window", est_window, "rectangular | hamming | hann | blackman | music");
    estimate->add_option("--k-pad", est_k, "zero padding ratio for dumps")->check(CLI::PositiveNumber);
    estimate->add_option("--music-order", est_order, "MUSIC model order for dumps")->check(CLI::PositiveNumber);
    estimate->add_flag("--refine", est_refine, "parabolic sub-grid refinement");

    // synth
    auto* synth = app.add_subcommand("synth", "write the snapshot dump of one frame");
    std::string syn_config;
    std::string syn_out;
    int syn_frame = 0;
    synth->add_option("--config", syn_config, "scenario JSON")->required();
    synth->add_option("--frame", syn_frame, "frame index; offsets are advanced by the drift per frame")
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--out", syn_out, "output file")->required();

    // map
    auto* map = app.add_subcommand("map", "delay-Doppler map of a snapshot dump");
    std::string map_in;
    std::string map_out;
    std::string map_window = "rectangular";
    std::string map_cut;
    int map_k = 4;
    int map_order = 4;
    map->add_option("--in", map_in, "snapshot dump")->required();
    map->add_option("--out", map_out, "map dump path");
    map->add_option("--window", map_window, "rectangular | hamming | hann | blackman | music");
    map->add_option("--k-pad", map_k, "zero padding ratio")->check(CLI::PositiveNumber);
    map->add_option("--music-order", map_order, "MUSIC model order")->check(CLI::PositiveNumber);
    map->add_option("--cut", map_cut, "row:<i> or col:<j>; writes a CSV cut to stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            CampaignConfig c = load_campaign_file(run_config);
            if (*seed_opt)
                c.master_seed = run_seed;
            if (run_trials > 0)
                c.trials_per_point = run_trials;
            if (run_threads >= 0)
                c.threads = run_threads;
            if (!run_out.empty())
                c.output_dir = run_out;
            try {
                const CampaignResult r = run_campaign(c);
                emit_reports(c, r, c.output_dir);
                std::cerr << "wrote " << c.output_dir << " (" << r.total_trials << " trials, " << r.threads_used
                          << " threads, " << r.elapsed_s << " s)\n";
            } catch (const Error& e) {
                if (e.code() == ErrorCode::campaign_aborted) {
                    std::cerr << "campaign aborted: " << e.what() << '\n';
                    return kExitTrialFailures;
                }
                throw;
            }
        } else if (*compare) {
            CampaignConfig c = load_campaign_file(cmp_config);
            if (cmp_trials > 0)
                c.trials_per_point = cmp_trials;
            std::cout << theory_comparison_json(run_theory_comparison(c)) << '\n';
        } else if (*theory) {
            RVector s;
            if (th_source == "onehot") {
                s = optimal_spectrum(th_target, th_n);
            } else if (th_source.rfind("from-window:", 0) == 0) {
                s = spectrum_from_window(parse_window_kind(th_source.substr(12)), th_n, th_k, th_target);
            } else if (th_source.rfind("from-file:", 0) == 0) {
                s = read_spectrum_file(th_source.substr(10));
            } else {
                throw Error(ErrorCode::config, "unknown spectrum source '" + th_source + "'");
            }
            const MseResult r = mse_theoretical(MeanSpectrum{s, th_var, th_target});
            json out = {{"kn_c", s.size()},
                        {"sigma_bar_sq", th_var},
                        {"target", th_target},
                        {"spectrum", s},
                        {"probabilities", r.probabilities},
                        {"mse", r.mse}};
            if (th_source == "onehot")
                out["mse_asymptotic_optimal"] = mse_asymptotic_optimal(th_n, th_var, th_target);
            std::cout << out.dump(2) << '\n';
        } else if (*windows) {
            const auto curves = window_lab_curves(win_len, win_k, win_snr, win_seed);
            if (win_csv.empty()) {
                write_windows_csv(std::cout, curves);
            } else {
                std::ofstream f(win_csv);
                if (!f)
                    throw Error(ErrorCode::io, "cannot write " + win_csv);
                write_windows_csv(f, curves);
            }
            if (!win_svg.empty()) {
                std::ofstream f(win_svg);
                if (!f)
                    throw Error(ErrorCode::io, "cannot write " + win_svg);
                write_autocorr_svg(f, curves);
            }
        } else if (*estimate) {
            SnapshotMatrix ref;
            SnapshotMatrix next;
            OfdmParams grid_params;
            grid_params.k_pad = est_k;
            int order = est_order;
            MusicSettings music;
            if (!est_config.empty()) {
                const Scenario s = load_scenario_file(est_config);
                Scenario s1 = s;
                s1.offsets = s.offsets.advanced();
                const int nc = s.ofdm.n_subcarriers;
                ref = synth_snapshot(s, DataSymbols::qpsk(nc, s.seed, 0), 0);
                next = synth_snapshot(s1, DataSymbols::qpsk(nc, s.seed, 1), 1);
                grid_params.k_pad = s.ofdm.k_pad;
                order = static_cast<int>(s.paths.size());
                std::set<double> dopplers;
                for (const auto& p : s.paths)
                    dopplers.insert(p.velocity_mps);
                music.doppler_model_order = static_cast<int>(dopplers.size());
            } else if (!est_ref.empty() && !est_new.empty()) {
                ref = read_snapshot_file(est_ref);
                next = read_snapshot_file(est_new);
            } else {
                throw Error(ErrorCode::config, "estimate needs --ref and --new, or --config");
            }
            grid_params.n_symbols = ref.n_symbols();
            grid_params.n_subcarriers = ref.n_subcarriers();
            EstimateOptions opts;
            opts.subgrid_refinement = est_refine;
            const SyncEstimate e =
                estimate_pair(ref, next, derive_grids(grid_params), parse_window_choice(est_window), music, order, opts);
            std::cout << estimate_json(e).dump(2) << '\n';
        } else if (*synth) {
            Scenario s = load_scenario_file(syn_config);
            for (int f = 0; f < syn_frame; ++f)
                s.offsets = s.offsets.advanced();
            write_snapshot_file(syn_out, synth_snapshot(s, DataSymbols::qpsk(s.ofdm.n_subcarriers, s.seed, syn_frame),
                                                        syn_frame));
        } else if (*map) {
            const DelayDopplerMap m = build_map(read_snapshot_file(map_in), map_k, map_window, map_order);
            if (!map_out.empty()) {
                std::ofstream f(map_out, std::ios::binary);
                if (!f)
                    throw Error(ErrorCode::io, "cannot write " + map_out);
                write_map(f, m);
            }
            if (!map_cut.empty()) {
                const auto colon = map_cut.find(':');
                const std::string axis = map_cut.substr(0, colon);
                if (colon == std::string::npos || (axis != "row" && axis != "col"))
                    throw Error(ErrorCode::config, "--cut expects row:<i> or col:<j>");
                write_cut_csv(std::cout, m, axis == "row" ? CutAxis::row : CutAxis::column,
                              std::stoi(map_cut.substr(colon + 1)));
            }
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return e.code() == ErrorCode::config || e.code() == ErrorCode::io ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
