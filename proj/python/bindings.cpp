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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "synclab/campaign.hpp"
#include "synclab/channel.hpp"
#include "synclab/config.hpp"
#include "synclab/delay_doppler.hpp"
#include "synclab/report.hpp"
#include "synclab/sync.hpp"
#include "synclab/theory.hpp"
#include "synclab/window.hpp"

namespace py = pybind11;
using namespace synclab;

namespace {

SnapshotMatrix as_snapshot(const CMatrix& data, int frame_id)
{
    SnapshotMatrix s;
    s.data = data;
    s.frame_id = frame_id;
    return s;
}

GridSpec grid_for(const CMatrix& data, int k_pad)
{
    OfdmParams o;
    o.n_symbols = static_cast<int>(data.rows());
    o.n_subcarriers = static_cast<int>(data.cols());
    o.k_pad = k_pad;
    return derive_grids(o);
}

py::dict estimate_dict(const SyncEstimate& e)
{
    py::dict d;
    d["row_shift"] = e.row_shift;
    d["col_shift"] = e.col_shift;
    d["cfo_drift_hz"] = e.cfo_drift_hz;
    d["to_drift_s"] = e.to_drift_s;
    d["peak_magnitude"] = e.peak_magnitude;
    d["peak_to_median_ratio"] = e.peak_to_median_ratio;
    if (e.refined_row_shift)
        d["refined_row_shift"] = *e.refined_row_shift;
    if (e.refined_col_shift)
        d["refined_col_shift"] = *e.refined_col_shift;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "CFO/TO synchronization from delay-Doppler fingerprint spectra";

    // Leaked on purpose: the type object must outlive the interpreter's module teardown.
    static PyObject* sync_error = PyErr_NewException("synclab._core.SyncLabError", PyExc_RuntimeError, nullptr);
    m.attr("SyncLabError") = py::handle(sync_error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(sync_error)(e.what());
            exc.attr("code") = to_string(e.code());
            PyErr_SetObject(sync_error, exc.ptr());
        }
    });

    m.def("scenario_preset_json", [](const std::string& name) { return scenario_to_json(scenario_preset(name)); },
          py::arg("name"));
    m.def("normalize_scenario_json", [](const std::string& text) { return scenario_to_json(parse_scenario(text)); },
          py::arg("text"), "Parse, validate and re-emit a scenario document with all fields filled in.");
    m.def(
        "validate_scenario",
        [](const std::string& text) {
            // parse_scenario already rejects invalid scenarios; this reports every violation instead.
            Scenario s = desk_scenario();
            try {
                s = parse_scenario(text);
            } catch (const Error& e) {
                return std::vector<std::pair<std::string, std::string>>{{"config", e.what()}};
            }
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& v : validate(s))
                out.emplace_back(v.code, v.message);
            return out;
        },
        py::arg("text"));

    m.def(
        "synth_snapshot",
        [](const std::string& scenario_json, int frame_id, double noise_variance, bool exact) {
            Scenario s = parse_scenario(scenario_json);
            for (int f = 0; f < frame_id; ++f)
                s.offsets = s.offsets.advanced();
            if (noise_variance >= 0.0)
                s.noise_variance = noise_variance;
            return synth_snapshot(s, DataSymbols::qpsk(s.ofdm.n_subcarriers, s.seed, frame_id), frame_id,
                                  exact ? SynthesisMode::exact : SynthesisMode::approximate)
                .data;
        },
        py::arg("scenario_json"), py::arg("frame_id") = 0, py::arg("noise_variance") = -1.0,
        py::arg("exact") = false);
    m.def(
        "noise_variance_for_snr",
        [](const std::string& scenario_json, double snr_db) {
            return noise_variance_for_snr(parse_scenario(scenario_json), snr_db);
        },
        py::arg("scenario_json"), py::arg("snr_db"));

    m.def(
        "make_window", [](const std::string& kind, int length) { return make_window(parse_window_kind(kind), length).taps; },
        py::arg("kind"), py::arg("length"));
    m.def(
        "padded_spectrum",
        [](const CVector& taps, int k_pad) { return padded_spectrum(custom_window(taps), k_pad); }, py::arg("taps"),
        py::arg("k_pad"));
    m.def(
        "mainlobe_metrics",
        [](const RVector& magnitude) {
            const SpectrumMetrics s = mainlobe_metrics(std::span<const double>(magnitude));
            py::dict d;
            d["mainlobe_width_bins"] = s.mainlobe_width_bins;
            d["null_to_null_bins"] = s.null_to_null_bins;
            d["peak_sidelobe_db"] = s.peak_sidelobe_db;
            d["peak_index"] = s.peak_index;
            return d;
        },
        py::arg("magnitude"));
    m.def("music_window_response", &music_window_response, py::arg("length"), py::arg("k_pad"), py::arg("snr_db"),
          py::arg("seed") = 1, py::arg("snapshots") = 32);

    m.def(
        "transform_fft2d",
        [](const CMatrix& snapshot, const std::string& window, int k_pad) {
            const WindowKind kind = parse_window_kind(window);
            return transform_fft2d(as_snapshot(snapshot, 0), make_window(kind, static_cast<int>(snapshot.rows())),
                                   make_window(kind, static_cast<int>(snapshot.cols())), grid_for(snapshot, k_pad))
                .data;
        },
        py::arg("snapshot"), py::arg("window") = "rectangular", py::arg("k_pad") = 4);
    m.def(
        "music_map",
        [](const CMatrix& snapshot, int model_order, int k_pad, int doppler_model_order, const std::string& scale) {
            SubarrayConfig sc;
            sc.doppler_model_order = doppler_model_order;
            sc.scale = parse_pseudospectrum_scale(scale);
            return music_map(as_snapshot(snapshot, 0), grid_for(snapshot, k_pad), model_order, sc).data;
        },
        py::arg("snapshot"), py::arg("model_order"), py::arg("k_pad") = 4, py::arg("doppler_model_order") = 0,
        py::arg("scale") = "linear");
    m.def(
        "estimate",
        [](const CMatrix& ref, const CMatrix& next, const std::string& window, int k_pad, int music_order,
           bool refine) {
            MusicSettings music;
            EstimateOptions opts;
            opts.subgrid_refinement = refine;
            return estimate_dict(estimate_pair(as_snapshot(ref, 0), as_snapshot(next, 1), grid_for(ref, k_pad),
                                               parse_window_choice(window), music, music_order, opts));
        },
        py::arg("ref"), py::arg("new"), py::arg("window") = "rectangular", py::arg("k_pad") = 4,
        py::arg("music_order") = 4, py::arg("refine") = false);

    m.def(
        "peak_probabilities",
        [](const RVector& s, double sigma_bar_sq) { return peak_probabilities(MeanSpectrum{s, sigma_bar_sq, 0.0}); },
        py::arg("s"), py::arg("sigma_bar_sq"));
    m.def(
        "mse_theoretical",
        [](const RVector& s, double sigma_bar_sq, double target) {
            return mse_theoretical(MeanSpectrum{s, sigma_bar_sq, target}).mse;
        },
        py::arg("s"), py::arg("sigma_bar_sq"), py::arg("target"));
    m.def("optimal_spectrum", &optimal_spectrum, py::arg("target"), py::arg("n"));
    m.def("mse_asymptotic_optimal", &mse_asymptotic_optimal, py::arg("n"), py::arg("sigma_bar_sq"),
          py::arg("target"));

    m.def(
        "run_campaign",
        [](const std::string& config_json, const std::string& out_dir) {
            const CampaignConfig c = parse_campaign(config_json);
            CampaignResult r;
            {
                py::gil_scoped_release release;
                r = run_campaign(c);
                if (!out_dir.empty())
                    emit_reports(c, r, out_dir);
            }
            py::list curves;
            for (const auto& curve : r.curves) {
                py::list points;
                for (const auto& p : curve.points) {
                    py::dict d;
                    d["snr_db"] = p.snr_db;
                    d["mse_cells_sq"] = p.mse_cells_sq;
                    d["mse_seconds_sq"] = p.mse_seconds_sq;
                    d["trials"] = p.trials;
                    d["ci95"] = p.ci95;
                    d["failures"] = p.failures;
                    points.append(d);
                }
                py::dict cd;
                cd["window"] = curve.window_label;
                cd["points"] = points;
                curves.append(cd);
            }
            return curves;
        },
        py::arg("config_json"), py::arg("out_dir") = "");
}
