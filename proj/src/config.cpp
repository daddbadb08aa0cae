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

#include "synclab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace synclab {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
    throw Error(ErrorCode::config, where + ": " + what);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!j.is_object())
        fail(where, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key()))
            fail(where, "unknown key '" + it.key() + "'");
}

double number(const json& j, const std::string& where)
{
    if (!j.is_number())
        fail(where, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& where)
{
    if (!j.is_number_integer())
        fail(where, "expected an integer");
    return j.get<int>();
}

cd complex_value(const json& j, const std::string& where)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(where, "expected a number or [re, im]");
}

json complex_json(cd v) { return json::array({v.real(), v.imag()}); }

void read_number(const json& j, const char* key, double& out, const std::string& where)
{
    if (j.contains(key))
        out = number(j.at(key), where + "." + key);
}

void read_int(const json& j, const char* key, int& out, const std::string& where)
{
    if (j.contains(key))
        out = integer(j.at(key), where + "." + key);
}

// Accepts <base>_rad or <base>_deg, not both.
void read_angle(const json& j, const std::string& base, double& out, const std::string& where)
{
    const std::string rad = base + "_rad";
    const std::string deg = base + "_deg";
    if (j.contains(rad) && j.contains(deg))
        fail(where, "both " + rad + " and " + deg + " given");
    if (j.contains(rad))
        out = number(j.at(rad), where + "." + rad);
    if (j.contains(deg))
        out = number(j.at(deg), where + "." + deg) * kPi / 180.0;
}

void read_ofdm(const json& j, OfdmParams& o)
{
    const std::string w = "scenario.ofdm";
    check_keys(j, w, {"carrier_hz", "subcarrier_spacing_hz", "n_subcarriers", "n_cp", "n_symbols", "k_pad"});
    read_number(j, "carrier_hz", o.carrier_hz, w);
    read_number(j, "subcarrier_spacing_hz", o.subcarrier_spacing_hz, w);
    read_int(j, "n_subcarriers", o.n_subcarriers, w);
    read_int(j, "n_cp", o.n_cp, w);
    read_int(j, "n_symbols", o.n_symbols, w);
    read_int(j, "k_pad", o.k_pad, w);
}

void read_array(const json& j, ArrayParams& a, double carrier_hz)
{
    const std::string w = "scenario.array";
    check_keys(j, w, {"n_rx", "n_tx", "spacing_m", "wavelength_m", "precoder"});
    const int old_tx = a.n_tx;
    const ArrayParams defaults = ArrayParams::uniform(j.value("n_rx", a.n_rx), j.value("n_tx", a.n_tx), carrier_hz);
    read_int(j, "n_rx", a.n_rx, w);
    read_int(j, "n_tx", a.n_tx, w);
    if (a.n_tx != old_tx)
        a.precoder = defaults.precoder;
    read_number(j, "spacing_m", a.spacing_m, w);
    read_number(j, "wavelength_m", a.wavelength_m, w);
    if (!j.contains("precoder"))
        return;
    const json& p = j.at("precoder");
    if (p.is_string()) {
        if (p.get<std::string>() != "uniform")
            fail(w + ".precoder", "unknown precoder '" + p.get<std::string>() + "'");
        a.precoder = ArrayParams::uniform(a.n_rx, a.n_tx, carrier_hz).precoder;
    } else if (p.is_object()) {
        check_keys(p, w + ".precoder", {"steer_aod_rad", "steer_aod_deg"});
        double aod = 0.0;
        read_angle(p, "steer_aod", aod, w + ".precoder");
        a.precoder = steering_precoder(a, aod);
    } else if (p.is_array()) {
        a.precoder.clear();
        for (std::size_t i = 0; i < p.size(); ++i)
            a.precoder.push_back(complex_value(p[i], w + ".precoder[" + std::to_string(i) + "]"));
    } else {
        fail(w + ".precoder", "expected \"uniform\", {\"steer_aod_rad\": x} or a list");
    }
}

PathParams read_path(const json& j, const std::string& w)
{
    check_keys(j, w, {"gain", "delay_s", "velocity_mps", "aoa_rad", "aoa_deg", "aod_rad", "aod_deg"});
    PathParams p;
    if (j.contains("gain"))
        p.gain = complex_value(j.at("gain"), w + ".gain");
    if (!j.contains("delay_s"))
        fail(w, "missing delay_s");
    read_number(j, "delay_s", p.delay_s, w);
    read_number(j, "velocity_mps", p.velocity_mps, w);
    read_angle(j, "aoa", p.aoa_rad, w);
    read_angle(j, "aod", p.aod_rad, w);
    return p;
}

void read_offsets(const json& j, OffsetState& o)
{
    const std::string w = "scenario.offsets";
    check_keys(j, w, {"cfo_hz", "to_s", "cfo_drift_hz", "to_drift_s"});
    read_number(j, "cfo_hz", o.cfo_hz, w);
    read_number(j, "to_s", o.to_s, w);
    read_number(j, "cfo_drift_hz", o.cfo_drift_hz, w);
    read_number(j, "to_drift_s", o.to_drift_s, w);
}

Scenario scenario_from(const json& j)
{
    check_keys(j, "scenario",
               {"preset", "ofdm", "array", "paths", "offsets", "noise_variance", "antenna_index", "seed"});
    Scenario s;
    if (j.contains("preset")) {
        if (!j.at("preset").is_string())
            fail("scenario.preset", "expected a string");
        s = scenario_preset(j.at("preset").get<std::string>());
    } else {
        s.array = ArrayParams::uniform(s.array.n_rx, s.array.n_tx, s.ofdm.carrier_hz);
    }
    if (j.contains("ofdm"))
        read_ofdm(j.at("ofdm"), s.ofdm);
    if (j.contains("array"))
        read_array(j.at("array"), s.array, s.ofdm.carrier_hz);
    if (j.contains("paths")) {
        const json& p = j.at("paths");
        if (!p.is_array())
            fail("scenario.paths", "expected a list");
        s.paths.clear();
        for (std::size_t i = 0; i < p.size(); ++i)
            s.paths.push_back(read_path(p[i], "scenario.paths[" + std::to_string(i) + "]"));
    }
    if (j.contains("offsets"))
        read_offsets(j.at("offsets"), s.offsets);
    read_number(j, "noise_variance", s.noise_variance, "scenario");
    read_int(j, "antenna_index", s.antenna_index, "scenario");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            fail("scenario.seed", "expected a non-negative integer");
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    require_valid(s);
    return s;
}

json scenario_json(const Scenario& s)
{
    json paths = json::array();
    for (const auto& p : s.paths)
        paths.push_back({{"gain", complex_json(p.gain)},
                         {"delay_s", p.delay_s},
                         {"velocity_mps", p.velocity_mps},
                         {"aoa_rad", p.aoa_rad},
                         {"aod_rad", p.aod_rad}});
    json precoder = json::array();
    for (const auto& w : s.array.precoder)
        precoder.push_back(complex_json(w));
    return {{"ofdm",
             {{"carrier_hz", s.ofdm.carrier_hz},
              {"subcarrier_spacing_hz", s.ofdm.subcarrier_spacing_hz},
              {"n_subcarriers", s.ofdm.n_subcarriers},
              {"n_cp", s.ofdm.n_cp},
              {"n_symbols", s.ofdm.n_symbols},
              {"k_pad", s.ofdm.k_pad}}},
            {"array",
             {{"n_rx", s.array.n_rx},
              {"n_tx", s.array.n_tx},
              {"spacing_m", s.array.spacing_m},
              {"wavelength_m", s.array.wavelength_m},
              {"precoder", precoder}}},
            {"paths", paths},
            {"offsets",
             {{"cfo_hz", s.offsets.cfo_hz},
              {"to_s", s.offsets.to_s},
              {"cfo_drift_hz", s.offsets.cfo_drift_hz},
              {"to_drift_s", s.offsets.to_drift_s}}},
            {"noise_variance", s.noise_variance},
            {"antenna_index", s.antenna_index},
            {"seed", s.seed}};
}

json snr_json(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

CampaignConfig campaign_from(const json& j)
{
    check_keys(j, "campaign",
               {"preset", "scenario", "snr_grid_db", "windows", "trials_per_point", "output_dir", "master_seed",
                "threads", "music"});
    CampaignConfig c;
    if (j.contains("preset")) {
        if (j.at("preset") != "desk" && j.at("preset") != "full")
            fail("campaign.preset", "expected \"desk\" or \"full\"");
        c = desk_campaign();
        c.scenario = scenario_preset(j.at("preset").get<std::string>());
    }
    if (j.contains("scenario"))
        c.scenario = scenario_from(j.at("scenario"));
    if (j.contains("snr_grid_db")) {
        const json& g = j.at("snr_grid_db");
        if (!g.is_array())
            fail("campaign.snr_grid_db", "expected a list");
        c.snr_grid_db.clear();
        for (const auto& v : g) {
            if (v == "inf")
                c.snr_grid_db.push_back(std::numeric_limits<double>::infinity());
            else
                c.snr_grid_db.push_back(number(v, "campaign.snr_grid_db"));
        }
    }
    if (j.contains("windows")) {
        const json& w = j.at("windows");
        if (!w.is_array())
            fail("campaign.windows", "expected a list");
        c.windows.clear();
        for (const auto& v : w) {
            if (!v.is_string())
                fail("campaign.windows", "expected window names");
            try {
                c.windows.push_back(parse_window_choice(v.get<std::string>()));
            } catch (const Error& e) {
                fail("campaign.windows", e.what());
            }
        }
    }
    read_int(j, "trials_per_point", c.trials_per_point, "campaign");
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string())
            fail("campaign.output_dir", "expected a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("master_seed")) {
        if (!j.at("master_seed").is_number_unsigned())
            fail("campaign.master_seed", "expected a non-negative integer");
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
    }
    read_int(j, "threads", c.threads, "campaign");
    if (j.contains("music")) {
        const json& m = j.at("music");
        check_keys(m, "campaign.music",
                   {"model_order", "doppler_model_order", "delay_subarray", "doppler_subarray", "forward_backward", "scale"});
        read_int(m, "model_order", c.music.model_order, "campaign.music");
        read_int(m, "doppler_model_order", c.music.doppler_model_order, "campaign.music");
        read_int(m, "delay_subarray", c.music.smoothing.delay_length, "campaign.music");
        read_int(m, "doppler_subarray", c.music.smoothing.doppler_length, "campaign.music");
        if (m.contains("forward_backward")) {
            if (!m.at("forward_backward").is_boolean())
                fail("campaign.music.forward_backward", "expected a boolean");
            c.music.smoothing.forward_backward = m.at("forward_backward").get<bool>();
        }
        if (m.contains("scale")) {
            if (!m.at("scale").is_string())
                fail("campaign.music.scale", "expected \"linear\" or \"db_above_floor\"");
            try {
                c.music.smoothing.scale = parse_pseudospectrum_scale(m.at("scale").get<std::string>());
            } catch (const Error& e) {
                fail("campaign.music.scale", e.what());
            }
        }
    }
    if (c.trials_per_point < 1)
        fail("campaign.trials_per_point", "must be >= 1");
    if (c.snr_grid_db.empty())
        fail("campaign.snr_grid_db", "must not be empty");
    if (c.windows.empty())
        fail("campaign.windows", "must not be empty");
    if (c.threads < 0)
        fail("campaign.threads", "must be >= 0");
    require_valid(c.scenario);
    return c;
}

json parse_text(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config, std::string("malformed JSON: ") + e.what());
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

Scenario scenario_preset(std::string_view name)
{
    if (name == "desk")
        return desk_scenario();
    if (name == "full")
        return full_scenario();
    throw Error(ErrorCode::config, "unknown preset '" + std::string(name) + "'");
}

Scenario parse_scenario(std::string_view json_text)
{
    try {
        return scenario_from(parse_text(json_text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config, e.what());
    }
}

CampaignConfig parse_campaign(std::string_view json_text)
{
    try {
        return campaign_from(parse_text(json_text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config, e.what());
    }
}

Scenario load_scenario_file(const std::string& path) { return parse_scenario(read_file(path)); }

CampaignConfig load_campaign_file(const std::string& path) { return parse_campaign(read_file(path)); }

std::string scenario_to_json(const Scenario& scenario, int indent) { return scenario_json(scenario).dump(indent); }

std::string campaign_to_json(const CampaignConfig& c, int indent)
{
    json snr = json::array();
    for (double v : c.snr_grid_db)
        snr.push_back(snr_json(v));
    json windows = json::array();
    for (const auto& w : c.windows)
        windows.push_back(w.label);
    const json j = {{"scenario", scenario_json(c.scenario)},
                    {"snr_grid_db", snr},
                    {"windows", windows},
                    {"trials_per_point", c.trials_per_point},
                    {"output_dir", c.output_dir},
                    {"master_seed", c.master_seed},
                    {"threads", c.threads},
                    {"music",
                     {{"model_order", c.music.model_order},
                      {"doppler_model_order", c.music.doppler_model_order},
                      {"delay_subarray", c.music.smoothing.delay_length},
                      {"doppler_subarray", c.music.smoothing.doppler_length},
                      {"forward_backward", c.music.smoothing.forward_backward},
                      {"scale", to_string(c.music.smoothing.scale)}}}};
    return j.dump(indent);
}

} // namespace synclab
