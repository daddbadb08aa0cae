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

#include <string>
#include <string_view>

#include "synclab/campaign.hpp"
#include "synclab/scenario.hpp"

namespace synclab {

// JSON documents; unknown keys are rejected with ErrorCode::config.
// Angles may be given as *_rad or *_deg. Gains are a number or [re, im].
Scenario parse_scenario(std::string_view json_text);
CampaignConfig parse_campaign(std::string_view json_text);

Scenario load_scenario_file(const std::string& path);
CampaignConfig load_campaign_file(const std::string& path);

std::string scenario_to_json(const Scenario& scenario, int indent = 2);
std::string campaign_to_json(const CampaignConfig& config, int indent = 2);

// "desk" or "full".
Scenario scenario_preset(std::string_view name);

} // namespace synclab
