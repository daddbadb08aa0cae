# SPDX-License-Identifier: Apache-2.0
#
# sync-lab: fingerprint-spectrum CFO/TO synchronization toolkit for OFDM sensing
# Copyright (C) 2026 The sync-lab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Python bindings for the sync-lab core library."""

import json as _json

from . import _core
from ._core import (
    SyncLabError,
    estimate,
    mainlobe_metrics,
    make_window,
    mse_asymptotic_optimal,
    music_map,
    music_window_response,
    optimal_spectrum,
    padded_spectrum,
    peak_probabilities,
    transform_fft2d,
)

__all__ = [
    "SyncLabError",
    "estimate",
    "mainlobe_metrics",
    "make_window",
    "mse_asymptotic_optimal",
    "mse_theoretical",
    "music_map",
    "music_window_response",
    "noise_variance_for_snr",
    "optimal_spectrum",
    "padded_spectrum",
    "peak_probabilities",
    "run_campaign",
    "scenario",
    "synth_snapshot",
    "transform_fft2d",
    "validate_scenario",
]


def _text(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def scenario(preset="desk", **overrides):
    """Return a scenario dict, starting from a preset and applying top-level overrides."""
    doc = _json.loads(_core.scenario_preset_json(preset))
    doc.update(overrides)
    return _json.loads(_core.normalize_scenario_json(_json.dumps(doc)))


def validate_scenario(doc):
    return _core.validate_scenario(_text(doc))


def synth_snapshot(doc, frame_id=0, noise_variance=None, exact=False):
    nv = -1.0 if noise_variance is None else float(noise_variance)
    return _core.synth_snapshot(_text(doc), frame_id, nv, exact)


def noise_variance_for_snr(doc, snr_db):
    return _core.noise_variance_for_snr(_text(doc), snr_db)


def mse_theoretical(s, sigma_bar_sq, target):
    return _core.mse_theoretical(list(map(float, s)), sigma_bar_sq, target)


def run_campaign(config, out_dir=""):
    return _core.run_campaign(_text(config), out_dir)
