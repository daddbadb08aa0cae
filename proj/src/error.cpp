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

#include "synclab/common.hpp"

namespace synclab {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::non_unit_symbol: return "non-unit-symbol";
    case ErrorCode::zero_norm: return "zero-norm";
    case ErrorCode::ambiguous_peak: return "ambiguous-peak";
    case ErrorCode::rank_deficient: return "rank-deficient";
    case ErrorCode::singular_circulant: return "singular-circulant";
    case ErrorCode::quadrature_failure: return "quadrature-failure";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
    case ErrorCode::campaign_aborted: return "campaign-aborted";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code)
{
}

} // namespace synclab
