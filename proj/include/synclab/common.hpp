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

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace synclab {

using cd = std::complex<double>;
using CVector = std::vector<cd>;
using RVector = std::vector<double>;

// Row-major so that a row (one OFDM symbol, one Doppler bin) is contiguous.
using CMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

enum class ErrorCode {
    invalid_argument,
    index_out_of_range,
    dimension_mismatch,
    non_unit_symbol,
    zero_norm,
    ambiguous_peak,
    rank_deficient,
    singular_circulant,
    quadrature_failure,
    config,
    io,
    campaign_aborted,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; code() is stable and
// machine readable, what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Signed representative of k modulo n in (-n/2, n/2].
inline long wrap_signed(long k, long n)
{
    long r = ((k % n) + n) % n;
    if (2 * r > n)
        r -= n;
    return r;
}

inline long wrap_index(long k, long n) { return ((k % n) + n) % n; }

} // namespace synclab
