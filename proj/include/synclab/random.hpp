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
#include <initializer_list>
#include <random>

namespace synclab {

// Substream salts, so that data and noise of one frame are independent.
enum class Stream : std::uint32_t { noise = 0x6e6f6973, data = 0x64617461, trial = 0x7472616c };

// Deterministic 64-bit seed from a list of integers (std::seed_seq mixing).
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

std::mt19937_64 make_stream(std::uint64_t seed, std::int64_t frame_id, Stream stream);

} // namespace synclab
