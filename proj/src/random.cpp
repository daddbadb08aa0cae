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

#include "synclab/random.hpp"

#include <array>
#include <vector>

namespace synclab {

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts)
{
    std::vector<std::uint32_t> words;
    words.reserve(parts.size() * 2);
    for (std::uint64_t p : parts) {
        words.push_back(static_cast<std::uint32_t>(p & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::mt19937_64 make_stream(std::uint64_t seed, std::int64_t frame_id, Stream stream)
{
    return std::mt19937_64(derive_seed({seed, static_cast<std::uint64_t>(frame_id), static_cast<std::uint64_t>(stream)}));
}

} // namespace synclab
