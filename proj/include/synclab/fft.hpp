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

#include <span>

#include "synclab/common.hpp"

// Thin FFTW wrapper. Plans are created once per (size, direction) with
// FFTW_ESTIMATE so results are bit-identical across threads and runs.
namespace synclab::fft {

// In place, unnormalized, kernel exp(-j 2 pi k n / N).
void forward(std::span<cd> data);

// In place, unnormalized, kernel exp(+j 2 pi k n / N).
void backward(std::span<cd> data);

CVector forward_copy(std::span<const cd> data);
CVector backward_copy(std::span<const cd> data);

// Applies forward/backward to every row or every column of a matrix.
void backward_rows(CMatrix& m);
void backward_cols(CMatrix& m);

} // namespace synclab::fft
