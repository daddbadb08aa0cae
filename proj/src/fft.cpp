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

#include "synclab/fft.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

namespace synclab::fft {
namespace {

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int sign)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find({n, sign});
        if (it != plans_.end())
            return it->second;
        // The planner is not thread safe; execution of a finished plan is.
        std::vector<cd> scratch(static_cast<std::size_t>(n));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(std::make_pair(n, sign), plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

void run(std::span<cd> data, int sign)
{
    if (data.empty())
        return;
    fftw_plan plan = cache().get(static_cast<int>(data.size()), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

} // namespace

void forward(std::span<cd> data) { run(data, FFTW_FORWARD); }
void backward(std::span<cd> data) { run(data, FFTW_BACKWARD); }

CVector forward_copy(std::span<const cd> data)
{
    CVector out(data.begin(), data.end());
    forward(out);
    return out;
}

CVector backward_copy(std::span<const cd> data)
{
    CVector out(data.begin(), data.end());
    backward(out);
    return out;
}

void backward_rows(CMatrix& m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        backward(std::span<cd>(m.row(r).data(), static_cast<std::size_t>(m.cols())));
}

void backward_cols(CMatrix& m)
{
    CVector col(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            col[static_cast<std::size_t>(r)] = m(r, c);
        backward(col);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            m(r, c) = col[static_cast<std::size_t>(r)];
    }
}

} // namespace synclab::fft
