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

#include "synclab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "synclab/common.hpp"

namespace synclab {
namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

double panel(const std::function<double(double)>& f, double a, double b)
{
    return Rule::integrate(f, a, b);
}

void refine(const std::function<double(double)>& f, double a, double b, double whole, double tol, int depth,
            QuadratureResult& out)
{
    const double mid = 0.5 * (a + b);
    const double left = panel(f, a, mid);
    const double right = panel(f, mid, b);
    const double diff = std::abs(left + right - whole);
    // Roundoff floor: a relative 1e-14 change is below what the rule can resolve.
    tol = std::max(tol, 1e-14 * std::abs(left + right));
    if (diff <= tol || depth <= 0) {
        if (diff > tol)
            throw Error(ErrorCode::quadrature_failure, "adaptive quadrature did not converge");
        out.value += left + right;
        out.error_estimate += diff;
        out.panels += 2;
        return;
    }
    refine(f, a, mid, left, 0.5 * tol, depth - 1, out);
    refine(f, mid, b, right, 0.5 * tol, depth - 1, out);
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    int initial_panels, int max_depth)
{
    if (!(b > a) || initial_panels < 1)
        throw Error(ErrorCode::invalid_argument, "bad integration interval");
    QuadratureResult out;
    const double h = (b - a) / initial_panels;
    for (int k = 0; k < initial_panels; ++k) {
        const double lo = a + k * h;
        const double hi = k + 1 == initial_panels ? b : lo + h;
        refine(f, lo, hi, panel(f, lo, hi), abs_tol / initial_panels, max_depth, out);
    }
    if (!std::isfinite(out.value))
        throw Error(ErrorCode::quadrature_failure, "non-finite integral");
    return out;
}

} // namespace synclab
