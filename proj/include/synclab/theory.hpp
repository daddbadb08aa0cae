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
#include <span>
#include <vector>

#include "synclab/common.hpp"

namespace synclab {

// Standard normal CDF, upper tail Q = 1 - Phi, and log Phi without underflow.
double normal_cdf(double x);
double q_function(double x);
double log_normal_cdf(double x);

// Expected (magnitude-domain) correlation row s with i.i.d. Gaussian
// perturbations of variance sigma_bar_sq. Indices are 0-based.
struct MeanSpectrum {
    RVector values;
    double sigma_bar_sq = 1.0;
    double target_index = 0.0; // drift in delay cells, may be fractional
};

// P(argmax = q) = int phi(z) prod_{i != q} Phi(z + (s_q - s_i) / sigma) dz,
// adaptive Gauss-Legendre over z in [-10, 10], product in the log domain.
double prob_peak_index(const MeanSpectrum& s, int q);
RVector peak_probabilities(const MeanSpectrum& s);

struct MseResult {
    double mse = 0.0; // cells^2, unwrapped index metric
    RVector probabilities;
};

// sum_q P_q (q - target)^2
MseResult mse_theoretical(const MeanSpectrum& s);

// One-hot at round(target_index).
RVector optimal_spectrum(double target_index, int n);

// Closed form for the one-hot mean: two probability categories, on-target
//   P_on  = int phi(z) Phi(z + 1/sigma)^(n-1) dz
// and off-target
//   P_off = int phi(z) Phi(z - 1/sigma) Phi(z)^(n-2) dz.
double mse_asymptotic_optimal(int n, double sigma_bar_sq, double target_index);

// Right-multiplication by the cyclic shift matrix J (J[i, i+1] = 1, J[n-1, 0] = 1):
// x J = [x[n-1], x[0], ..., x[n-2]]. Never materialized as a dense matrix.
class CirculantShift {
public:
    explicit CirculantShift(std::size_t n);

    std::size_t size() const { return n_; }
    template <typename T>
    std::vector<T> apply(std::span<const T> x, long power = 1) const;

private:
    std::size_t n_;
};

CirculantShift circulant_shift_matrix(std::size_t n);

// One (l, l') cross term: weight conj(alpha_l) alpha_l' at lag
// Delta = (d_l - d_l') mod n, with d the delay in grid cells.
struct LagTerm {
    cd weight;
    long lag = 0;
};

// All L^2 terms from per-path amplitudes and delays. Off-grid delays are
// rounded to the nearest cell with a warning on std::clog.
std::vector<LagTerm> lag_terms_from_paths(std::span<const cd> amplitudes, std::span<const double> delays_s,
                                          double delay_resolution_s, int n);

// s[q] = sum_terms w rho[(q + Delta) mod n]
CVector forward_spectrum_from_rho(std::span<const cd> rho, std::span<const LagTerm> terms);

// Inverts the forward model: the lag-arranged gains phi (lags 1..n in
// ascending order) are shifted by J, their inverse-DFT symbol is inverted
// elementwise, and rho = IDFT(DFT(s) / symbol). Throws singular_circulant
// when any symbol coefficient is below 1e-9 of the largest.
CVector rho_for_target_spectrum(std::span<const cd> s, std::span<const LagTerm> terms);

struct GaussianRowResult {
    double mse = 0.0;
    double ci95 = 0.0;
    std::vector<std::uint64_t> histogram; // argmax counts per index
};

// Monte Carlo: argmax of s + sigma N(0, I), same metric as mse_theoretical.
GaussianRowResult gaussian_row_experiment(const MeanSpectrum& s, std::uint64_t trials, std::uint64_t seed);

} // namespace synclab
