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

#include "synclab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>

#include "synclab/fft.hpp"
#include "synclab/quadrature.hpp"
#include "synclab/random.hpp"

namespace synclab {
namespace {

constexpr double kZRange = 10.0;
constexpr double kQuadTol = 1e-12;

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi); }

void check_spectrum(const MeanSpectrum& s)
{
    if (s.values.size() < 2)
        throw Error(ErrorCode::invalid_argument, "mean spectrum needs at least two entries");
    if (!(s.sigma_bar_sq > 0.0) || !std::isfinite(s.sigma_bar_sq))
        throw Error(ErrorCode::invalid_argument, "sigma_bar_sq must be positive and finite");
    if (!std::isfinite(s.target_index))
        throw Error(ErrorCode::invalid_argument, "non-finite target index");
    for (double v : s.values)
        if (!std::isfinite(v))
            throw Error(ErrorCode::invalid_argument, "non-finite mean spectrum entry");
}

} // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double log_normal_cdf(double x)
{
    if (x > 0.0)
        return std::log1p(-q_function(x));
    if (x > -35.0)
        return std::log(normal_cdf(x));
    // Mills-ratio series; erfc underflows near -38.
    const double r = 1.0 / (x * x);
    const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
    return -0.5 * x * x - std::log(-x) - 0.5 * std::log(kTwoPi) + std::log(series);
}

double prob_peak_index(const MeanSpectrum& s, int q)
{
    check_spectrum(s);
    const int n = static_cast<int>(s.values.size());
    if (q < 0 || q >= n)
        throw Error(ErrorCode::index_out_of_range, "peak index out of range");
    const double sigma = std::sqrt(s.sigma_bar_sq);
    RVector gaps;
    gaps.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i)
        if (i != q)
            gaps.push_back((s.values[static_cast<std::size_t>(q)] - s.values[static_cast<std::size_t>(i)]) / sigma);

    auto integrand = [&gaps](double z) {
        double log_prod = 0.0;
        for (double g : gaps) {
            log_prod += log_normal_cdf(z + g);
            if (log_prod < -745.0)
                return 0.0;
        }
        return normal_pdf(z) * std::exp(log_prod);
    };
    return integrate_adaptive(integrand, -kZRange, kZRange, kQuadTol).value;
}

RVector peak_probabilities(const MeanSpectrum& s)
{
    RVector p(s.values.size());
    for (std::size_t q = 0; q < p.size(); ++q)
        p[q] = prob_peak_index(s, static_cast<int>(q));
    return p;
}

MseResult mse_theoretical(const MeanSpectrum& s)
{
    MseResult r;
    r.probabilities = peak_probabilities(s);
    for (std::size_t q = 0; q < r.probabilities.size(); ++q) {
        const double d = static_cast<double>(q) - s.target_index;
        r.mse += r.probabilities[q] * d * d;
    }
    return r;
}

RVector optimal_spectrum(double target_index, int n)
{
    if (n < 2)
        throw Error(ErrorCode::invalid_argument, "spectrum length must be >= 2");
    const long idx = std::lround(target_index);
    if (idx < 0 || idx >= n)
        throw Error(ErrorCode::index_out_of_range, "target index outside the spectrum");
    RVector s(static_cast<std::size_t>(n), 0.0);
    s[static_cast<std::size_t>(idx)] = 1.0;
    return s;
}

double mse_asymptotic_optimal(int n, double sigma_bar_sq, double target_index)
{
    if (n < 2)
        throw Error(ErrorCode::invalid_argument, "spectrum length must be >= 2");
    if (!(sigma_bar_sq > 0.0) || !std::isfinite(sigma_bar_sq) || !std::isfinite(target_index))
        throw Error(ErrorCode::invalid_argument, "bad sigma_bar_sq or target");
    const long on = std::lround(target_index);
    if (on < 0 || on >= n)
        throw Error(ErrorCode::index_out_of_range, "target index outside the spectrum");
    const double inv_sigma = 1.0 / std::sqrt(sigma_bar_sq);

    auto p_on_integrand = [&](double z) {
        return normal_pdf(z) * std::exp((n - 1) * log_normal_cdf(z + inv_sigma));
    };
    auto p_off_integrand = [&](double z) {
        const double log_term = log_normal_cdf(z - inv_sigma) + (n - 2) * log_normal_cdf(z);
        return log_term < -745.0 ? 0.0 : normal_pdf(z) * std::exp(log_term);
    };
    const double p_on = integrate_adaptive(p_on_integrand, -kZRange, kZRange, kQuadTol).value;
    const double p_off = integrate_adaptive(p_off_integrand, -kZRange, kZRange, kQuadTol).value;

    double mse = 0.0;
    for (long q = 0; q < n; ++q) {
        const double d = static_cast<double>(q) - target_index;
        mse += (q == on ? p_on : p_off) * d * d;
    }
    return mse;
}

CirculantShift::CirculantShift(std::size_t n) : n_(n)
{
    if (n < 2)
        throw Error(ErrorCode::invalid_argument, "circulant shift needs n >= 2");
}

template <typename T>
std::vector<T> CirculantShift::apply(std::span<const T> x, long power) const
{
    if (x.size() != n_)
        throw Error(ErrorCode::dimension_mismatch, "vector length differs from the shift size");
    std::vector<T> out(n_);
    const long n = static_cast<long>(n_);
    for (long j = 0; j < n; ++j)
        out[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(wrap_index(j - power, n))];
    return out;
}

template std::vector<double> CirculantShift::apply<double>(std::span<const double>, long) const;
template std::vector<cd> CirculantShift::apply<cd>(std::span<const cd>, long) const;

CirculantShift circulant_shift_matrix(std::size_t n) { return CirculantShift(n); }

std::vector<LagTerm> lag_terms_from_paths(std::span<const cd> amplitudes, std::span<const double> delays_s,
                                          double delay_resolution_s, int n)
{
    if (amplitudes.size() != delays_s.size())
        throw Error(ErrorCode::dimension_mismatch, "one delay per amplitude is required");
    if (!(delay_resolution_s > 0.0) || n < 2)
        throw Error(ErrorCode::invalid_argument, "bad grid for lag terms");
    std::vector<long> cells(delays_s.size());
    for (std::size_t l = 0; l < delays_s.size(); ++l) {
        const double d = delays_s[l] / delay_resolution_s;
        cells[l] = std::lround(d);
        if (std::abs(d - static_cast<double>(cells[l])) > 1e-6)
            std::clog << "warning: path " << l << " delay is " << d << " cells; rounded to " << cells[l] << '\n';
    }
    std::vector<LagTerm> terms;
    terms.reserve(cells.size() * cells.size());
    for (std::size_t l = 0; l < cells.size(); ++l)
        for (std::size_t lp = 0; lp < cells.size(); ++lp)
            terms.push_back({std::conj(amplitudes[l]) * amplitudes[lp], wrap_index(cells[l] - cells[lp], n)});
    return terms;
}

CVector forward_spectrum_from_rho(std::span<const cd> rho, std::span<const LagTerm> terms)
{
    const long n = static_cast<long>(rho.size());
    if (n < 2)
        throw Error(ErrorCode::invalid_argument, "rho must have at least two entries");
    CVector s(rho.size(), cd{});
    for (const auto& t : terms)
        for (long q = 0; q < n; ++q)
            s[static_cast<std::size_t>(q)] += t.weight * rho[static_cast<std::size_t>(wrap_index(q + t.lag, n))];
    return s;
}

CVector rho_for_target_spectrum(std::span<const cd> s, std::span<const LagTerm> terms)
{
    const long n = static_cast<long>(s.size());
    if (n < 2)
        throw Error(ErrorCode::invalid_argument, "target spectrum must have at least two entries");

    // phi~: gain products in ascending lag order 1, 2, ..., n (lag n == lag 0).
    CVector phi(s.size(), cd{});
    for (const auto& t : terms)
        phi[static_cast<std::size_t>(wrap_index(t.lag - 1, n))] += t.weight;
    // phi~ J is indexed by lag; its inverse-DFT is the circulant symbol.
    CVector symbol = circulant_shift_matrix(s.size()).apply<cd>(phi);
    fft::backward(symbol);

    double largest = 0.0;
    for (const auto& c : symbol)
        largest = std::max(largest, std::abs(c));
    for (const auto& c : symbol)
        if (!(std::abs(c) > 1e-9 * largest))
            throw Error(ErrorCode::singular_circulant, "lag-arranged gain sequence has a vanishing DFT coefficient");

    CVector spec = fft::forward_copy(s);
    for (std::size_t k = 0; k < spec.size(); ++k)
        spec[k] /= symbol[k];
    fft::backward(spec);
    for (auto& x : spec)
        x /= static_cast<double>(n);
    return spec;
}

GaussianRowResult gaussian_row_experiment(const MeanSpectrum& s, std::uint64_t trials, std::uint64_t seed)
{
    check_spectrum(s);
    if (trials < 2)
        throw Error(ErrorCode::invalid_argument, "need at least two trials");
    const std::size_t n = s.values.size();
    const double sigma = std::sqrt(s.sigma_bar_sq);
    auto rng = make_stream(seed, 0, Stream::trial);
    std::normal_distribution<double> noise(0.0, sigma);

    GaussianRowResult r;
    r.histogram.assign(n, 0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::size_t best = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double v = s.values[i] + noise(rng);
            if (v > best_v) {
                best_v = v;
                best = i;
            }
        }
        ++r.histogram[best];
        const double d = static_cast<double>(best) - s.target_index;
        sum += d * d;
        sum_sq += d * d * d * d;
    }
    const double nt = static_cast<double>(trials);
    r.mse = sum / nt;
    const double var = std::max(0.0, (sum_sq - nt * r.mse * r.mse) / (nt - 1.0));
    r.ci95 = 1.96 * std::sqrt(var / nt);
    return r;
}

} // namespace synclab
