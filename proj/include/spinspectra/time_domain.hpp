/* Copyright 2026 The SpinSpectra Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#ifndef SPINSPECTRA_TIME_DOMAIN_HPP
#define SPINSPECTRA_TIME_DOMAIN_HPP

#include <complex>
#include <vector>

#include "spinspectra/engine.hpp"

namespace spinspectra {

inline constexpr uint64_t kCorrelationDimensionCap = uint64_t(1) << 10;

class UnderResolvedTimeGrid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The pulse-acquire correlation C++(t) = Tr[M- e^{-iHt} M+ e^{+iHt}]
// evaluated through the eigendecomposition as a sum of complex phases
// sum_{n,m} e^{+i(E_n-E_m)t} <E_n|M-|E_m><E_m|M+|E_n>.
//
// All phase frequencies sit near the Larmor scale, so the modes are stored
// relative to a carrier: C(t) = e^{i carrier t} * sum_k w_k e^{i res_k t}.
// Sampling then only has to resolve the residual bandwidth instead of the
// absolute frequencies (an exact rewriting, equivalent to the rotating
// frame).
struct TimeCorrelation {
    double carrier = 0.0;                  // rad/s
    std::vector<double> residual_freq;     // omega_k - carrier per mode
    std::vector<double> mode_weight;
    double max_residual_freq = 0.0;

    std::complex<double> value(double t) const;        // full C++(t)
    std::complex<double> envelope(double t) const;     // demodulated
    double total_weight() const;                       // C++(0), real
};

// Builds the mode list from the block eigensystem (symmetric M+- weights).
// Enforces the small-system cap; this is an oracle, not a production path.
TimeCorrelation correlation_time_domain(const Subsystem& sub, const std::vector<double>& weights,
                                        const EngineOptions& opts = {});

// Uniform time grid satisfying the transform's resolution requirements for
// the given evaluation window: span T = span_eta_units / eta, step small
// enough that the residual bandwidth plus the largest grid detuning is
// oversampled by `oversample` on the finest grid. The default keeps the
// coarsest Richardson grid at the 8x minimum and the extrapolated
// quadrature error near the e^{-span} truncation floor.
struct TimeGrid {
    double dt = 0.0;
    int steps = 0;
};
TimeGrid suggest_time_grid(const TimeCorrelation& corr, double eta,
                           const std::vector<double>& omega_grid, int oversample = 32,
                           double span_eta_units = 14.0);

// Half-sided transform Re int_0^T C++(t) e^{-i omega t} e^{-eta t} dt on
// the sampled time grid (trapezoid with two Richardson extrapolation
// levels; the carrier phase is handled analytically). Validates the grid
// against the Nyquist requirement and the minimum span T >= 10/eta.
std::vector<double> half_sided_transform(const TimeCorrelation& corr, const TimeGrid& grid,
                                         double eta, const std::vector<double>& omega_grid,
                                         int threads = 1);

}  // namespace spinspectra

#endif
