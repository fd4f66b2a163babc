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
#include "spinspectra/time_domain.hpp"

#include <algorithm>
#include <cmath>

#include "spinspectra/parallel.hpp"

namespace spinspectra {

std::complex<double> TimeCorrelation::envelope(double t) const {
    std::complex<double> acc{0.0, 0.0};
    for (size_t k = 0; k < residual_freq.size(); ++k)
        acc += mode_weight[k] * std::polar(1.0, residual_freq[k] * t);
    return acc;
}

std::complex<double> TimeCorrelation::value(double t) const {
    return std::polar(1.0, carrier * t) * envelope(t);
}

double TimeCorrelation::total_weight() const {
    double w = 0.0;
    for (double m : mode_weight) w += m;
    return w;
}

TimeCorrelation correlation_time_domain(const Subsystem& sub, const std::vector<double>& weights,
                                        const EngineOptions& opts) {
    EngineOptions capped = opts;
    capped.dimension_cap = std::min<uint64_t>(opts.dimension_cap, kCorrelationDimensionCap);
    const BlockEigensystem eig = diagonalize_blocks(sub, capped);

    // Collect raw modes (no coalescing; this object is the reference).
    struct Mode {
        double omega, weight;
    };
    std::vector<Mode> modes;
    EngineOptions raw = capped;
    raw.weight_floor_rel = 0.0;
    raw.coalesce_rel = 0.0;
    const StickSpectrum sticks = sticks_from_eigensystem(eig, sub, weights, weights, raw);
    for (const Stick& s : sticks.sticks)
        if (s.weight != 0.0) modes.push_back(Mode{s.omega, s.weight});

    TimeCorrelation corr;
    double abs_total = 0.0, centroid = 0.0;
    for (const Mode& m : modes) {
        abs_total += std::abs(m.weight);
        centroid += std::abs(m.weight) * m.omega;
    }
    corr.carrier = abs_total > 0.0 ? centroid / abs_total : 0.0;
    for (const Mode& m : modes) {
        corr.residual_freq.push_back(m.omega - corr.carrier);
        corr.mode_weight.push_back(m.weight);
        corr.max_residual_freq = std::max(corr.max_residual_freq, std::abs(m.omega - corr.carrier));
    }
    return corr;
}

namespace {

// An empty mode list oscillates nowhere; only the decay needs resolving.
double signal_bandwidth(const TimeCorrelation& corr, const std::vector<double>& omega_grid) {
    if (corr.mode_weight.empty()) return 0.0;
    double detune = 0.0;
    for (double w : omega_grid) detune = std::max(detune, std::abs(w - corr.carrier));
    return corr.max_residual_freq + detune;
}

}  // namespace

TimeGrid suggest_time_grid(const TimeCorrelation& corr, double eta,
                           const std::vector<double>& omega_grid, int oversample,
                           double span_eta_units) {
    const double bandwidth = signal_bandwidth(corr, omega_grid);

    TimeGrid grid;
    const double dt_osc = bandwidth > 0.0 ? kTwoPi / (oversample * bandwidth) : 1e300;
    const double dt_decay = 1.0 / (oversample * eta);
    grid.dt = std::min(dt_osc, dt_decay);
    const double span = span_eta_units / eta;
    double intervals = std::ceil(span / grid.dt);
    intervals += std::fmod(4.0 - std::fmod(intervals, 4.0), 4.0);  // Richardson needs 4 | intervals
    if (intervals + 1 > 80e6)
        throw UnderResolvedTimeGrid("time grid would need an unreasonable number of samples");
    grid.steps = static_cast<int>(intervals) + 1;
    return grid;
}

std::vector<double> half_sided_transform(const TimeCorrelation& corr, const TimeGrid& grid,
                                         double eta, const std::vector<double>& omega_grid,
                                         int threads) {
    if (grid.steps < 5 || (grid.steps - 1) % 4 != 0)
        throw UnderResolvedTimeGrid("time grid must have 4k+1 uniform samples");
    const double bandwidth = signal_bandwidth(corr, omega_grid);
    if (grid.dt * bandwidth > kTwoPi / 8.0 * (1.0 + 1e-12) || grid.dt * eta > 1.0 / 8.0 + 1e-12)
        throw UnderResolvedTimeGrid("time step does not oversample the signal bandwidth 8x");
    const double span = grid.dt * (grid.steps - 1);
    if (span * eta < 10.0 * (1.0 - 1e-12))
        throw UnderResolvedTimeGrid("time span must cover at least 10 decay times");

    const int n_modes = static_cast<int>(corr.residual_freq.size());
    const int n_t = grid.steps;

    // Demodulated, damped series z_k = C(t_k) e^{-i carrier t_k} e^{-eta t_k},
    // advanced by per-mode incremental rotations.
    std::vector<double> z_re(static_cast<size_t>(n_t)), z_im(static_cast<size_t>(n_t));
    {
        std::vector<std::complex<double>> state(static_cast<size_t>(n_modes), {1.0, 0.0});
        std::vector<std::complex<double>> rot(static_cast<size_t>(n_modes));
        for (int m = 0; m < n_modes; ++m)
            rot[static_cast<size_t>(m)] =
                std::polar(1.0, corr.residual_freq[static_cast<size_t>(m)] * grid.dt);
        const double damp = std::exp(-eta * grid.dt);
        double damp_k = 1.0;
        for (int k = 0; k < n_t; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (int m = 0; m < n_modes; ++m)
                acc += corr.mode_weight[static_cast<size_t>(m)] * state[static_cast<size_t>(m)];
            z_re[static_cast<size_t>(k)] = acc.real() * damp_k;
            z_im[static_cast<size_t>(k)] = acc.imag() * damp_k;
            damp_k *= damp;
            for (int m = 0; m < n_modes; ++m)
                state[static_cast<size_t>(m)] *= rot[static_cast<size_t>(m)];
        }
    }

    const int n_w = static_cast<int>(omega_grid.size());
    std::vector<double> result(static_cast<size_t>(n_w), 0.0);

    // Frequencies are processed in chunks; each chunk walks the series once
    // with per-frequency incremental phase states, accumulating the three
    // dyadic trapezoid sums used for Richardson extrapolation.
    const int chunk = 256;
    const int n_chunks = (n_w + chunk - 1) / chunk;
    parallel_for(n_chunks, threads, [&](int ci) {
        const int w0 = ci * chunk;
        const int w1 = std::min(n_w, w0 + chunk);
        const int nw = w1 - w0;
        std::vector<double> st_re(static_cast<size_t>(nw), 1.0), st_im(static_cast<size_t>(nw), 0.0);
        std::vector<double> rot_re(static_cast<size_t>(nw)), rot_im(static_cast<size_t>(nw));
        std::vector<double> a1(static_cast<size_t>(nw), 0.0), a2(static_cast<size_t>(nw), 0.0),
            a4(static_cast<size_t>(nw), 0.0);
        std::vector<double> g_last(static_cast<size_t>(nw), 0.0);
        for (int w = 0; w < nw; ++w) {
            const double phase = -(omega_grid[static_cast<size_t>(w0 + w)] - corr.carrier) * grid.dt;
            rot_re[static_cast<size_t>(w)] = std::cos(phase);
            rot_im[static_cast<size_t>(w)] = std::sin(phase);
        }

        for (int k = 0; k < n_t; ++k) {
            const double zr = z_re[static_cast<size_t>(k)];
            const double zi = z_im[static_cast<size_t>(k)];
            const bool even = (k % 2) == 0;
            const bool quad = (k % 4) == 0;
            const bool last = (k == n_t - 1);
            for (int w = 0; w < nw; ++w) {
                const auto ws = static_cast<size_t>(w);
                const double sr = st_re[ws], si = st_im[ws];
                const double g = zr * sr - zi * si;  // only the real part matters
                a1[ws] += g;
                if (even) a2[ws] += g;
                if (quad) a4[ws] += g;
                if (last) g_last[ws] = g;
                st_re[ws] = sr * rot_re[ws] - si * rot_im[ws];
                st_im[ws] = sr * rot_im[ws] + si * rot_re[ws];
            }
        }

        const double g0 = z_re[0];  // state is 1 at t=0 for every frequency
        for (int w = 0; w < nw; ++w) {
            const auto ws = static_cast<size_t>(w);
            const double ends = 0.5 * (g0 + g_last[ws]);
            const double t1 = grid.dt * (a1[ws] - ends);
            const double t2 = 2.0 * grid.dt * (a2[ws] - ends);
            const double t4 = 4.0 * grid.dt * (a4[ws] - ends);
            const double r1 = (4.0 * t1 - t2) / 3.0;
            const double r2 = (4.0 * t2 - t4) / 3.0;
            result[static_cast<size_t>(w0 + w)] = (16.0 * r1 - r2) / 15.0;
        }
    });
    return result;
}

}  // namespace spinspectra
