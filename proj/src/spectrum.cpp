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
#include "spinspectra/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spinspectra {

int default_grid_points(double fwhm_hz) { return fwhm_hz <= 0.1 ? 20000 : 2000; }

namespace {

constexpr double kPi = kTwoPi / 2.0;

// Normalized CDF of the |weight| Lorentzian mixture.
double mixture_cdf(const std::vector<Stick>& sticks, double abs_total, double eta, double x) {
    double acc = 0.0;
    for (const Stick& s : sticks)
        acc += std::abs(s.weight) * (std::atan((x - s.omega) / eta) / kPi + 0.5);
    return acc / abs_total;
}

double mixture_pdf(const std::vector<Stick>& sticks, double abs_total, double eta, double x) {
    double acc = 0.0;
    for (const Stick& s : sticks) {
        const double d = x - s.omega;
        acc += std::abs(s.weight) * eta / (eta * eta + d * d);
    }
    return acc / (abs_total * kPi);
}

}  // namespace

std::vector<double> equal_area_grid(const StickSpectrum& sticks, double eta, int n_points) {
    if (n_points < 2) throw ValidationError("equal-area grid needs at least 2 points");
    if (!(eta > 0.0)) throw ValidationError("broadening must be positive");

    double abs_total = 0.0;
    for (const Stick& s : sticks.sticks) abs_total += std::abs(s.weight);

    std::vector<double> grid(static_cast<size_t>(n_points));
    if (sticks.sticks.empty() || abs_total == 0.0) {
        // No signal anywhere; an arbitrary uniform window.
        for (int q = 0; q < n_points; ++q)
            grid[static_cast<size_t>(q)] = -1.0 + 2.0 * q / (n_points - 1);
        return grid;
    }

    double omega_min = sticks.sticks.front().omega, omega_max = omega_min;
    for (const Stick& s : sticks.sticks) {
        omega_min = std::min(omega_min, s.omega);
        omega_max = std::max(omega_max, s.omega);
    }

    for (int q = 0; q < n_points; ++q) {
        const double p = (q + 0.5) / n_points;
        // Every single-peak inverse bounds the mixture inverse.
        const double tail = eta * std::tan(kPi * (p - 0.5));
        double lo = omega_min + tail, hi = omega_max + tail;

        // Newton from the midpoint, guarded by bisection.
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            const double f = mixture_cdf(sticks.sticks, abs_total, eta, x) - p;
            if (std::abs(f) < 1e-12) break;
            if (f > 0.0)
                hi = x;
            else
                lo = x;
            const double dfdx = mixture_pdf(sticks.sticks, abs_total, eta, x);
            double next = dfdx > 0.0 ? x - f / dfdx : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (next == x) break;
            x = next;
        }
        grid[static_cast<size_t>(q)] = x;
    }

    for (size_t q = 1; q < grid.size(); ++q)
        if (grid[q] <= grid[q - 1])
            grid[q] = std::nextafter(grid[q - 1], std::numeric_limits<double>::infinity());
    return grid;
}

Spectrum sample_sticks(const StickSpectrum& sticks, double eta, std::vector<double> grid) {
    if (!(eta > 0.0)) throw ValidationError("broadening must be positive");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw ValidationError("sample grid must be sorted");

    Spectrum out;
    out.axis = AxisKind::Angular;
    out.eta = eta;
    out.amplitudes.assign(grid.size(), 0.0);
    for (const Stick& s : sticks.sticks) {
        const double w = s.weight;
        const double c = s.omega;
        for (size_t q = 0; q < grid.size(); ++q) {
            const double d = grid[q] - c;
            out.amplitudes[q] += w * eta / (eta * eta + d * d);
        }
    }
    out.points = std::move(grid);
    return out;
}

Spectrum normalize(Spectrum spectrum, double target) {
    if (spectrum.points.size() < 2)
        throw ValidationError("normalization needs at least two samples");
    if (!(target > 0.0)) throw ValidationError("normalization target must be positive");

    double integral = 0.0;
    for (size_t q = 1; q < spectrum.points.size(); ++q)
        integral += 0.5 * (spectrum.amplitudes[q] + spectrum.amplitudes[q - 1]) *
                    (spectrum.points[q] - spectrum.points[q - 1]);
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw ValidationError("cannot normalize a zero or non-finite spectrum");

    const double scale = target / integral;
    for (double& a : spectrum.amplitudes) a *= scale;
    spectrum.normalized = true;
    return spectrum;
}

Spectrum to_ppm_axis(Spectrum spectrum, const SpectrometerSettings& settings) {
    if (spectrum.axis != AxisKind::Angular)
        throw ValidationError("ppm transform expects an angular-frequency axis");
    const double w_ref = settings.omega_ref();
    for (double& p : spectrum.points) p = 1e6 * (p - w_ref) / w_ref;
    spectrum.axis = AxisKind::Ppm;
    return spectrum;
}

}  // namespace spinspectra
