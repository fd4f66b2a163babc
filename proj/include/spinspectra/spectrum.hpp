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
#ifndef SPINSPECTRA_SPECTRUM_HPP
#define SPINSPECTRA_SPECTRUM_HPP

#include <vector>

#include "spinspectra/engine.hpp"
#include "spinspectra/types.hpp"

namespace spinspectra {

enum class AxisKind { Angular, Ppm };

// A sampled spectral curve. Points are strictly increasing on either axis;
// the ppm axis stores 1e6 * (omega - omega_ref) / omega_ref.
struct Spectrum {
    AxisKind axis = AxisKind::Angular;
    std::vector<double> points;
    std::vector<double> amplitudes;
    double eta = 0.0;
    bool normalized = false;
};

// Default sample counts: 2,000 points, raised to 20,000 for line widths at
// or below 0.1 Hz.
int default_grid_points(double fwhm_hz);

// Nonlinear frequency grid with equal analytic spectral mass between
// consecutive points: the cumulative integral of the Lorentzian mixture is
// inverted at the quantiles (q + 0.5) / n. Negative stick weights (possible
// for asymmetric cluster weights) enter by magnitude so the CDF stays
// monotone. An empty stick list yields a uniform fallback grid.
std::vector<double> equal_area_grid(const StickSpectrum& sticks, double eta, int n_points);

// C(w_q) = sum_k w_k * eta / (eta^2 + (w_q - w_k)^2) on the given grid.
Spectrum sample_sticks(const StickSpectrum& sticks, double eta, std::vector<double> grid);

// Rescales so the trapezoid integral over the grid equals `target`
// (idempotent). Throws on a zero or non-finite signal.
Spectrum normalize(Spectrum spectrum, double target);

// Angular axis -> chemical-shift axis, delta_ppm = 1e6 (w - w_ref) / w_ref.
// Amplitudes are untouched; points stay ascending (renderers emit the
// conventional descending axis).
Spectrum to_ppm_axis(Spectrum spectrum, const SpectrometerSettings& settings);

}  // namespace spinspectra

#endif
