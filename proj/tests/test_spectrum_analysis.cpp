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
#include <doctest.h>

#include <cmath>
#include <random>

#include "spinspectra/pchip.hpp"
#include "spinspectra/similarity.hpp"
#include "spinspectra/spectrum.hpp"

using namespace spinspectra;

namespace {

StickSpectrum make_sticks(std::vector<Stick> sticks) {
    StickSpectrum s;
    s.sticks = std::move(sticks);
    for (const auto& st : s.sticks) s.total_weight += st.weight;
    return s;
}

double mixture_cdf(const StickSpectrum& sticks, double eta, double x) {
    double abs_total = 0.0, acc = 0.0;
    for (const auto& s : sticks.sticks) abs_total += std::abs(s.weight);
    for (const auto& s : sticks.sticks)
        acc += std::abs(s.weight) * (std::atan((x - s.omega) / eta) / (kTwoPi / 2.0) + 0.5);
    return acc / abs_total;
}

}  // namespace

TEST_CASE("grid point defaults follow the broadening") {
    CHECK(default_grid_points(1.0) == 2000);
    CHECK(default_grid_points(0.1) == 20000);
    CHECK(default_grid_points(0.05) == 20000);
}

TEST_CASE("single stick: grid is symmetric with the median at the peak") {
    const double eta = 2.0;
    const auto sticks = make_sticks({{100.0, 3.0}});
    const auto grid = equal_area_grid(sticks, eta, 101);
    CHECK(grid[50] == doctest::Approx(100.0).epsilon(1e-10));
    for (int k = 0; k < 50; ++k)
        CHECK(grid[static_cast<size_t>(50 - k)] - 100.0 ==
              doctest::Approx(100.0 - grid[static_cast<size_t>(50 + k)]).epsilon(1e-8));
    CHECK(std::is_sorted(grid.begin(), grid.end()));
}

TEST_CASE("two distant equal sticks split the points evenly") {
    const double eta = 1.0;
    const auto sticks = make_sticks({{0.0, 1.0}, {1000.0, 1.0}});
    const auto grid = equal_area_grid(sticks, eta, 200);
    int near_first = 0;
    for (double x : grid)
        if (std::abs(x - 0.0) < std::abs(x - 1000.0)) ++near_first;
    CHECK(near_first == 100);
}

TEST_CASE("3:1 weights put points in a 3:1 ratio") {
    const double eta = 1.0;
    const auto sticks = make_sticks({{0.0, 3.0}, {1000.0, 1.0}});
    const auto grid = equal_area_grid(sticks, eta, 400);
    int near_first = 0;
    for (double x : grid)
        if (std::abs(x - 0.0) < std::abs(x - 1000.0)) ++near_first;
    CHECK(near_first == doctest::Approx(300).epsilon(0.01));
}

TEST_CASE("equal-area property: consecutive CDF increments are 1/n") {
    const double eta = 0.7;
    const auto sticks = make_sticks({{-5.0, 2.0}, {40.0, 1.0}, {41.0, 4.0}});
    const int n = 500;
    const auto grid = equal_area_grid(sticks, eta, n);
    for (size_t q = 1; q < grid.size(); ++q) {
        const double inc = mixture_cdf(sticks, eta, grid[q]) - mixture_cdf(sticks, eta, grid[q - 1]);
        CHECK(inc == doctest::Approx(1.0 / n).epsilon(1e-6));
    }
}

TEST_CASE("empty stick list falls back to a uniform grid") {
    const auto grid = equal_area_grid(StickSpectrum{}, 1.0, 50);
    CHECK(grid.size() == 50);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
}

TEST_CASE("sampling: peak value, half maximum and empty input") {
    const double eta = 2.0;
    const auto sticks = make_sticks({{10.0, 5.0}});
    const Spectrum at_center = sample_sticks(sticks, eta, {10.0 - eta, 10.0, 10.0 + eta});
    CHECK(at_center.amplitudes[1] == doctest::Approx(5.0 / eta));
    CHECK(at_center.amplitudes[0] == doctest::Approx(0.5 * 5.0 / eta));  // FWHM definition
    CHECK(at_center.amplitudes[2] == doctest::Approx(0.5 * 5.0 / eta));

    const Spectrum empty = sample_sticks(StickSpectrum{}, eta, {0.0, 1.0});
    CHECK(empty.amplitudes == std::vector<double>{0.0, 0.0});
}

TEST_CASE("normalization rescales the trapezoid integral and is idempotent") {
    const double eta = 1.0;
    const auto sticks = make_sticks({{0.0, 1.0}});
    auto grid = equal_area_grid(sticks, eta, 2000);
    Spectrum sp = sample_sticks(sticks, eta, grid);

    const Spectrum once = normalize(sp, 1.0);
    double integral = 0.0;
    for (size_t q = 1; q < once.points.size(); ++q)
        integral += 0.5 * (once.amplitudes[q] + once.amplitudes[q - 1]) *
                    (once.points[q] - once.points[q - 1]);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(once.normalized);

    Spectrum scaled = sp;
    for (double& a : scaled.amplitudes) a *= 7.0;
    const Spectrum from_scaled = normalize(scaled, 1.0);
    const Spectrum twice = normalize(once, 1.0);
    for (size_t q = 0; q < once.amplitudes.size(); ++q) {
        CHECK(from_scaled.amplitudes[q] == doctest::Approx(once.amplitudes[q]).epsilon(1e-12));
        CHECK(twice.amplitudes[q] == doctest::Approx(once.amplitudes[q]).epsilon(1e-12));
    }

    Spectrum zero = sp;
    for (double& a : zero.amplitudes) a = 0.0;
    CHECK_THROWS_AS(normalize(zero, 1.0), ValidationError);
}

TEST_CASE("ppm axis: shift positions and unchanged amplitudes") {
    SpectrometerSettings s;
    s.ref_frequency_hz = 400e6;
    const double w_ref = s.omega_ref();
    Spectrum sp;
    sp.axis = AxisKind::Angular;
    sp.points = {w_ref, w_ref * (1.0 + 2e-6)};
    sp.amplitudes = {1.0, 2.0};
    const Spectrum ppm = to_ppm_axis(sp, s);
    CHECK(ppm.axis == AxisKind::Ppm);
    CHECK(ppm.points[0] == doctest::Approx(0.0));
    CHECK(ppm.points[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(ppm.amplitudes == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(to_ppm_axis(ppm, s), ValidationError);
}

TEST_CASE("cosine similarity: identity, scaling, and ppm invariance") {
    SpectrometerSettings s;
    s.ref_frequency_hz = 400e6;
    const double eta = s.eta();
    const double w_ref = s.omega_ref();
    const auto sticks =
        make_sticks({{w_ref * (1 + 1e-6), 2.0}, {w_ref * (1 + 3e-6), 1.0}});
    const auto grid = equal_area_grid(sticks, eta, 800);
    const Spectrum a = sample_sticks(sticks, eta, grid);

    const SimilarityReport self = cosine_similarity(a, a);
    CHECK(self.cos_theta == doctest::Approx(1.0));
    CHECK(self.epsilon == -16.0);

    // x2 is exact in floating point, so the deficit clamps all the way.
    Spectrum doubled = a;
    for (double& v : doubled.amplitudes) v *= 2.0;
    CHECK(cosine_similarity(a, doubled).epsilon == -16.0);
    // A non-dyadic factor rounds; invariance still holds to 1e-12.
    Spectrum scaled = a;
    for (double& v : scaled.amplitudes) v *= 5.0;
    CHECK(cosine_similarity(a, scaled).cos_theta == doctest::Approx(1.0).epsilon(1e-12));

    // A genuinely different spectrum, compared on both axes.
    const auto other =
        make_sticks({{w_ref * (1 + 1.2e-6), 2.0}, {w_ref * (1 + 2.8e-6), 1.3}});
    const Spectrum b = sample_sticks(other, eta, equal_area_grid(other, eta, 800));
    const SimilarityReport angular = cosine_similarity(a, b);
    const SimilarityReport ppm = cosine_similarity(to_ppm_axis(a, s), to_ppm_axis(b, s));
    CHECK(angular.cos_theta == doctest::Approx(ppm.cos_theta).epsilon(1e-12));
    CHECK(std::abs(angular.epsilon - ppm.epsilon) <= 1e-3);

    // Symmetry.
    const SimilarityReport ab = cosine_similarity(a, b);
    const SimilarityReport ba = cosine_similarity(b, a);
    CHECK(ab.cos_theta == doctest::Approx(ba.cos_theta).epsilon(1e-12));
}

TEST_CASE("distant Lorentzians have near-zero overlap") {
    const double eta = 1.0;
    const auto left = make_sticks({{0.0, 1.0}});
    const auto right = make_sticks({{1.0e6, 1.0}});
    const Spectrum a = sample_sticks(left, eta, equal_area_grid(left, eta, 400));
    const Spectrum b = sample_sticks(right, eta, equal_area_grid(right, eta, 400));
    const SimilarityReport rep = cosine_similarity(a, b);

    // Quadrature oracle for the analytic overlap on the union window.
    double dot = 0.0, na = 0.0, nb = 0.0;
    const double lo = a.points.front(), hi = b.points.back();
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double x = lo + (hi - lo) * k / (n - 1);
        const double va = 1.0 * eta / (eta * eta + x * x);
        const double vb = 1.0 * eta / (eta * eta + (x - 1.0e6) * (x - 1.0e6));
        dot += va * vb;
        na += va * va;
        nb += vb * vb;
    }
    const double expected = dot / std::sqrt(na * nb);
    CHECK(rep.cos_theta <= 1e-4);
    CHECK(rep.cos_theta == doctest::Approx(expected).epsilon(0.3));
    CHECK(rep.epsilon == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("grid refinement stability: 100k vs 200k resample points") {
    SpectrometerSettings s;
    s.ref_frequency_hz = 400e6;
    const double eta = s.eta();
    const double w_ref = s.omega_ref();
    const auto sticks = make_sticks({{w_ref * (1 + 1e-6), 2.0},
                                     {w_ref * (1 + 1.00002e-6), 1.5},
                                     {w_ref * (1 + 3e-6), 1.0}});
    const auto close = make_sticks({{w_ref * (1 + 1e-6), 2.0},
                                    {w_ref * (1 + 1.00002e-6), 1.501},
                                    {w_ref * (1 + 3.0000005e-6), 1.0}});
    const Spectrum a = sample_sticks(sticks, eta, equal_area_grid(sticks, eta, 2000));
    const Spectrum b = sample_sticks(close, eta, equal_area_grid(close, eta, 2000));
    const SimilarityReport coarse = cosine_similarity(a, b, 100000);
    const SimilarityReport fine = cosine_similarity(a, b, 200000);
    CHECK(std::abs(coarse.epsilon - fine.epsilon) <= 0.05);
}

TEST_CASE("pchip preserves monotonicity and non-negativity") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> rising{0.0, 0.1, 0.2, 2.0, 2.1, 5.0};
    const PchipInterpolator mono(x, rising);
    double prev = mono(0.0);
    for (double t = 0.02; t <= 5.0; t += 0.02) {
        const double v = mono(t);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }

    // A spiky non-negative profile must not undershoot below zero.
    const std::vector<double> spiky{0.0, 0.0, 10.0, 0.0, 0.0, 0.3};
    const PchipInterpolator spike(x, spiky);
    for (double t = 0.0; t <= 5.0; t += 0.01) CHECK(spike(t) >= 0.0);

    // Clamped beyond the support.
    CHECK(spike(-1.0) == 0.0);
    CHECK(spike(6.0) == 0.3);
}

TEST_CASE("pchip reproduces sample points and rejects bad input") {
    const std::vector<double> x{0.0, 0.5, 1.7, 2.0};
    const std::vector<double> y{1.0, -2.0, 0.5, 3.0};
    const PchipInterpolator f(x, y);
    for (size_t k = 0; k < x.size(); ++k) CHECK(f(x[k]) == doctest::Approx(y[k]));
    CHECK_THROWS(PchipInterpolator({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}));
    CHECK_THROWS(PchipInterpolator({0.0, 1.0}, {1.0}));
}

TEST_CASE("degenerate all-zero spectra are rejected") {
    Spectrum zero;
    zero.points = {0.0, 1.0, 2.0};
    zero.amplitudes = {0.0, 0.0, 0.0};
    Spectrum one = zero;
    one.amplitudes = {0.0, 1.0, 0.0};
    CHECK_THROWS_AS(cosine_similarity(zero, one), ValidationError);
    CHECK_THROWS_AS(cosine_similarity(one, zero), ValidationError);
}
