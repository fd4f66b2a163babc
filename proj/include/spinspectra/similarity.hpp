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
#ifndef SPINSPECTRA_SIMILARITY_HPP
#define SPINSPECTRA_SIMILARITY_HPP

#include "spinspectra/spectrum.hpp"

namespace spinspectra {

inline constexpr int kDefaultResamplePoints = 100000;
inline constexpr double kEpsilonClamp = -16.0;

struct SimilarityReport {
    double cos_theta = 0.0;
    double epsilon = kEpsilonClamp;  // log10(1 - cos_theta), clamped at -16
    int resample_points = 0;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

// Cosine similarity between two sampled spectra on a shared uniform grid
// spanning the union of their supports. Each spectrum is interpolated with
// the shape-preserving cubic scheme and evaluates to zero outside its own
// support, so gaps between disjoint regions are filled with explicit zeros.
// The inner products are plain Riemann sums (the constant spacing cancels).
SimilarityReport cosine_similarity(const Spectrum& a, const Spectrum& b,
                                   int resample_points = kDefaultResamplePoints);

}  // namespace spinspectra

#endif
