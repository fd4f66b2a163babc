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
#include "spinspectra/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "spinspectra/pchip.hpp"

namespace spinspectra {

SimilarityReport cosine_similarity(const Spectrum& a, const Spectrum& b, int resample_points) {
    if (a.axis != b.axis)
        throw ValidationError("cannot compare spectra on different axes");
    if (a.points.size() < 2 || b.points.size() < 2)
        throw ValidationError("cosine similarity needs sampled spectra");
    if (resample_points < 2)
        throw ValidationError("resample grid needs at least 2 points");

    auto has_signal = [](const Spectrum& s) {
        for (double v : s.amplitudes)
            if (v != 0.0) return true;
        return false;
    };
    if (!has_signal(a) || !has_signal(b))
        throw ValidationError("cosine similarity is undefined for an all-zero spectrum");

    SimilarityReport report;
    report.resample_points = resample_points;
    report.support_lo = std::min(a.points.front(), b.points.front());
    report.support_hi = std::max(a.points.back(), b.points.back());

    // Work relative to the support midpoint. A common translation leaves
    // the cosine untouched but removes the huge absolute offset of the
    // angular axis, where node rounding at ulp(omega_ref) would otherwise
    // swamp the transform-invariance of the metric.
    const double center = 0.5 * (report.support_lo + report.support_hi);
    auto shifted = [center](const std::vector<double>& points) {
        std::vector<double> out(points);
        for (double& p : out) p -= center;
        return out;
    };
    const std::vector<double> ax = shifted(a.points);
    const std::vector<double> bx = shifted(b.points);
    const PchipInterpolator fa(ax, a.amplitudes);
    const PchipInterpolator fb(bx, b.amplitudes);
    const double step = (report.support_hi - report.support_lo) / (resample_points - 1);

    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int q = 0; q < resample_points; ++q) {
        const double x = step * (q - 0.5 * (resample_points - 1));
        const double va = (x < ax.front() || x > ax.back()) ? 0.0 : fa(x);
        const double vb = (x < bx.front() || x > bx.back()) ? 0.0 : fb(x);
        dot += va * vb;
        na += va * va;
        nb += vb * vb;
    }
    if (!(na > 0.0) || !(nb > 0.0))
        throw ValidationError("cosine similarity is undefined for an all-zero resample");

    report.cos_theta = dot / std::sqrt(na * nb);
    const double deficit = 1.0 - report.cos_theta;
    // Deficits below two ulp of 1.0 are rounding noise of the quotient
    // itself: clamp them, exactly like a true underflow.
    report.epsilon =
        deficit <= 2.5e-16 ? kEpsilonClamp : std::max(kEpsilonClamp, std::log10(deficit));
    return report;
}

}  // namespace spinspectra
