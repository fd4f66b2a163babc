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
#include "spinspectra/svg.hpp"

#include <algorithm>
#include <ostream>

namespace spinspectra {

void write_spectrum_svg(std::ostream& os, const Spectrum& spectrum, const std::string& title) {
    const int width = 900, height = 420, margin = 50;
    const double lo = spectrum.points.front(), hi = spectrum.points.back();
    double amax = 0.0;
    for (double a : spectrum.amplitudes) amax = std::max(amax, a);
    if (amax <= 0.0) amax = 1.0;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << title << "</text>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
       << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
    for (size_t q = 0; q < spectrum.points.size(); ++q) {
        // Descending axis: largest shift on the left.
        const double fx = hi > lo ? (hi - spectrum.points[q]) / (hi - lo) : 0.5;
        const double x = margin + fx * (width - 2 * margin);
        const double y = height - margin - (spectrum.amplitudes[q] / amax) * (height - 2 * margin);
        os << x << ',' << y << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">shift (ppm, descending)</text>\n";
    os << "</svg>\n";
}

}  // namespace spinspectra
