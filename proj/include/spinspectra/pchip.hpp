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
#ifndef SPINSPECTRA_PCHIP_HPP
#define SPINSPECTRA_PCHIP_HPP

#include <vector>

namespace spinspectra {

// Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson slopes,
// one-sided endpoint formula). The interpolant never overshoots the local
// data range, so non-negative samples stay non-negative. Evaluation outside
// [x_front, x_back] clamps to the endpoint values.
class PchipInterpolator {
public:
    PchipInterpolator(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

private:
    std::vector<double> x_, y_, slope_;
};

}  // namespace spinspectra

#endif
