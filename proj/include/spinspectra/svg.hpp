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
#ifndef SPINSPECTRA_SVG_HPP
#define SPINSPECTRA_SVG_HPP

#include <iosfwd>
#include <string>

#include "spinspectra/spectrum.hpp"

namespace spinspectra {

// Minimal amplitude-vs-ppm polyline plot; presentational only. The ppm axis
// is drawn descending left to right, the chemistry convention.
void write_spectrum_svg(std::ostream& os, const Spectrum& spectrum, const std::string& title);

}  // namespace spinspectra

#endif
