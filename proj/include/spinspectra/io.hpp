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
#ifndef SPINSPECTRA_IO_HPP
#define SPINSPECTRA_IO_HPP

#include <iosfwd>
#include <string>

#include "spinspectra/spectrum.hpp"
#include "spinspectra/types.hpp"

namespace spinspectra {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MoleculeFile {
    std::string name;
    SpinSystem system;
};

// Molecule schema, version 1:
// {
//   "version": 1,
//   "name": "...",                                     (optional)
//   "nuclei":    [{"label": "...", "isotope": "1H", "shift_ppm": 1.2}, ...],
//   "couplings": [{"i": 0, "j": 1, "j_hz": 7.0}, ...],
//   "isotopes":  [{"symbol": "X", "gamma": 1.0e8, "spin": 0.5}, ...]  (optional)
// }
// Indices are 0-based; couplings are unique per unordered pair.
MoleculeFile parse_molecule_json(const std::string& text);
MoleculeFile load_molecule(const std::string& path);

// Spectrum CSV: header "delta_ppm,amplitude", rows in descending ppm order,
// UTF-8, '.' decimal point, newline-terminated. Round-trips bit-exactly.
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum);
Spectrum read_spectrum_csv(std::istream& is);

// Spectrum JSON carries the axis kind, eta, the normalization flag and the
// provenance hashes alongside the samples.
void write_spectrum_json(std::ostream& os, const Spectrum& spectrum, uint64_t system_hash,
                         uint64_t settings_hash);
Spectrum read_spectrum_json(std::istream& is);

// Reads a spectrum by extension (.json or anything-else-as-CSV).
Spectrum load_spectrum(const std::string& path);

}  // namespace spinspectra

#endif
