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
#include "spinspectra/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace spinspectra {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError("molecule file: " + what); }

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) fail(std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
}

std::string require_string(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) fail(std::string("missing string field '") + key + "'");
    return j[key].get<std::string>();
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
    return std::string(buf, res.ptr);
}

}  // namespace

MoleculeFile parse_molecule_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("top level must be an object");
    if (!root.contains("version") || !root["version"].is_number_integer() ||
        root["version"].get<int>() != 1)
        fail("unsupported or missing schema version (expected 1)");

    std::map<std::string, Isotope> custom;
    if (root.contains("isotopes")) {
        if (!root["isotopes"].is_array()) fail("'isotopes' must be an array");
        for (const auto& iso : root["isotopes"]) {
            Isotope isotope;
            isotope.symbol = require_string(iso, "symbol");
            isotope.gamma = require_number(iso, "gamma");
            const double spin = require_number(iso, "spin");
            const double doubled = 2.0 * spin;
            if (std::abs(doubled - std::round(doubled)) > 1e-9 || doubled < 1.0)
                fail("isotope '" + isotope.symbol + "': spin must be a positive half-integer");
            isotope.two_spin = static_cast<int>(std::round(doubled));
            try {
                isotope.validate();
            } catch (const ValidationError& e) {
                fail(e.what());
            }
            custom[isotope.symbol] = isotope;
        }
    }

    if (!root.contains("nuclei") || !root["nuclei"].is_array() || root["nuclei"].empty())
        fail("'nuclei' must be a non-empty array");

    std::vector<Nucleus> nuclei;
    for (const auto& jn : root["nuclei"]) {
        Nucleus n;
        n.label = jn.contains("label") ? require_string(jn, "label") : "";
        const std::string symbol = require_string(jn, "isotope");
        if (auto it = custom.find(symbol); it != custom.end())
            n.isotope = it->second;
        else if (auto builtin = builtin_isotope(symbol))
            n.isotope = *builtin;
        else
            fail("unknown isotope '" + symbol + "' (declare it in the 'isotopes' array)");
        n.delta = require_number(jn, "shift_ppm") * 1e-6;
        try {
            n.validate();
        } catch (const ValidationError& e) {
            fail(e.what());
        }
        nuclei.push_back(std::move(n));
    }

    MoleculeFile mol;
    if (root.contains("name")) mol.name = require_string(root, "name");
    try {
        mol.system = SpinSystem(std::move(nuclei));
    } catch (const ValidationError& e) {
        fail(e.what());
    }

    if (root.contains("couplings")) {
        if (!root["couplings"].is_array()) fail("'couplings' must be an array");
        std::set<std::pair<int, int>> seen;
        for (const auto& jc : root["couplings"]) {
            const double di = require_number(jc, "i");
            const double dj = require_number(jc, "j");
            const double j_hz = require_number(jc, "j_hz");
            const int i = static_cast<int>(di);
            const int j = static_cast<int>(dj);
            if (di != i || dj != j) fail("coupling indices must be integers");
            const auto key = std::minmax(i, j);
            if (!seen.insert(key).second) fail("duplicate coupling for pair");
            try {
                mol.system.set_coupling(i, j, j_hz);
            } catch (const ValidationError& e) {
                fail(e.what());
            }
        }
    }
    return mol;
}

MoleculeFile load_molecule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open molecule file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_molecule_json(buffer.str());
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum) {
    if (spectrum.axis != AxisKind::Ppm)
        throw ValidationError("spectrum CSV uses the ppm axis");
    os << "delta_ppm,amplitude\n";
    // Descending ppm, the plotting convention.
    for (size_t q = spectrum.points.size(); q-- > 0;)
        os << format_double(spectrum.points[q]) << ',' << format_double(spectrum.amplitudes[q])
           << '\n';
}

Spectrum read_spectrum_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "delta_ppm,amplitude")
        throw ParseError("spectrum CSV: missing 'delta_ppm,amplitude' header");

    Spectrum s;
    s.axis = AxisKind::Ppm;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("spectrum CSV: malformed row");
        try {
            s.points.push_back(std::stod(line.substr(0, comma)));
            s.amplitudes.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError("spectrum CSV: malformed number");
        }
    }
    if (s.points.size() < 2) throw ParseError("spectrum CSV: needs at least two rows");
    std::reverse(s.points.begin(), s.points.end());
    std::reverse(s.amplitudes.begin(), s.amplitudes.end());
    if (!std::is_sorted(s.points.begin(), s.points.end()))
        throw ParseError("spectrum CSV: points must be monotonic");
    return s;
}

void write_spectrum_json(std::ostream& os, const Spectrum& spectrum, uint64_t system_hash,
                         uint64_t settings_hash) {
    json root;
    root["axis"] = spectrum.axis == AxisKind::Ppm ? "ppm" : "angular";
    root["eta"] = spectrum.eta;
    root["normalized"] = spectrum.normalized;
    root["system_hash"] = system_hash;
    root["settings_hash"] = settings_hash;
    root["points"] = spectrum.points;
    root["amplitudes"] = spectrum.amplitudes;
    os << root.dump(2) << '\n';
}

Spectrum read_spectrum_json(std::istream& is) {
    json root;
    try {
        root = json::parse(is);
    } catch (const json::exception& e) {
        throw ParseError(std::string("spectrum JSON: ") + e.what());
    }
    Spectrum s;
    const std::string axis = root.value("axis", "");
    if (axis == "ppm")
        s.axis = AxisKind::Ppm;
    else if (axis == "angular")
        s.axis = AxisKind::Angular;
    else
        throw ParseError("spectrum JSON: unknown axis kind");
    s.eta = root.value("eta", 0.0);
    s.normalized = root.value("normalized", false);
    if (!root.contains("points") || !root.contains("amplitudes"))
        throw ParseError("spectrum JSON: missing samples");
    s.points = root["points"].get<std::vector<double>>();
    s.amplitudes = root["amplitudes"].get<std::vector<double>>();
    if (s.points.size() != s.amplitudes.size() || s.points.size() < 2)
        throw ParseError("spectrum JSON: malformed samples");
    return s;
}

Spectrum load_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spectrum file '" + path + "'");
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return read_spectrum_json(in);
    return read_spectrum_csv(in);
}

}  // namespace spinspectra
