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
#include "spinspectra/types.hpp"

#include <cmath>
#include <cstring>

namespace spinspectra {

namespace {

// FNV-1a over raw bytes; used only for provenance metadata on spectra.
uint64_t fnv1a(const void* data, size_t n, uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t hash_double(double x, uint64_t h) {
    uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    return fnv1a(&bits, sizeof bits, h);
}

}  // namespace

void Isotope::validate() const {
    if (symbol.empty())
        throw ValidationError("isotope symbol must be non-empty");
    if (!std::isfinite(gamma) || gamma == 0.0)
        throw ValidationError("isotope '" + symbol + "': gamma must be finite and non-zero");
    if (two_spin < 1)
        throw ValidationError("isotope '" + symbol + "': spin must be a positive half-integer");
}

std::optional<Isotope> builtin_isotope(const std::string& symbol) {
    if (symbol == "1H") return Isotope{"1H", kGammaProton, 1};
    if (symbol == "31P") return Isotope{"31P", kGammaPhosphorus31, 1};
    return std::nullopt;
}

void Nucleus::validate() const {
    isotope.validate();
    if (!std::isfinite(delta) || std::abs(delta) >= 1e-3)
        throw ValidationError("nucleus '" + label + "': |delta| must be finite and < 1e-3 " +
                              "(shifts are dimensionless, 1 ppm = 1e-6)");
}

SpinSystem::SpinSystem(std::vector<Nucleus> nuclei) : nuclei_(std::move(nuclei)) {
    if (nuclei_.empty())
        throw ValidationError("a spin system needs at least one nucleus");
    for (const auto& n : nuclei_) n.validate();
    j_hz_.assign(nuclei_.size() * nuclei_.size(), 0.0);
}

void SpinSystem::set_coupling(int i, int j, double j_hz) {
    const int n = size();
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw ValidationError("coupling index out of range");
    if (i == j)
        throw ValidationError("diagonal couplings J_kk are not allowed");
    if (!std::isfinite(j_hz))
        throw ValidationError("coupling must be finite");
    j_hz_[static_cast<size_t>(i) * nuclei_.size() + static_cast<size_t>(j)] = j_hz;
    j_hz_[static_cast<size_t>(j) * nuclei_.size() + static_cast<size_t>(i)] = j_hz;
}

std::vector<int> SpinSystem::coupled_partners(int i) const {
    std::vector<int> out;
    for (int k = 0; k < size(); ++k)
        if (k != i && coupling(i, k) != 0.0) out.push_back(k);
    return out;
}

bool SpinSystem::has_any_coupling() const {
    for (double j : j_hz_)
        if (j != 0.0) return true;
    return false;
}

uint64_t SpinSystem::hash() const {
    uint64_t h = 1469598103934665603ull;
    for (const auto& n : nuclei_) {
        h = fnv1a(n.isotope.symbol.data(), n.isotope.symbol.size(), h);
        h = hash_double(n.isotope.gamma, h);
        h = fnv1a(&n.isotope.two_spin, sizeof n.isotope.two_spin, h);
        h = hash_double(n.delta, h);
    }
    for (double j : j_hz_) h = hash_double(j, h);
    return h;
}

void SpectrometerSettings::validate() const {
    if (!(ref_frequency_hz > 0.0))
        throw ValidationError("reference frequency must be positive");
    if (!(fwhm_hz > 0.0))
        throw ValidationError("line width (FWHM) must be positive");
    if (!(epsilon_metric > 0.0))
        throw ValidationError("metric regularizer epsilon must be positive");
}

uint64_t SpectrometerSettings::hash() const {
    uint64_t h = 1469598103934665603ull;
    h = hash_double(ref_frequency_hz, h);
    h = hash_double(fwhm_hz, h);
    h = hash_double(epsilon_metric, h);
    if (detect_isotope) h = fnv1a(detect_isotope->data(), detect_isotope->size(), h);
    return h;
}

double larmor_frequency(const Nucleus& nucleus, const SpectrometerSettings& settings) {
    return nucleus.isotope.gamma * (1.0 + nucleus.delta) * settings.field_tesla();
}

}  // namespace spinspectra
