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
#ifndef SPINSPECTRA_TYPES_HPP
#define SPINSPECTRA_TYPES_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinspectra {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Proton gyromagnetic ratio, rad s^-1 T^-1 (CODATA). The static field is
// derived from the reference frequency through this constant; only the
// product gamma*(1+delta)*Bz is observable, so the convention is neutral.
inline constexpr double kGammaProton = 2.6752218708e8;

// 31P fixed through the NMR frequency ratio relative to 1H.
inline constexpr double kGammaPhosphorus31 = 0.40480742 * kGammaProton;

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a requested product space exceeds the configured state cap.
class DimensionCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An NMR-active nuclear species. Spin quantum numbers are stored doubled
// (two_spin = 2S) so that magnetization sector arithmetic stays exact.
struct Isotope {
    std::string symbol;  // e.g. "1H", "31P"
    double gamma = 0.0;  // rad s^-1 T^-1
    int two_spin = 1;    // 2S, positive

    void validate() const;
    bool operator==(const Isotope&) const = default;
};

// The two isotopes used throughout the reference material; molecule files
// may define additional custom isotopes.
std::optional<Isotope> builtin_isotope(const std::string& symbol);

struct Nucleus {
    Isotope isotope;
    double delta = 0.0;  // chemical shift, dimensionless (1 ppm = 1e-6)
    std::string label;

    void validate() const;
};

// A molecular spin system: an ordered list of nuclei plus the symmetric
// scalar J-coupling table (Hz, zero diagonal).
class SpinSystem {
public:
    SpinSystem() = default;
    explicit SpinSystem(std::vector<Nucleus> nuclei);

    int size() const { return static_cast<int>(nuclei_.size()); }
    const Nucleus& nucleus(int i) const { return nuclei_.at(static_cast<size_t>(i)); }
    const std::vector<Nucleus>& nuclei() const { return nuclei_; }

    void set_coupling(int i, int j, double j_hz);
    double coupling(int i, int j) const {
        return j_hz_[static_cast<size_t>(i) * nuclei_.size() + static_cast<size_t>(j)];
    }

    // Sites k with J_ik != 0.
    std::vector<int> coupled_partners(int i) const;

    bool has_any_coupling() const;
    uint64_t hash() const;

private:
    std::vector<Nucleus> nuclei_;
    std::vector<double> j_hz_;  // dense symmetric, row-major
};

struct SpectrometerSettings {
    double ref_frequency_hz = 400e6;  // proton reference frequency
    double fwhm_hz = 1.0;             // Lorentzian full width at half maximum
    std::optional<std::string> detect_isotope;  // restrict M+- to one isotope
    double epsilon_metric = 0.1;      // cluster metric regularizer, rad/s

    void validate() const;

    // Static field from the proton reference: Bz = 2*pi*nu_ref / gamma_H.
    double field_tesla() const { return kTwoPi * ref_frequency_hz / kGammaProton; }

    // Lorentzian decay rate: eta = pi * FWHM(Hz) for eta/(eta^2+x^2) in
    // angular frequency.
    double eta() const { return kTwoPi / 2.0 * fwhm_hz; }

    // Reference angular frequency (the ppm-axis origin).
    double omega_ref() const { return kTwoPi * ref_frequency_hz; }

    uint64_t hash() const;
};

// Larmor angular frequency omega = gamma*(1+delta)*Bz, rad/s.
double larmor_frequency(const Nucleus& nucleus, const SpectrometerSettings& settings);

}  // namespace spinspectra

#endif
