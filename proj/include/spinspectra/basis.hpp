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
#ifndef SPINSPECTRA_BASIS_HPP
#define SPINSPECTRA_BASIS_HPP

#include <cstdint>
#include <vector>

#include "spinspectra/types.hpp"

namespace spinspectra {

inline constexpr uint64_t kDefaultDimensionCap = uint64_t(1) << 22;

// Product basis over sites with spins S_i (stored doubled). A state is a
// mixed-radix packed index; digit d_i in [0, 2S_i] encodes the magnetic
// quantum number two_m = two_s - 2*d_i, so digit 0 is m = +S and packed
// state 0 is the fully polarized |+S,+S,...> configuration. Site 0 is the
// most significant digit, which makes the natural packed order lexicographic
// in the m-configuration.
class ProductBasis {
public:
    ProductBasis() = default;
    ProductBasis(std::vector<int> two_spins, uint64_t dimension_cap = kDefaultDimensionCap);

    int sites() const { return static_cast<int>(two_spins_.size()); }
    int two_spin(int site) const { return two_spins_[static_cast<size_t>(site)]; }
    const std::vector<int>& two_spins() const { return two_spins_; }
    uint64_t dim() const { return dim_; }

    int digit(uint64_t state, int site) const {
        return static_cast<int>((state / stride_[static_cast<size_t>(site)]) %
                                static_cast<uint64_t>(two_spins_[static_cast<size_t>(site)] + 1));
    }
    int two_m(uint64_t state, int site) const {
        return two_spins_[static_cast<size_t>(site)] - 2 * digit(state, site);
    }
    int two_mz(uint64_t state) const;

    // Packed index of the state with site's digit replaced.
    uint64_t with_digit(uint64_t state, int site, int new_digit) const {
        const auto s = static_cast<size_t>(site);
        const auto old_d = static_cast<uint64_t>(digit(state, site));
        return state + (static_cast<uint64_t>(new_digit) - old_d) * stride_[s];
    }

private:
    std::vector<int> two_spins_;
    std::vector<uint64_t> stride_;
    uint64_t dim_ = 0;
};

// One total-Iz eigenspace: all product states with the given doubled Mz,
// in lexicographic m-configuration order.
struct Sector {
    int two_mz = 0;
    std::vector<uint64_t> states;

    int dim() const { return static_cast<int>(states.size()); }
};

// All sectors, ordered by Mz descending. Sector dimensions sum to the full
// product-space dimension.
std::vector<Sector> split_sectors(const ProductBasis& basis);

// Dense map packed state -> (sector index, local index) for the whole basis.
struct SectorIndex {
    std::vector<uint32_t> sector_of;
    std::vector<uint32_t> local_of;
};
SectorIndex index_sectors(const ProductBasis& basis, const std::vector<Sector>& sectors);

// Ladder coefficient <s, m+1| I+ |s, m> = sqrt(S(S+1) - m(m+1)), computed
// from doubled quantum numbers.
double raise_coefficient(int two_s, int two_m);

// binom(n, k) in floating point, exact for the small arguments used here.
double binomial(int n, int k);

}  // namespace spinspectra

#endif
