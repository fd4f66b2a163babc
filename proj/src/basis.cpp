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
#include "spinspectra/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace spinspectra {

ProductBasis::ProductBasis(std::vector<int> two_spins, uint64_t dimension_cap)
    : two_spins_(std::move(two_spins)) {
    if (two_spins_.empty()) throw ValidationError("product basis needs at least one site");
    // Spin-0 sites are allowed: composite singlet irreps are 1-dimensional.
    for (int s : two_spins_)
        if (s < 0) throw ValidationError("site spins must be non-negative half-integers");

    stride_.assign(two_spins_.size(), 1);
    dim_ = 1;
    // Site 0 most significant: stride_i = prod of dims of later sites.
    for (int i = sites() - 1; i >= 0; --i) {
        stride_[static_cast<size_t>(i)] = dim_;
        const auto local = static_cast<uint64_t>(two_spins_[static_cast<size_t>(i)] + 1);
        if (dim_ > dimension_cap / local)
            throw DimensionCapError("product space dimension exceeds the cap of " +
                                    std::to_string(dimension_cap) + " states");
        dim_ *= local;
    }
}

int ProductBasis::two_mz(uint64_t state) const {
    int total = 0;
    for (int i = 0; i < sites(); ++i) total += two_m(state, i);
    return total;
}

std::vector<Sector> split_sectors(const ProductBasis& basis) {
    // Keyed by -two_mz so iteration gives Mz descending.
    std::map<int, std::vector<uint64_t>> buckets;
    for (uint64_t s = 0; s < basis.dim(); ++s) buckets[-basis.two_mz(s)].push_back(s);

    std::vector<Sector> sectors;
    sectors.reserve(buckets.size());
    for (auto& [neg_mz, states] : buckets)
        sectors.push_back(Sector{-neg_mz, std::move(states)});
    return sectors;
}

SectorIndex index_sectors(const ProductBasis& basis, const std::vector<Sector>& sectors) {
    SectorIndex idx;
    idx.sector_of.assign(basis.dim(), 0);
    idx.local_of.assign(basis.dim(), 0);
    for (size_t si = 0; si < sectors.size(); ++si) {
        const auto& sec = sectors[si];
        for (size_t li = 0; li < sec.states.size(); ++li) {
            idx.sector_of[sec.states[li]] = static_cast<uint32_t>(si);
            idx.local_of[sec.states[li]] = static_cast<uint32_t>(li);
        }
    }
    return idx;
}

double raise_coefficient(int two_s, int two_m) {
    // S(S+1) - m(m+1) = (two_s(two_s+2) - two_m(two_m+2)) / 4
    const double q = (static_cast<double>(two_s) * (two_s + 2) -
                      static_cast<double>(two_m) * (two_m + 2)) / 4.0;
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

}  // namespace spinspectra
