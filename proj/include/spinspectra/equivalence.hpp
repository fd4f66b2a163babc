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
#ifndef SPINSPECTRA_EQUIVALENCE_HPP
#define SPINSPECTRA_EQUIVALENCE_HPP

#include <cstdint>
#include <vector>

#include "spinspectra/engine.hpp"
#include "spinspectra/types.hpp"

namespace spinspectra {

inline constexpr double kEquivalenceJTolHz = 1e-12;  // see detect_equivalence
inline constexpr size_t kDefaultAssignmentCap = 10000;

// A maximal set of magnetically equivalent spins: same isotope, same shift,
// and identical couplings to every spin outside the set. The intra-group
// coupling is a single scalar and is spectroscopically inert.
struct EquivalenceGroup {
    std::vector<int> members;  // sorted, size >= 2
    std::string isotope_symbol;
    double delta = 0.0;
    double intra_j_hz = 0.0;
    std::vector<double> external_j_hz;  // indexed by parent site, 0 for members

    int size() const { return static_cast<int>(members.size()); }
};

// Maximal partition into magnetic-equivalence groups (spin-1/2 members
// only), ordered by lowest member index; singletons are omitted. The pair
// relation is exact on isotope and shift and uses an absolute tolerance of
// 1e-12 Hz on the coupling rows.
std::vector<EquivalenceGroup> detect_equivalence(const SpinSystem& system);

// One irreducible component of the n-fold spin-1/2 product.
struct IrrepTerm {
    int two_j = 0;
    uint64_t multiplicity = 0;
};

// All total spins j = n/2, n/2-1, ..., (n mod 2)/2 with multiplicity
// g(n,j) = binom(n, n/2-j) - binom(n, n/2-j-1); sum of g*(2j+1) is 2^n.
std::vector<IrrepTerm> irrep_decomposition(int n);

// ---- Subsystem-level machinery (shared with the cluster solver) ----

// Equivalence groups of a subsystem, in local site indices. `exclude_site`
// (if >= 0) is never grouped but still participates as an external site in
// the coupling-row comparison.
struct LocalGroup {
    std::vector<int> members;
};
std::vector<LocalGroup> detect_equivalence_local(const Subsystem& sub, int exclude_site = -1);

// Exact stick spectrum through the multiplicity-weighted sum over all
// irrep assignments. Left/right ladder weights are per original site and
// must be uniform within each group. Falls back to plain diagonalization
// when `groups` is empty; ungroups the smallest groups first if the
// assignment count would exceed `assignment_cap`.
StickSpectrum reduced_sticks(const Subsystem& sub, const std::vector<LocalGroup>& groups,
                             const std::vector<double>& left_weights,
                             const std::vector<double>& right_weights, const EngineOptions& opts,
                             size_t assignment_cap = kDefaultAssignmentCap);

// Spec-level entry point: reduced spectrum of a whole molecular system with
// symmetric detection weights.
StickSpectrum reduced_spectrum(const SpinSystem& system, const SpectrometerSettings& settings,
                               const std::vector<EquivalenceGroup>& groups,
                               const EngineOptions& opts,
                               size_t assignment_cap = kDefaultAssignmentCap);

// Bookkeeping helper: sum over assignments of multiplicity x effective
// dimension (must equal the full product-space dimension).
double reduced_dimension_total(const Subsystem& sub, const std::vector<LocalGroup>& groups);

}  // namespace spinspectra

#endif
