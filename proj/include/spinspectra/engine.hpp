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
#ifndef SPINSPECTRA_ENGINE_HPP
#define SPINSPECTRA_ENGINE_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spinspectra/basis.hpp"
#include "spinspectra/types.hpp"

namespace spinspectra {

// A self-contained description of the Hamiltonian
//   H = -sum_i omega_i Iz_i + sum_{k<l} two_pi_j(k,l) I_k . I_l
// over an explicit list of sites. Produced either by restricting a molecular
// SpinSystem to a subset of its spins (couplings to outside spins dropped)
// or synthesized directly, e.g. with composite higher-spin sites.
struct Subsystem {
    std::vector<int> two_spins;
    std::vector<double> gamma;
    std::vector<double> omega;                 // Larmor frequencies, rad/s
    std::vector<std::string> isotope_symbol;   // for detection filtering
    Eigen::MatrixXd two_pi_j;                  // symmetric, rad/s, zero diagonal

    // Product of (2S+1) over spins that were traced out when this subsystem
    // was cut from a larger system. Multiplies every transition weight so
    // that stick totals stay on the full-system trace scale.
    double outside_dim_factor = 1.0;

    int sites() const { return static_cast<int>(two_spins.size()); }
};

// Restriction of a molecular system to the given (sorted, unique) site
// subset. An empty optional selects all spins.
Subsystem make_subsystem(const SpinSystem& system, const SpectrometerSettings& settings,
                         const std::optional<std::vector<int>>& subset = std::nullopt);

// Ladder weights gamma_i, zeroed for sites not matching the detect filter.
std::vector<double> detection_weights(const Subsystem& sub,
                                      const std::optional<std::string>& detect_isotope);

struct EngineOptions {
    double eta = kTwoPi / 2.0;       // broadening, rad/s; sets the coalesce radius
    double weight_floor_rel = 1e-14; // drop sticks below this fraction of the total
    double coalesce_rel = 1e-3;      // merge sticks closer than coalesce_rel * eta
    uint64_t dimension_cap = kDefaultDimensionCap;
    bool check_residual = false;     // verify ||HV - VE|| / ||H|| per sector
    int threads = 1;                 // sector-level parallelism
};

struct SectorEigen {
    int two_mz = 0;
    std::vector<uint64_t> states;
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

struct BlockEigensystem {
    ProductBasis basis;
    std::vector<SectorEigen> sectors;  // Mz descending

    uint64_t total_dim() const;
    int max_sector_dim() const;
};

// Dense Hamiltonian block for one Mz sector.
Eigen::MatrixXd sector_matrix(const Subsystem& sub, const ProductBasis& basis,
                              const Sector& sector);

// Full dense Hamiltonian in packed-state order; small systems only.
Eigen::MatrixXd full_matrix(const Subsystem& sub, const ProductBasis& basis);

// Raising operator M+(w) = sum_j w_j I+_j as sparse triplets over the full
// packed basis (row = raised state, col = source state).
struct Triplet {
    uint64_t row, col;
    double value;
};
std::vector<Triplet> raising_triplets(const ProductBasis& basis, const std::vector<double>& weights);

// Independent per-sector diagonalization of the block-diagonal Hamiltonian.
// Throws DimensionCapError / ValidationError on bad input.
BlockEigensystem diagonalize_blocks(const Subsystem& sub, const EngineOptions& opts = {});

struct Stick {
    double omega = 0.0;   // transition angular frequency, rad/s
    double weight = 0.0;  // <E_n|M-|E_m><E_m|M+|E_n> x outside factor
};

struct StickSpectrum {
    std::vector<Stick> sticks;   // sorted by frequency
    double total_weight = 0.0;   // sum before floor/coalesce; equals the trace
    uint64_t system_hash = 0;
    uint64_t settings_hash = 0;
};

// Transition sticks of the spectral function: for every sector pair with
// delta-Mz = +1 the cross block <hi| M+ |lo> is formed in the eigenbasis and
// each element contributes a stick at E_lo(n) - E_hi(m) with weight
// B(m,n) * A(m,n), where B uses the left weights and A the right weights.
// With left == right this is |A|^2 >= 0.
StickSpectrum sticks_from_eigensystem(const BlockEigensystem& eig, const Subsystem& sub,
                                      const std::vector<double>& left_weights,
                                      const std::vector<double>& right_weights,
                                      const EngineOptions& opts);

// Batched variant sharing the eigensystem and the right-hand cross blocks
// across several left weight vectors (one output per entry).
std::vector<StickSpectrum> sticks_from_eigensystem_multi(
    const BlockEigensystem& eig, const Subsystem& sub,
    const std::vector<std::vector<double>>& left_weight_sets,
    const std::vector<double>& right_weights, const EngineOptions& opts);

// Convenience: diagonalize + assemble in one call.
StickSpectrum compute_sticks(const Subsystem& sub, const std::vector<double>& left_weights,
                             const std::vector<double>& right_weights, const EngineOptions& opts);

// Analytic Tr[M-(left) M+(right)] on the subsystem's trace scale (includes
// the outside factor). Cross-site terms vanish; per site the trace of I-I+
// is (2/3) j(j+1)(2j+1) with the identity dimension of the other sites.
double ladder_trace(const Subsystem& sub, const std::vector<double>& left_weights,
                    const std::vector<double>& right_weights);

}  // namespace spinspectra

#endif
