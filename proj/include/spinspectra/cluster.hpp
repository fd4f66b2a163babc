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
#ifndef SPINSPECTRA_CLUSTER_HPP
#define SPINSPECTRA_CLUSTER_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinspectra/engine.hpp"
#include "spinspectra/types.hpp"

namespace spinspectra {

// Relevance of spin j for the physics around spin i:
// (2 pi J_ij)^2 / (|omega_i - omega_j| + epsilon), zero when J_ij = 0.
double importance_metric(const SpinSystem& system, const SpectrometerSettings& settings,
                         int i, int j);

// How candidate scores are computed while a cluster grows.
enum class ClusterGrowth {
    MaxOverMembers,  // score(k) = max over current members j of metric(j, k)
    DirectToCenter,  // score(k) = metric(center, k)
};

struct Cluster {
    int center = 0;
    std::vector<int> members;  // sorted, contains center
    std::vector<std::pair<int, double>> ranking_trace;  // (added spin, score)
};

// Greedy agglomeration around `center`: repeatedly add the highest-scoring
// outside spin (ties to the lower index) until max_size is reached or every
// remaining score is zero. Deterministic.
Cluster build_cluster(const SpinSystem& system, const SpectrometerSettings& settings, int center,
                      int max_size, ClusterGrowth growth = ClusterGrowth::MaxOverMembers);

// One cluster per spin plus the dedup map from canonical member sets to the
// centers sharing them (those share one diagonalization).
struct ClusterPlan {
    std::vector<Cluster> clusters;
    std::map<std::vector<int>, std::vector<int>> dedup;
};
ClusterPlan make_cluster_plan(const SpinSystem& system, const SpectrometerSettings& settings,
                              int max_size, ClusterGrowth growth = ClusterGrowth::MaxOverMembers);

struct ClusterOptions {
    EngineOptions engine;
    ClusterGrowth growth = ClusterGrowth::MaxOverMembers;
    std::optional<std::string> detect_isotope;
    bool use_equivalence = true;
    int reduction_min_spins = 12;  // reduce only above this cluster size
    size_t assignment_cap = 10000;
    int threads = 1;  // across distinct member sets
};

struct AssembleStats {
    int clusters = 0;
    int distinct_member_sets = 0;
    int diagonalizations = 0;  // > distinct sets when per-center reduction runs
    int reused_centers = 0;
    int max_sector_dim = 0;
    uint64_t peak_mem_bytes = 0;  // analytic estimate, see README
};

// The spin-resolved contribution C_i: left operator gamma_i I-_i (center
// only), right operator sum over cluster members of gamma_j I+_j. Weights
// carry the identity factor of the spins outside the cluster.
StickSpectrum spin_resolved_sticks(const SpinSystem& system, const SpectrometerSettings& settings,
                                   const Cluster& cluster, const ClusterOptions& opts);

// The full approximation C ~ sum_i C_i: builds the plan, diagonalizes each
// distinct member set once (reusing it for every center that shares it) and
// accumulates all spin-resolved sticks into one deterministic list.
StickSpectrum assemble_sticks(const SpinSystem& system, const SpectrometerSettings& settings,
                              int max_size, const ClusterOptions& opts,
                              AssembleStats* stats = nullptr);

}  // namespace spinspectra

#endif
