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
#include "spinspectra/cluster.hpp"

#include <algorithm>
#include <cmath>

#include "spinspectra/equivalence.hpp"
#include "spinspectra/parallel.hpp"

namespace spinspectra {

double importance_metric(const SpinSystem& system, const SpectrometerSettings& settings,
                         int i, int j) {
    if (i == j) throw ValidationError("importance metric needs two distinct spins");
    const double j_hz = system.coupling(i, j);
    if (j_hz == 0.0) return 0.0;
    const double wi = larmor_frequency(system.nucleus(i), settings);
    const double wj = larmor_frequency(system.nucleus(j), settings);
    const double num = kTwoPi * j_hz;
    return num * num / (std::abs(wi - wj) + settings.epsilon_metric);
}

Cluster build_cluster(const SpinSystem& system, const SpectrometerSettings& settings, int center,
                      int max_size, ClusterGrowth growth) {
    const int n = system.size();
    if (center < 0 || center >= n) throw ValidationError("cluster center out of range");
    if (max_size < 1 || max_size > n)
        throw ValidationError("cluster size must be between 1 and the number of spins");

    Cluster cluster;
    cluster.center = center;
    std::vector<bool> in(static_cast<size_t>(n), false);
    in[static_cast<size_t>(center)] = true;
    cluster.members.push_back(center);

    // Scores against the current member set; with the max-over-members rule
    // only the newest member can raise a candidate's score.
    std::vector<double> score(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < n; ++k)
        if (k != center) score[static_cast<size_t>(k)] = importance_metric(system, settings, center, k);

    while (static_cast<int>(cluster.members.size()) < max_size) {
        int best = -1;
        double best_score = 0.0;
        for (int k = 0; k < n; ++k) {
            if (in[static_cast<size_t>(k)]) continue;
            if (score[static_cast<size_t>(k)] > best_score) {
                best_score = score[static_cast<size_t>(k)];
                best = k;
            }
        }
        if (best < 0) break;  // every remaining candidate is uncoupled

        in[static_cast<size_t>(best)] = true;
        cluster.members.push_back(best);
        cluster.ranking_trace.emplace_back(best, best_score);

        if (growth == ClusterGrowth::MaxOverMembers)
            for (int k = 0; k < n; ++k)
                if (!in[static_cast<size_t>(k)])
                    score[static_cast<size_t>(k)] = std::max(
                        score[static_cast<size_t>(k)], importance_metric(system, settings, best, k));
    }
    std::sort(cluster.members.begin(), cluster.members.end());
    return cluster;
}

ClusterPlan make_cluster_plan(const SpinSystem& system, const SpectrometerSettings& settings,
                              int max_size, ClusterGrowth growth) {
    ClusterPlan plan;
    for (int i = 0; i < system.size(); ++i) {
        plan.clusters.push_back(build_cluster(system, settings, i, max_size, growth));
        plan.dedup[plan.clusters.back().members].push_back(i);
    }
    return plan;
}

namespace {

// Sticks for every center sharing one member set. The eigensystem and the
// right-hand cross blocks are computed once; only the single-site left
// operator differs per center. With per-cluster equivalence reduction each
// center needs its own reduction (the center must stay a lone site, since
// its I-_i is not block-diagonal in the group irreps).
struct MemberSetResult {
    std::vector<StickSpectrum> per_center;
    int diagonalizations = 0;
    int max_sector_dim = 0;
    uint64_t mem_bytes = 0;
};

uint64_t eigensystem_mem_estimate(const std::vector<Sector>& sectors) {
    uint64_t evec = 0, dmax = 0;
    for (const auto& s : sectors) {
        const auto d = static_cast<uint64_t>(s.dim());
        evec += d * d;
        dmax = std::max(dmax, d);
    }
    // One dense block under factorization, the stored eigenvectors, and one
    // cross-block work matrix.
    return 8 * (dmax * dmax + evec + dmax * dmax);
}

MemberSetResult solve_member_set(const SpinSystem& system, const SpectrometerSettings& settings,
                                 const std::vector<int>& members, const std::vector<int>& centers,
                                 const ClusterOptions& opts) {
    MemberSetResult result;
    const Subsystem sub = make_subsystem(system, settings, members);
    const auto right = detection_weights(sub, opts.detect_isotope);

    auto local_of = [&](int site) {
        return static_cast<int>(std::lower_bound(members.begin(), members.end(), site) -
                                members.begin());
    };

    const bool reduce = opts.use_equivalence &&
                        static_cast<int>(members.size()) > opts.reduction_min_spins;

    if (!reduce) {
        const BlockEigensystem eig = diagonalize_blocks(sub, opts.engine);
        result.diagonalizations = 1;
        result.max_sector_dim = eig.max_sector_dim();
        result.mem_bytes = eigensystem_mem_estimate(split_sectors(eig.basis));

        std::vector<std::vector<double>> lefts;
        std::vector<int> active;
        for (int c : centers) {
            const int lc = local_of(c);
            if (right[static_cast<size_t>(lc)] == 0.0) {
                result.per_center.emplace_back();  // filtered out: C_i = 0
                continue;
            }
            std::vector<double> left(static_cast<size_t>(sub.sites()), 0.0);
            left[static_cast<size_t>(lc)] = sub.gamma[static_cast<size_t>(lc)];
            lefts.push_back(std::move(left));
            active.push_back(static_cast<int>(result.per_center.size()));
            result.per_center.emplace_back();
        }
        auto computed = sticks_from_eigensystem_multi(eig, sub, lefts, right, opts.engine);
        for (size_t a = 0; a < active.size(); ++a)
            result.per_center[static_cast<size_t>(active[a])] = std::move(computed[a]);
        return result;
    }

    for (int c : centers) {
        const int lc = local_of(c);
        if (right[static_cast<size_t>(lc)] == 0.0) {
            result.per_center.emplace_back();
            continue;
        }
        std::vector<double> left(static_cast<size_t>(sub.sites()), 0.0);
        left[static_cast<size_t>(lc)] = sub.gamma[static_cast<size_t>(lc)];
        const auto groups = detect_equivalence_local(sub, lc);
        result.per_center.push_back(
            reduced_sticks(sub, groups, left, right, opts.engine, opts.assignment_cap));
        result.diagonalizations += 1;  // at least; assignments share nothing here
    }
    return result;
}

}  // namespace

StickSpectrum spin_resolved_sticks(const SpinSystem& system, const SpectrometerSettings& settings,
                                   const Cluster& cluster, const ClusterOptions& opts) {
    const auto res =
        solve_member_set(system, settings, cluster.members, {cluster.center}, opts);
    StickSpectrum out = res.per_center.front();
    out.system_hash = system.hash();
    out.settings_hash = settings.hash();
    return out;
}

StickSpectrum assemble_sticks(const SpinSystem& system, const SpectrometerSettings& settings,
                              int max_size, const ClusterOptions& opts, AssembleStats* stats) {
    const ClusterPlan plan = make_cluster_plan(system, settings, max_size, opts.growth);

    std::vector<const std::vector<int>*> member_sets;
    std::vector<const std::vector<int>*> center_lists;
    for (const auto& [members, centers] : plan.dedup) {
        member_sets.push_back(&members);
        center_lists.push_back(&centers);
    }

    std::vector<MemberSetResult> results(member_sets.size());
    parallel_for(static_cast<int>(member_sets.size()), opts.threads, [&](int i) {
        results[static_cast<size_t>(i)] = solve_member_set(
            system, settings, *member_sets[static_cast<size_t>(i)],
            *center_lists[static_cast<size_t>(i)], opts);
    });

    // Deterministic combination: order by center index, then canonical sort.
    std::vector<const StickSpectrum*> by_center(static_cast<size_t>(system.size()), nullptr);
    for (size_t e = 0; e < member_sets.size(); ++e)
        for (size_t c = 0; c < center_lists[e]->size(); ++c)
            by_center[static_cast<size_t>((*center_lists[e])[c])] =
                &results[e].per_center[c];

    StickSpectrum total;
    for (const StickSpectrum* part : by_center) {
        if (!part) continue;
        total.sticks.insert(total.sticks.end(), part->sticks.begin(), part->sticks.end());
        total.total_weight += part->total_weight;
    }
    std::sort(total.sticks.begin(), total.sticks.end(), [](const Stick& a, const Stick& b) {
        return a.omega != b.omega ? a.omega < b.omega : a.weight < b.weight;
    });
    total.system_hash = system.hash();
    total.settings_hash = settings.hash();

    if (stats) {
        stats->clusters = system.size();
        stats->distinct_member_sets = static_cast<int>(member_sets.size());
        stats->diagonalizations = 0;
        stats->reused_centers = system.size() - static_cast<int>(member_sets.size());
        stats->max_sector_dim = 0;
        stats->peak_mem_bytes = 0;
        for (const auto& r : results) {
            stats->diagonalizations += r.diagonalizations;
            stats->max_sector_dim = std::max(stats->max_sector_dim, r.max_sector_dim);
            stats->peak_mem_bytes = std::max(stats->peak_mem_bytes, r.mem_bytes);
        }
    }
    return total;
}

}  // namespace spinspectra
