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
#include "spinspectra/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace spinspectra {

namespace {

// Maximal partition into sets whose members share the site features and
// couple identically to every NON-member (couplings inside a set are
// unrestricted; they are spectroscopically inert). Grown by greedy pairwise
// merging of components, deterministic in index order; components keep
// their lowest-member ordering throughout.
std::vector<std::vector<int>> group_components(
    int n, const std::function<bool(int, int)>& sites_match,
    const std::function<double(int, int)>& j_hz, int exclude_site) {
    std::vector<std::vector<int>> comps;
    for (int i = 0; i < n; ++i)
        if (i != exclude_site) comps.push_back({i});

    auto valid_group = [&](const std::vector<int>& members) {
        for (size_t a = 1; a < members.size(); ++a)
            if (!sites_match(members[0], members[a])) return false;
        std::vector<bool> inside(static_cast<size_t>(n), false);
        for (int m : members) inside[static_cast<size_t>(m)] = true;
        for (int k = 0; k < n; ++k) {
            if (inside[static_cast<size_t>(k)]) continue;
            const double j0 = j_hz(members[0], k);
            for (size_t a = 1; a < members.size(); ++a)
                if (std::abs(j_hz(members[a], k) - j0) > kEquivalenceJTolHz) return false;
        }
        return true;
    };

    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < comps.size() && !merged; ++i) {
            for (size_t j = i + 1; j < comps.size() && !merged; ++j) {
                std::vector<int> u = comps[i];
                u.insert(u.end(), comps[j].begin(), comps[j].end());
                std::sort(u.begin(), u.end());
                if (valid_group(u)) {
                    comps[i] = std::move(u);
                    comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                }
            }
        }
    }

    std::erase_if(comps, [](const std::vector<int>& c) { return c.size() < 2; });
    return comps;
}

}  // namespace

std::vector<EquivalenceGroup> detect_equivalence(const SpinSystem& system) {
    const int n = system.size();
    auto match = [&](int a, int b) {
        const Nucleus& na = system.nucleus(a);
        const Nucleus& nb = system.nucleus(b);
        return na.isotope.two_spin == 1 && nb.isotope.two_spin == 1 &&
               na.isotope == nb.isotope && na.delta == nb.delta;
    };
    auto j = [&](int a, int b) { return system.coupling(a, b); };

    std::vector<EquivalenceGroup> groups;
    for (auto& members : group_components(n, match, j, -1)) {
        EquivalenceGroup g;
        g.members = std::move(members);
        const Nucleus& rep = system.nucleus(g.members.front());
        g.isotope_symbol = rep.isotope.symbol;
        g.delta = rep.delta;
        g.intra_j_hz = g.members.size() >= 2
                           ? system.coupling(g.members[0], g.members[1])
                           : 0.0;
        g.external_j_hz.assign(static_cast<size_t>(n), 0.0);
        for (int k = 0; k < n; ++k) {
            if (std::find(g.members.begin(), g.members.end(), k) != g.members.end()) continue;
            g.external_j_hz[static_cast<size_t>(k)] = system.coupling(g.members.front(), k);
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

std::vector<IrrepTerm> irrep_decomposition(int n) {
    if (n < 2) throw ValidationError("irrep decomposition needs a group of size >= 2");
    std::vector<IrrepTerm> terms;
    for (int two_j = n; two_j >= n % 2; two_j -= 2) {
        const int k = (n - two_j) / 2;
        const auto mult =
            static_cast<uint64_t>(binomial(n, k) - (k > 0 ? binomial(n, k - 1) : 0.0));
        if (two_j == 0 && mult == 0) continue;
        terms.push_back(IrrepTerm{two_j, mult});
    }
    return terms;
}

std::vector<LocalGroup> detect_equivalence_local(const Subsystem& sub, int exclude_site) {
    const int n = sub.sites();
    auto match = [&](int a, int b) {
        const auto sa = static_cast<size_t>(a);
        const auto sb = static_cast<size_t>(b);
        return sub.two_spins[sa] == 1 && sub.two_spins[sb] == 1 &&
               sub.gamma[sa] == sub.gamma[sb] && sub.omega[sa] == sub.omega[sb] &&
               sub.isotope_symbol[sa] == sub.isotope_symbol[sb];
    };
    auto j = [&](int a, int b) { return sub.two_pi_j(a, b) / kTwoPi; };

    std::vector<LocalGroup> out;
    for (auto& members : group_components(n, match, j, exclude_site))
        out.push_back(LocalGroup{std::move(members)});
    return out;
}

namespace {

struct AssignmentLayout {
    // Effective sites in order of first appearance: group index (>= 0) at
    // its lowest member, or -1 - site for an ungrouped site.
    std::vector<int> eff_slot;          // encodes the mapping
    std::vector<int> site_to_eff;       // original local site -> effective site
    std::vector<std::vector<IrrepTerm>> irreps;  // per group
};

AssignmentLayout layout_assignments(const Subsystem& sub, const std::vector<LocalGroup>& groups) {
    AssignmentLayout lay;
    const int n = sub.sites();
    std::vector<int> group_of(static_cast<size_t>(n), -1);
    for (size_t gi = 0; gi < groups.size(); ++gi)
        for (int m : groups[gi].members) group_of[static_cast<size_t>(m)] = static_cast<int>(gi);

    lay.site_to_eff.assign(static_cast<size_t>(n), -1);
    std::vector<bool> emitted(groups.size(), false);
    for (int s = 0; s < n; ++s) {
        const int g = group_of[static_cast<size_t>(s)];
        if (g < 0) {
            lay.site_to_eff[static_cast<size_t>(s)] = static_cast<int>(lay.eff_slot.size());
            lay.eff_slot.push_back(-1 - s);
        } else if (!emitted[static_cast<size_t>(g)]) {
            emitted[static_cast<size_t>(g)] = true;
            const int eff = static_cast<int>(lay.eff_slot.size());
            for (int m : groups[static_cast<size_t>(g)].members)
                lay.site_to_eff[static_cast<size_t>(m)] = eff;
            lay.eff_slot.push_back(g);
        }
    }
    for (const auto& g : groups) {
        for (int m : g.members)
            if (sub.two_spins[static_cast<size_t>(m)] != 1)
                throw ValidationError("equivalence reduction is limited to spin-1/2 groups");
        lay.irreps.push_back(irrep_decomposition(static_cast<int>(g.members.size())));
    }
    return lay;
}

// Effective subsystem for one choice of total spin per group. Couplings are
// taken from representative members; the intra-group term is a constant
// within each irrep and is dropped.
Subsystem effective_subsystem(const Subsystem& sub, const std::vector<LocalGroup>& groups,
                              const AssignmentLayout& lay, const std::vector<int>& choice) {
    const int ne = static_cast<int>(lay.eff_slot.size());
    Subsystem eff;
    eff.two_pi_j = Eigen::MatrixXd::Zero(ne, ne);
    eff.outside_dim_factor = sub.outside_dim_factor;

    auto representative = [&](int slot) {
        return slot >= 0 ? groups[static_cast<size_t>(slot)].members.front() : -1 - slot;
    };
    for (int e = 0; e < ne; ++e) {
        const int slot = lay.eff_slot[static_cast<size_t>(e)];
        const auto rep = static_cast<size_t>(representative(slot));
        eff.two_spins.push_back(slot >= 0 ? lay.irreps[static_cast<size_t>(slot)]
                                                 [static_cast<size_t>(choice[static_cast<size_t>(slot)])]
                                                 .two_j
                                          : sub.two_spins[rep]);
        eff.gamma.push_back(sub.gamma[rep]);
        eff.omega.push_back(sub.omega[rep]);
        eff.isotope_symbol.push_back(sub.isotope_symbol[rep]);
    }
    for (int a = 0; a < ne; ++a)
        for (int b = a + 1; b < ne; ++b) {
            const int ra = representative(lay.eff_slot[static_cast<size_t>(a)]);
            const int rb = representative(lay.eff_slot[static_cast<size_t>(b)]);
            eff.two_pi_j(a, b) = eff.two_pi_j(b, a) = sub.two_pi_j(ra, rb);
        }
    return eff;
}

std::vector<double> map_weights(const std::vector<LocalGroup>& groups,
                                const AssignmentLayout& lay, const std::vector<double>& w) {
    std::vector<double> eff(lay.eff_slot.size(), 0.0);
    for (size_t e = 0; e < lay.eff_slot.size(); ++e) {
        const int slot = lay.eff_slot[e];
        if (slot < 0) {
            eff[e] = w[static_cast<size_t>(-1 - slot)];
        } else {
            const auto& members = groups[static_cast<size_t>(slot)].members;
            const double shared = w[static_cast<size_t>(members.front())];
            for (int m : members)
                if (w[static_cast<size_t>(m)] != shared)
                    throw ValidationError(
                        "ladder weights must be uniform within an equivalence group");
            eff[e] = shared;
        }
    }
    return eff;
}

void coalesce_sorted(std::vector<Stick>& sticks, double radius) {
    if (sticks.empty() || radius <= 0.0) return;
    std::sort(sticks.begin(), sticks.end(),
              [](const Stick& a, const Stick& b) { return a.omega < b.omega; });
    std::vector<Stick> merged;
    Stick cur = sticks.front();
    double pos = cur.omega;
    int count = 1;
    for (size_t i = 1; i < sticks.size(); ++i) {
        if (sticks[i].omega - cur.omega <= radius) {
            cur.weight += sticks[i].weight;
            pos += sticks[i].omega;
            cur.omega = pos / ++count;
        } else {
            merged.push_back(cur);
            cur = sticks[i];
            pos = cur.omega;
            count = 1;
        }
    }
    merged.push_back(cur);
    sticks.swap(merged);
}

}  // namespace

StickSpectrum reduced_sticks(const Subsystem& sub, const std::vector<LocalGroup>& groups_in,
                             const std::vector<double>& left_weights,
                             const std::vector<double>& right_weights, const EngineOptions& opts,
                             size_t assignment_cap) {
    std::vector<LocalGroup> groups = groups_in;

    // Guard against combinatorial blow-up: ungroup the smallest groups
    // (least dimension benefit) until the assignment count fits.
    auto assignment_count = [&] {
        double c = 1.0;
        for (const auto& g : groups)
            c *= static_cast<double>(irrep_decomposition(static_cast<int>(g.members.size())).size());
        return c;
    };
    std::sort(groups.begin(), groups.end(), [](const LocalGroup& a, const LocalGroup& b) {
        return a.members.size() != b.members.size() ? a.members.size() < b.members.size()
                                                    : a.members.front() < b.members.front();
    });
    while (!groups.empty() && assignment_count() > static_cast<double>(assignment_cap))
        groups.erase(groups.begin());
    std::sort(groups.begin(), groups.end(),
              [](const LocalGroup& a, const LocalGroup& b) { return a.members.front() < b.members.front(); });

    if (groups.empty()) return compute_sticks(sub, left_weights, right_weights, opts);

    const AssignmentLayout lay = layout_assignments(sub, groups);

    StickSpectrum total;
    std::vector<int> choice(groups.size(), 0);
    for (;;) {
        double mult = 1.0;
        for (size_t g = 0; g < groups.size(); ++g)
            mult *= static_cast<double>(
                lay.irreps[g][static_cast<size_t>(choice[g])].multiplicity);

        Subsystem eff = effective_subsystem(sub, groups, lay, choice);
        const StickSpectrum part = compute_sticks(eff, map_weights(groups, lay, left_weights),
                                                  map_weights(groups, lay, right_weights), opts);
        for (const Stick& s : part.sticks)
            total.sticks.push_back(Stick{s.omega, s.weight * mult});
        total.total_weight += part.total_weight * mult;

        // next assignment (mixed-radix increment)
        size_t g = 0;
        for (; g < groups.size(); ++g) {
            if (++choice[g] < static_cast<int>(lay.irreps[g].size())) break;
            choice[g] = 0;
        }
        if (g == groups.size()) break;
    }

    // Degenerate irreps of different assignments emit coincident sticks;
    // merge them with the engine's radius.
    coalesce_sorted(total.sticks, opts.coalesce_rel * opts.eta);
    const double floor = opts.weight_floor_rel * std::abs(total.total_weight);
    std::erase_if(total.sticks, [floor](const Stick& s) { return std::abs(s.weight) < floor; });
    std::sort(total.sticks.begin(), total.sticks.end(), [](const Stick& a, const Stick& b) {
        return a.omega != b.omega ? a.omega < b.omega : a.weight < b.weight;
    });
    return total;
}

StickSpectrum reduced_spectrum(const SpinSystem& system, const SpectrometerSettings& settings,
                               const std::vector<EquivalenceGroup>& groups,
                               const EngineOptions& opts, size_t assignment_cap) {
    const Subsystem sub = make_subsystem(system, settings);
    std::vector<LocalGroup> local;
    local.reserve(groups.size());
    for (const auto& g : groups) local.push_back(LocalGroup{g.members});
    const auto weights = detection_weights(sub, settings.detect_isotope);
    StickSpectrum out = reduced_sticks(sub, local, weights, weights, opts, assignment_cap);
    out.system_hash = system.hash();
    out.settings_hash = settings.hash();
    return out;
}

double reduced_dimension_total(const Subsystem& sub, const std::vector<LocalGroup>& groups) {
    const AssignmentLayout lay = layout_assignments(sub, groups);
    double total = 0.0;
    std::vector<int> choice(groups.size(), 0);
    for (;;) {
        double mult = 1.0;
        for (size_t g = 0; g < groups.size(); ++g)
            mult *= static_cast<double>(lay.irreps[g][static_cast<size_t>(choice[g])].multiplicity);
        const Subsystem eff = effective_subsystem(sub, groups, lay, choice);
        double dim = 1.0;
        for (int s : eff.two_spins) dim *= s + 1;
        total += mult * dim;

        size_t g = 0;
        for (; g < groups.size(); ++g) {
            if (++choice[g] < static_cast<int>(lay.irreps[g].size())) break;
            choice[g] = 0;
        }
        if (g == groups.size()) break;
    }
    return total;
}

}  // namespace spinspectra
