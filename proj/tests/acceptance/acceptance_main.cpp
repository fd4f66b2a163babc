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

// Acceptance suite. Each criterion prints one PASS/FAIL line; the exit
// code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spinspectra/cluster.hpp"
#include "spinspectra/equivalence.hpp"
#include "spinspectra/io.hpp"
#include "spinspectra/pipeline.hpp"
#include "spinspectra/similarity.hpp"
#include "spinspectra/spectrum.hpp"
#include "spinspectra/time_domain.hpp"
#include "support/oracle.hpp"

using namespace spinspectra;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string data_path(const std::string& name) {
    return std::string(SPINSPECTRA_DATA_DIR) + "/molecules/" + name;
}

// Corpus molecules in the 6..12 spin range used by criteria 3, 4 and 6.
const std::vector<const char*> kMidCorpus = {
    "ethanol_like.json", "chain6.json",  "ring6_arene.json", "fragment_a.json",
    "star7.json",        "propane_like.json", "toluene_like.json", "tbutyl_cl_like.json",
    "chain10.json",      "ring10.json",  "mtbe_like.json",   "fragment_ab.json",
};

SpectrometerSettings settings_at(double field_mhz, double fwhm_hz = 1.0) {
    SpectrometerSettings s;
    s.ref_frequency_hz = field_mhz * 1e6;
    s.fwhm_hz = fwhm_hz;
    return s;
}

// Cosine deficit between two stick lists sampled on a SHARED equal-area
// grid built from the first list, so the resampling error cancels and the
// measurement reflects the solver routes alone.
double epsilon_shared_grid(const StickSpectrum& a, const StickSpectrum& b, double eta,
                           int points = 2000) {
    const auto grid = equal_area_grid(a, eta, points);
    const Spectrum sa = sample_sticks(a, eta, grid);
    const Spectrum sb = sample_sticks(b, eta, grid);
    return cosine_similarity(sa, sb).epsilon;
}

struct CriterionResult {
    bool pass = true;
    std::ostringstream detail;
};

#define REQUIRE_MSG(res, cond, ...)                      \
    do {                                                 \
        if (!(cond)) {                                   \
            (res).pass = false;                          \
            char buf_[512];                              \
            std::snprintf(buf_, sizeof buf_, __VA_ARGS__); \
            (res).detail << "  ! " << buf_ << "\n";      \
        }                                                \
    } while (0)

// ---------------------------------------------------------------------
// 1. Oracle equivalence: block-diagonal sticks vs symmetry-blind dense
//    diagonalization for randomized small systems at all field presets.
CriterionResult criterion_oracle_equivalence() {
    CriterionResult res;
    std::mt19937 rng(20260808);
    int systems = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;  // 2..4 spins
        const SpinSystem sys = oracle::random_system(rng, n);
        ++systems;
        for (double field : kFieldPresetsMhz) {
            const SpectrometerSettings s = settings_at(field);
            EngineOptions opts;
            opts.eta = s.eta();
            const Subsystem sub = make_subsystem(sys, s);
            const auto w = detection_weights(sub, std::nullopt);
            const StickSpectrum mine = compute_sticks(sub, w, w, opts);

            auto brute = oracle::coalesce(
                oracle::sticks_full(oracle::full_hamiltonian(sys, s), oracle::m_plus(sys, w),
                                    oracle::m_plus(sys, w), 0.0),
                opts.coalesce_rel * opts.eta);
            const double floor = opts.weight_floor_rel * std::abs(mine.total_weight);
            std::erase_if(brute,
                          [floor](const oracle::RawStick& st) { return std::abs(st.weight) < floor; });

            REQUIRE_MSG(res, mine.sticks.size() == brute.size(),
                        "trial %d field %.0f: stick count %zu vs %zu", trial, field,
                        mine.sticks.size(), brute.size());
            if (mine.sticks.size() != brute.size()) continue;
            for (size_t k = 0; k < brute.size(); ++k) {
                const double dw = std::abs(mine.sticks[k].weight - brute[k].weight);
                const double dx = std::abs(mine.sticks[k].omega - brute[k].omega);
                REQUIRE_MSG(res, dx <= 1e-9 * std::abs(brute[k].omega),
                            "trial %d field %.0f stick %zu: position off by %.3e rel", trial,
                            field, k, dx / std::abs(brute[k].omega));
                REQUIRE_MSG(res, dw <= 1e-9 * (std::abs(brute[k].weight) + mine.total_weight),
                            "trial %d field %.0f stick %zu: weight off", trial, field, k);
            }
        }
    }
    res.detail << "  " << systems << " random systems x 3 field presets\n";
    return res;
}

// ---------------------------------------------------------------------
// 2. Time-domain cross-check: the half-sided transform of C++(t) matches
//    the frequency-domain spectrum on the equal-area grid.
CriterionResult criterion_time_domain() {
    CriterionResult res;
    std::mt19937 rng(5150);
    const SpectrometerSettings s = settings_at(400.0);
    const double eta = s.eta();
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const SpinSystem sys = oracle::random_system(rng, 2 + trial % 3);
        EngineOptions opts;
        opts.eta = eta;
        const Subsystem sub = make_subsystem(sys, s);
        const auto w = detection_weights(sub, std::nullopt);
        const StickSpectrum sticks = compute_sticks(sub, w, w, opts);
        const auto grid = equal_area_grid(sticks, eta, 2000);
        const Spectrum direct = sample_sticks(sticks, eta, grid);

        const TimeCorrelation corr = correlation_time_domain(sub, w, opts);
        const TimeGrid tg = suggest_time_grid(corr, eta, grid);
        const auto curve = half_sided_transform(corr, tg, eta, grid, 2);

        double num = 0.0, den = 0.0;
        for (size_t q = 0; q < grid.size(); ++q) {
            num += (curve[q] - direct.amplitudes[q]) * (curve[q] - direct.amplitudes[q]);
            den += direct.amplitudes[q] * direct.amplitudes[q];
        }
        const double rel_l2 = std::sqrt(num / den);
        worst = std::max(worst, rel_l2);
        REQUIRE_MSG(res, rel_l2 <= 1e-4, "trial %d: relative L2 %.3e > 1e-4", trial, rel_l2);
    }
    res.detail << "  5 random systems, worst relative L2 " << worst << "\n";
    return res;
}

// ---------------------------------------------------------------------
// 3. Cluster exactness limit: full-size clusters reproduce the exact
//    spectrum for every mid-size corpus molecule.
CriterionResult criterion_cluster_exactness() {
    CriterionResult res;
    const SpectrometerSettings s = settings_at(400.0);
    for (const char* name : kMidCorpus) {
        const auto mol = load_molecule(data_path(name));
        const int n = mol.system.size();

        ClusterOptions copts;
        copts.engine.eta = s.eta();
        copts.engine.coalesce_rel = 0.0;  // cross-route comparison
        copts.threads = 2;
        const StickSpectrum assembled = assemble_sticks(mol.system, s, n, copts);

        const Subsystem sub = make_subsystem(mol.system, s);
        const auto w = detection_weights(sub, std::nullopt);
        EngineOptions eopts = copts.engine;
        eopts.threads = 2;
        const StickSpectrum exact = compute_sticks(sub, w, w, eopts);

        const double eps = epsilon_shared_grid(exact, assembled, s.eta());
        REQUIRE_MSG(res, eps <= -10.0, "%s: epsilon %.2f > -10", name, eps);
        res.detail << "  " << name << " (N=" << n << "): epsilon " << eps << "\n";
    }
    return res;
}

// ---------------------------------------------------------------------
// 4. Convergence behavior: the full-size row is the minimum and lowering
//    the broadening never improves the error by more than half a decade.
CriterionResult criterion_convergence_behavior() {
    CriterionResult res;
    for (const char* name : kMidCorpus) {
        const auto mol = load_molecule(data_path(name));
        const int n = mol.system.size();
        std::vector<int> sizes;
        for (int m = 1; m <= n; ++m) sizes.push_back(m);

        RunConfig config;
        // One fixed sample count for both broadenings keeps the resampling
        // floor identical across the direction check.
        config.grid_points = 2000;
        config.threads = 2;
        const ConvergenceReport report =
            converge(mol.system, config, sizes, {400.0}, {1.0, 0.1});

        for (double fwhm : {1.0, 0.1}) {
            double eps_at_n = 0.0, min_eps = 1e300;
            for (const auto& row : report.rows) {
                if (row.fwhm_hz != fwhm) continue;
                min_eps = std::min(min_eps, row.epsilon);
                if (row.max_cluster == n) eps_at_n = row.epsilon;
            }
            REQUIRE_MSG(res, eps_at_n <= min_eps + 1e-9,
                        "%s fwhm %.1f: epsilon at full size %.2f is not the minimum (%.2f)",
                        name, fwhm, eps_at_n, min_eps);
        }
        for (int m : sizes) {
            double high = 0.0, low = 0.0;
            for (const auto& row : report.rows) {
                if (row.max_cluster != m) continue;
                (row.fwhm_hz == 1.0 ? high : low) = row.epsilon;
            }
            REQUIRE_MSG(res, low >= high - 0.5,
                        "%s size %d: low broadening improves epsilon %.2f -> %.2f", name, m,
                        high, low);
        }
    }
    res.detail << "  " << kMidCorpus.size() << " molecules, sizes 1..N, 1.0/0.1 Hz\n";
    return res;
}

// ---------------------------------------------------------------------
// 5. Equivalence reduction correctness, plus the n=9 completeness sum.
CriterionResult criterion_equivalence_reduction() {
    CriterionResult res;
    const SpectrometerSettings s = settings_at(400.0);

    for (const char* name : {"methyl_x.json", "ethanol_like.json", "propane_like.json",
                             "toluene_like.json", "mtbe_like.json"}) {
        const auto mol = load_molecule(data_path(name));
        const auto groups = detect_equivalence(mol.system);
        REQUIRE_MSG(res, !groups.empty(), "%s: expected equivalence groups", name);

        EngineOptions opts;
        opts.eta = s.eta();
        opts.coalesce_rel = 0.0;  // cross-route comparison
        opts.threads = 2;
        const StickSpectrum reduced = reduced_spectrum(mol.system, s, groups, opts);
        const Subsystem sub = make_subsystem(mol.system, s);
        const auto w = detection_weights(sub, std::nullopt);
        const StickSpectrum direct = compute_sticks(sub, w, w, opts);

        const double eps = epsilon_shared_grid(direct, reduced, s.eta());
        REQUIRE_MSG(res, eps <= -10.0, "%s: reduced vs unreduced epsilon %.2f > -10", name, eps);
        res.detail << "  " << name << ": epsilon " << eps << "\n";
    }

    // The 18-equivalent-spin stress case: two spin-9/2 composites plus four
    // spin-1/2 sites; unreduced is far beyond reach, so the checks are the
    // exact sum rule and the group structure.
    {
        const auto mol = load_molecule(data_path("diphosphane_like.json"));
        const auto groups = detect_equivalence(mol.system);
        REQUIRE_MSG(res, groups.size() == 2, "diphosphane-like: %zu groups", groups.size());
        for (const auto& g : groups)
            REQUIRE_MSG(res, g.size() == 9, "diphosphane-like: group size %d", g.size());

        EngineOptions opts;
        opts.eta = s.eta();
        opts.threads = 2;
        const StickSpectrum reduced = reduced_spectrum(mol.system, s, groups, opts);
        const Subsystem sub = make_subsystem(mol.system, s);
        const auto w = detection_weights(sub, std::nullopt);
        const double trace = ladder_trace(sub, w, w);
        REQUIRE_MSG(res,
                    std::abs(reduced.total_weight - trace) <= 1e-9 * trace,
                    "diphosphane-like: reduced trace off by %.3e rel",
                    std::abs(reduced.total_weight - trace) / trace);
        res.detail << "  diphosphane-like reduced: " << reduced.sticks.size()
                   << " sticks, trace checked\n";
    }

    uint64_t total = 0;
    for (const auto& t : irrep_decomposition(9))
        total += t.multiplicity * static_cast<uint64_t>(t.two_j + 1);
    REQUIRE_MSG(res, total == 512, "sum g(9,j)(2j+1) = %llu != 512",
                static_cast<unsigned long long>(total));
    return res;
}

// ---------------------------------------------------------------------
// 6. Sum rule and positivity on every corpus run.
CriterionResult criterion_sum_rule_positivity() {
    CriterionResult res;
    const std::vector<const char*> corpus = {
        "single_proton.json", "ax_pair.json",   "uncoupled_trio.json", "methyl_x.json",
        "ethanol_like.json",  "chain6.json",    "ring6_arene.json",    "fragment_a.json",
        "star7.json",         "propane_like.json", "toluene_like.json", "tbutyl_cl_like.json",
        "chain10.json",       "ring10.json",    "mtbe_like.json",      "fragment_ab.json",
        "diphosphane_like.json",
    };
    for (const char* name : corpus) {
        const auto mol = load_molecule(data_path(name));
        RunConfig config;
        config.threads = 2;
        if (mol.system.size() > config.exact_threshold) config.max_cluster = 8;

        const SimulationResult run = simulate(mol.system, config);
        const Subsystem sub = make_subsystem(mol.system, config.settings());
        const auto w = detection_weights(sub, config.detect_isotope);
        const double trace = ladder_trace(sub, w, w);

        REQUIRE_MSG(res, std::abs(run.sticks.total_weight - trace) <= 1e-9 * trace,
                    "%s: stick total off the trace by %.3e rel", name,
                    std::abs(run.sticks.total_weight - trace) / trace);

        double min_amp = 0.0;
        for (double a : run.spectrum.amplitudes) min_amp = std::min(min_amp, a);
        REQUIRE_MSG(res, min_amp >= 0.0, "%s: negative sample %.3e", name, min_amp);

        double integral = 0.0;
        for (size_t q = 1; q < run.spectrum.points.size(); ++q)
            integral += 0.5 * (run.spectrum.amplitudes[q] + run.spectrum.amplitudes[q - 1]) *
                        (run.spectrum.points[q] - run.spectrum.points[q - 1]);
        const double target = active_count(mol.system, config);
        REQUIRE_MSG(res, std::abs(integral - target) <= 0.02 * target,
                    "%s: integral %.4f vs %.1f", name, integral, target);
    }
    res.detail << "  " << corpus.size() << " corpus runs\n";
    return res;
}

// ---------------------------------------------------------------------
// 7. Block-dimension formula for N = 2..16 protons.
CriterionResult criterion_block_dimension() {
    CriterionResult res;
    for (int n = 2; n <= 16; ++n) {
        const ProductBasis basis(std::vector<int>(static_cast<size_t>(n), 1));
        int largest = 0;
        uint64_t total = 0;
        for (const auto& sec : split_sectors(basis)) {
            largest = std::max(largest, sec.dim());
            total += sec.states.size();
        }
        REQUIRE_MSG(res, largest == static_cast<int>(binomial(n, n / 2)),
                    "N=%d: largest sector %d != binom", n, largest);
        REQUIRE_MSG(res, total == basis.dim(), "N=%d: sectors do not partition the space", n);
    }
    res.detail << "  N = 2..16 checked\n";
    return res;
}

// ---------------------------------------------------------------------
// 8. Scaling claims: linear in N at fixed cluster size (duplicated
//    uncoupled fragments), super-linear in the cluster size.
CriterionResult criterion_scaling() {
    CriterionResult res;

    // Many uncoupled copies of the six-spin fragment so the workload is
    // comfortably above timer noise; doubling the copy count at fixed
    // max_size must scale the wall time by at most 2.5.
    auto copies = [&](int count) {
        const auto frag = load_molecule(data_path("fragment_a.json"));
        std::vector<Nucleus> nuclei;
        for (int c = 0; c < count; ++c)
            for (const auto& nuc : frag.system.nuclei()) nuclei.push_back(nuc);
        SpinSystem sys(nuclei);
        for (int c = 0; c < count; ++c)
            for (int i = 0; i < 6; ++i)
                for (int j = i + 1; j < 6; ++j) {
                    const double j_hz = frag.system.coupling(i, j);
                    if (j_hz != 0.0) sys.set_coupling(6 * c + i, 6 * c + j, j_hz);
                }
        return sys;
    };
    RunConfig config;
    config.threads = 1;  // timing comparison, keep it serial
    const SpinSystem base = copies(24);
    const SpinSystem doubled = copies(48);
    const auto rows_base = bench(base, config, {6}, 25);
    const auto rows_doubled = bench(doubled, config, {6}, 25);
    const double ratio = rows_doubled[0].median_seconds / rows_base[0].median_seconds;
    REQUIRE_MSG(res, ratio <= 2.5, "doubling N scaled time by %.2f > 2.5", ratio);
    res.detail << "  144 -> 288 spins at max_size 6: time x" << ratio << "\n";

    // Super-linear growth with the cluster size on a ten-spin chain.
    const auto chain = load_molecule(data_path("chain10.json"));
    const auto rows = bench(chain.system, config, {6, 8, 10}, 5);
    const double d1 = std::log(rows[1].median_seconds / rows[0].median_seconds);
    const double d2 = std::log(rows[2].median_seconds / rows[1].median_seconds);
    REQUIRE_MSG(res, rows[0].median_seconds < rows[1].median_seconds &&
                         rows[1].median_seconds < rows[2].median_seconds,
                "times not increasing with cluster size");
    REQUIRE_MSG(res, d1 > std::log(2.0), "size 6->8 grew only x%.2f (sub-exponential)",
                std::exp(d1));
    REQUIRE_MSG(res, d2 >= d1 - 0.35, "log-time differences decreasing: %.2f then %.2f", d1, d2);
    res.detail << "  sizes 6/8/10: " << rows[0].median_seconds << " / " << rows[1].median_seconds
               << " / " << rows[2].median_seconds << " s\n";
    return res;
}

// ---------------------------------------------------------------------
// 9. Metric properties on corpus spectra.
CriterionResult criterion_metric_properties() {
    CriterionResult res;
    const SpectrometerSettings s = settings_at(400.0);
    const auto mol = load_molecule(data_path("ethanol_like.json"));

    RunConfig config;
    config.threads = 2;
    ClusterOptions copts = config.cluster_options();
    const StickSpectrum coarse = assemble_sticks(mol.system, s, 3, copts);
    const StickSpectrum exact = exact_sticks(mol.system, config).sticks;

    const Spectrum a = sample_sticks(coarse, s.eta(), equal_area_grid(coarse, s.eta(), 2000));
    const Spectrum b = sample_sticks(exact, s.eta(), equal_area_grid(exact, s.eta(), 2000));

    const SimilarityReport ab = cosine_similarity(a, b);
    const SimilarityReport ba = cosine_similarity(b, a);
    REQUIRE_MSG(res, std::abs(ab.cos_theta - ba.cos_theta) <= 1e-12, "symmetry violated");

    Spectrum a5 = a, b3 = b;
    for (double& v : a5.amplitudes) v *= 5.0;
    for (double& v : b3.amplitudes) v *= 3.0;
    const SimilarityReport scaled = cosine_similarity(a5, b3);
    REQUIRE_MSG(res, std::abs(scaled.cos_theta - ab.cos_theta) <= 1e-12,
                "scale invariance violated: %.3e", std::abs(scaled.cos_theta - ab.cos_theta));

    const SimilarityReport ppm =
        cosine_similarity(to_ppm_axis(a, s), to_ppm_axis(b, s));
    REQUIRE_MSG(res, std::abs(ppm.cos_theta - ab.cos_theta) <= 1e-12,
                "ppm-axis invariance violated: %.3e", std::abs(ppm.cos_theta - ab.cos_theta));

    const SimilarityReport fine = cosine_similarity(a, b, 200000);
    REQUIRE_MSG(res, std::abs(fine.epsilon - ab.epsilon) <= 0.05,
                "grid doubling moved epsilon by %.3f", std::abs(fine.epsilon - ab.epsilon));
    res.detail << "  epsilon(cluster-3 vs exact) = " << ab.epsilon << "\n";
    return res;
}

// ---------------------------------------------------------------------
// 10. Non-interacting spectrum: one stick per nucleus at its Larmor
//     frequency, weights gamma_i^2 on the uniform trace scale.
CriterionResult criterion_non_interacting() {
    CriterionResult res;
    const SpectrometerSettings s = settings_at(400.0);

    auto check = [&](const SpinSystem& sys, int max_size) {
        ClusterOptions copts;
        copts.engine.eta = s.eta();
        const StickSpectrum sticks = assemble_sticks(sys, s, max_size, copts);
        const int n = sys.size();
        REQUIRE_MSG(res, static_cast<int>(sticks.sticks.size()) == n,
                    "max_size %d: %zu sticks for %d spins", max_size, sticks.sticks.size(), n);
        const double trace_factor = std::pow(2.0, n - 1);  // spin-1/2 everywhere
        for (int i = 0; i < n && static_cast<int>(sticks.sticks.size()) == n; ++i) {
            const double omega = larmor_frequency(sys.nucleus(i), s);
            const double gamma = sys.nucleus(i).isotope.gamma;
            bool found = false;
            for (const auto& st : sticks.sticks) {
                if (std::abs(st.omega - omega) <= 1e-9 * omega &&
                    std::abs(st.weight - gamma * gamma * trace_factor) <=
                        1e-9 * gamma * gamma * trace_factor)
                    found = true;
            }
            REQUIRE_MSG(res, found, "nucleus %d: no stick at its Larmor frequency", i);
        }
    };

    const auto trio = load_molecule(data_path("uncoupled_trio.json"));
    for (int size = 1; size <= 3; ++size) check(trio.system, size);

    // A larger J = 0 system with distinct shifts.
    std::vector<Nucleus> nuclei;
    for (int i = 0; i < 8; ++i) {
        Nucleus nuc;
        nuc.isotope = *builtin_isotope("1H");
        nuc.delta = (0.4 + 0.9 * i) * 1e-6;
        nuc.label = "H" + std::to_string(i);
        nuclei.push_back(nuc);
    }
    const SpinSystem eight(nuclei);
    for (int size : {1, 5, 8}) check(eight, size);

    res.detail << "  3-spin and 8-spin J=0 systems at several sizes\n";
    return res;
}

struct Criterion {
    const char* name;
    CriterionResult (*fn)();
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1 oracle equivalence (small systems)", criterion_oracle_equivalence},
        {"2 time-domain cross-check", criterion_time_domain},
        {"3 cluster exactness limit", criterion_cluster_exactness},
        {"4 convergence behavior", criterion_convergence_behavior},
        {"5 equivalence reduction correctness", criterion_equivalence_reduction},
        {"6 sum rule and positivity", criterion_sum_rule_positivity},
        {"7 block-dimension formula", criterion_block_dimension},
        {"8 scaling claims", criterion_scaling},
        {"9 metric properties", criterion_metric_properties},
        {"10 non-interacting spectrum", criterion_non_interacting},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const double t0 = now_seconds();
        CriterionResult result;
        try {
            result = c.fn();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail << "  ! exception: " << e.what() << "\n";
        }
        const double dt = now_seconds() - t0;
        std::printf("[%s] criterion %s (%.1f s)\n", result.pass ? "PASS" : "FAIL", c.name, dt);
        std::fputs(result.detail.str().c_str(), stdout);
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
