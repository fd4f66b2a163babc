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
#include "spinspectra/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "spinspectra/equivalence.hpp"
#include "spinspectra/io.hpp"
#include "spinspectra/parallel.hpp"

namespace spinspectra {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

SpectrometerSettings RunConfig::settings() const {
    SpectrometerSettings s;
    s.ref_frequency_hz = field_mhz * 1e6;
    s.fwhm_hz = fwhm_hz;
    s.detect_isotope = detect_isotope;
    s.epsilon_metric = epsilon_metric;
    s.validate();
    return s;
}

EngineOptions RunConfig::engine_options(bool sector_parallel) const {
    EngineOptions e;
    e.eta = settings().eta();
    e.weight_floor_rel = weight_floor_rel;
    e.dimension_cap = dimension_cap;
    e.threads = sector_parallel ? resolve_threads(threads) : 1;
    return e;
}

ClusterOptions RunConfig::cluster_options() const {
    ClusterOptions c;
    c.engine = engine_options(false);
    c.growth = growth;
    c.detect_isotope = detect_isotope;
    c.reduction_min_spins = reduction_min_spins;
    c.assignment_cap = assignment_cap;
    c.threads = resolve_threads(threads);
    return c;
}

int RunConfig::effective_grid_points() const {
    return grid_points > 0 ? grid_points : default_grid_points(fwhm_hz);
}

double active_count(const SpinSystem& system, const RunConfig& config) {
    double n = 0;
    for (const auto& nuc : system.nuclei())
        if (!config.detect_isotope || nuc.isotope.symbol == *config.detect_isotope) n += 1;
    return n;
}

ExactResult exact_sticks(const SpinSystem& system, const RunConfig& config) {
    const SpectrometerSettings settings = config.settings();
    ExactResult result;

    double full_dim = 1.0;
    for (const auto& nuc : system.nuclei()) full_dim *= nuc.isotope.two_spin + 1;
    const bool big = full_dim >= std::pow(2.0, config.reduction_min_dim_log2);

    if (big) {
        const auto groups = detect_equivalence(system);
        if (!groups.empty()) {
            result.sticks = reduced_spectrum(system, settings, groups,
                                             config.engine_options(true), config.assignment_cap);
            result.used_reduction = true;
            return result;
        }
    }
    const Subsystem sub = make_subsystem(system, settings);
    const auto weights = detection_weights(sub, settings.detect_isotope);
    result.sticks = compute_sticks(sub, weights, weights, config.engine_options(true));
    result.sticks.system_hash = system.hash();
    result.sticks.settings_hash = settings.hash();
    return result;
}

Spectrum finish_spectrum(const StickSpectrum& sticks, const SpinSystem& system,
                         const RunConfig& config) {
    const SpectrometerSettings settings = config.settings();
    const double eta = settings.eta();
    auto grid = equal_area_grid(sticks, eta, config.effective_grid_points());
    Spectrum spectrum = sample_sticks(sticks, eta, std::move(grid));
    spectrum = to_ppm_axis(std::move(spectrum), settings);
    return normalize(std::move(spectrum), active_count(system, config));
}

SimulationResult simulate(const SpinSystem& system, const RunConfig& config) {
    SimulationResult result;
    const double t0 = now_seconds();
    if (config.exact_mode || system.size() <= config.exact_threshold) {
        ExactResult exact = exact_sticks(system, config);
        result.sticks = std::move(exact.sticks);
        result.used_exact = true;
        result.used_reduction = exact.used_reduction;
    } else {
        const int size = std::min(config.max_cluster, system.size());
        result.sticks = assemble_sticks(system, config.settings(), size,
                                        config.cluster_options(), &result.stats);
    }
    result.solve_seconds = now_seconds() - t0;
    result.spectrum = finish_spectrum(result.sticks, system, config);
    return result;
}

ConvergenceReport converge(const SpinSystem& system, const RunConfig& base,
                           const std::vector<int>& sizes, const std::vector<double>& fields_mhz,
                           const std::vector<double>& fwhms_hz,
                           const std::optional<std::string>& emit_dir) {
    if (sizes.empty()) throw ValidationError("convergence study needs at least one size");
    for (int s : sizes)
        if (s < 1 || s > system.size())
            throw ValidationError("cluster sizes must lie within [1, N]");
    if (fields_mhz.empty() || fwhms_hz.empty())
        throw ValidationError("convergence study needs field and broadening values");

    const int largest = *std::max_element(sizes.begin(), sizes.end());
    const bool exact_ref = base.exact_mode || system.size() <= base.exact_threshold;
    const double fwhm_min = *std::min_element(fwhms_hz.begin(), fwhms_hz.end());

    ConvergenceReport report;
    report.reference = exact_ref ? "exact" : "max_cluster=" + std::to_string(largest);

    for (double field : fields_mhz) {
        // Sticks are broadening-independent; assemble once per size with the
        // finest coalescing radius in play and reuse across broadenings.
        RunConfig solve = base;
        solve.field_mhz = field;
        solve.fwhm_hz = fwhm_min;

        struct SizedSticks {
            StickSpectrum sticks;
            double seconds = 0.0;
            AssembleStats stats;
        };
        std::map<int, SizedSticks> by_size;
        for (int size : sizes) {
            if (by_size.count(size)) continue;
            SizedSticks entry;
            const double t0 = now_seconds();
            entry.sticks =
                assemble_sticks(system, solve.settings(), size, solve.cluster_options(),
                                &entry.stats);
            entry.seconds = now_seconds() - t0;
            by_size.emplace(size, std::move(entry));
        }

        StickSpectrum reference;
        double reference_seconds = 0.0;
        if (exact_ref) {
            const double t0 = now_seconds();
            reference = exact_sticks(system, solve).sticks;
            reference_seconds = now_seconds() - t0;
        } else {
            reference = by_size.at(largest).sticks;
            reference_seconds = by_size.at(largest).seconds;
        }

        for (double fwhm : fwhms_hz) {
            RunConfig sample_cfg = base;
            sample_cfg.field_mhz = field;
            sample_cfg.fwhm_hz = fwhm;
            const Spectrum ref_spectrum = finish_spectrum(reference, system, sample_cfg);

            auto emit = [&](const Spectrum& spectrum, const std::string& tag) {
                if (!emit_dir) return;
                std::ostringstream name;
                name << *emit_dir << "/spectrum_f" << field << "_w" << fwhm << "_" << tag
                     << ".csv";
                std::ofstream out(name.str(), std::ios::binary);
                if (!out)
                    throw std::runtime_error("cannot write spectrum file '" + name.str() + "'");
                write_spectrum_csv(out, spectrum);
            };

            for (int size : sizes) {
                const SizedSticks& entry = by_size.at(size);
                const Spectrum spectrum = finish_spectrum(entry.sticks, system, sample_cfg);
                emit(spectrum, "m" + std::to_string(size));
                const SimilarityReport sim = cosine_similarity(spectrum, ref_spectrum);

                ConvergenceRow row;
                row.field_mhz = field;
                row.fwhm_hz = fwhm;
                row.max_cluster = size;
                row.cos_theta = sim.cos_theta;
                row.epsilon = sim.epsilon;
                row.solve_seconds = entry.seconds;
                row.peak_mem_bytes = entry.stats.peak_mem_bytes;
                row.distinct_member_sets = entry.stats.distinct_member_sets;
                row.diagonalizations = entry.stats.diagonalizations;
                report.rows.push_back(row);
            }

            // The reference against itself closes each block at the clamp.
            ConvergenceRow ref_row;
            ref_row.field_mhz = field;
            ref_row.fwhm_hz = fwhm;
            ref_row.max_cluster = exact_ref ? system.size() : largest;
            ref_row.is_reference = true;
            ref_row.cos_theta = cosine_similarity(ref_spectrum, ref_spectrum).cos_theta;
            ref_row.epsilon = cosine_similarity(ref_spectrum, ref_spectrum).epsilon;
            ref_row.solve_seconds = reference_seconds;
            report.rows.push_back(ref_row);
            emit(ref_spectrum, "reference");
        }
    }
    return report;
}

std::vector<BenchRow> bench(const SpinSystem& system, const RunConfig& config,
                            const std::vector<int>& sizes, int repeats) {
    if (repeats < 1) throw ValidationError("bench needs at least one repeat");
    std::vector<BenchRow> rows;
    for (int size : sizes) {
        if (size < 1 || size > system.size())
            throw ValidationError("cluster sizes must lie within [1, N]");
        BenchRow row;
        row.max_cluster = size;
        row.predicted_block_dim = binomial(size, size / 2);

        std::vector<double> times;
        for (int r = 0; r < repeats; ++r) {
            AssembleStats stats;
            const double t0 = now_seconds();
            assemble_sticks(system, config.settings(), size, config.cluster_options(), &stats);
            times.push_back(now_seconds() - t0);
            row.peak_mem_bytes = stats.peak_mem_bytes;
            row.distinct_member_sets = stats.distinct_member_sets;
            row.diagonalizations = stats.diagonalizations;
            row.max_sector_dim = stats.max_sector_dim;
        }
        std::sort(times.begin(), times.end());
        row.median_seconds = times[times.size() / 2];
        rows.push_back(row);
    }
    return rows;
}

}  // namespace spinspectra
