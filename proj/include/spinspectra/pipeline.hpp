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
#ifndef SPINSPECTRA_PIPELINE_HPP
#define SPINSPECTRA_PIPELINE_HPP

#include <string>
#include <vector>

#include "spinspectra/cluster.hpp"
#include "spinspectra/similarity.hpp"
#include "spinspectra/spectrum.hpp"

namespace spinspectra {

// Field presets: high / low / very-low field.
inline constexpr double kFieldPresetsMhz[] = {400.0, 80.0, 20.0};
// Broadening presets: high / low broadening.
inline constexpr double kBroadeningPresetsHz[] = {1.0, 0.1};

struct RunConfig {
    double field_mhz = 400.0;
    double fwhm_hz = 1.0;
    int max_cluster = 12;
    int grid_points = 0;  // 0 = automatic (2,000 or 20,000)
    std::optional<std::string> detect_isotope;
    double epsilon_metric = 0.1;
    bool exact_mode = false;
    int exact_threshold = 12;      // largest N solved exactly by default
    int reduction_min_dim_log2 = 12;  // skip reduction below 2^12 states
    int reduction_min_spins = 12;     // per-cluster reduction threshold
    size_t assignment_cap = 10000;
    uint64_t dimension_cap = kDefaultDimensionCap;
    double weight_floor_rel = 1e-14;
    ClusterGrowth growth = ClusterGrowth::MaxOverMembers;
    int threads = 0;  // 0 = hardware parallelism

    SpectrometerSettings settings() const;
    EngineOptions engine_options(bool sector_parallel) const;
    ClusterOptions cluster_options() const;
    int effective_grid_points() const;
};

// Number of detected nuclei (the normalization target).
double active_count(const SpinSystem& system, const RunConfig& config);

// Exact stick spectrum, using the SU(2) reduction when it is profitable
// (equivalence groups exist and the unreduced dimension is large).
struct ExactResult {
    StickSpectrum sticks;
    bool used_reduction = false;
};
ExactResult exact_sticks(const SpinSystem& system, const RunConfig& config);

struct SimulationResult {
    StickSpectrum sticks;
    Spectrum spectrum;  // ppm axis, normalized
    bool used_exact = false;
    bool used_reduction = false;
    AssembleStats stats;
    double solve_seconds = 0.0;
};

// The full pipeline behind `spinspectra simulate`: exact path for small
// systems (or when forced), the spin-dependent cluster approximation
// otherwise; sampled on the equal-area grid, ppm axis, normalized to the
// number of detected nuclei.
SimulationResult simulate(const SpinSystem& system, const RunConfig& config);

// Sample + ppm + normalize, shared by every consumer.
Spectrum finish_spectrum(const StickSpectrum& sticks, const SpinSystem& system,
                         const RunConfig& config);

struct ConvergenceRow {
    double field_mhz = 0.0;
    double fwhm_hz = 0.0;
    int max_cluster = 0;
    bool is_reference = false;
    double cos_theta = 1.0;
    double epsilon = kEpsilonClamp;
    double solve_seconds = 0.0;
    uint64_t peak_mem_bytes = 0;
    int distinct_member_sets = 0;
    int diagonalizations = 0;
};

struct ConvergenceReport {
    std::string reference;  // "exact" or "max_cluster=K"
    std::vector<ConvergenceRow> rows;
};

// Convergence study: the spectrum at every requested cluster size compared
// against the reference (exact when the system is small enough, otherwise
// the largest requested size), for each field/broadening combination.
// Stick spectra are reused across broadenings (they do not depend on eta).
// A reference self-row (epsilon = -16) closes each block; when `emit_dir`
// is set, every per-size spectrum is also written there as CSV.
ConvergenceReport converge(const SpinSystem& system, const RunConfig& base,
                           const std::vector<int>& sizes, const std::vector<double>& fields_mhz,
                           const std::vector<double>& fwhms_hz,
                           const std::optional<std::string>& emit_dir = std::nullopt);

struct BenchRow {
    int max_cluster = 0;
    double median_seconds = 0.0;
    uint64_t peak_mem_bytes = 0;
    int distinct_member_sets = 0;
    int diagonalizations = 0;
    int max_sector_dim = 0;
    double predicted_block_dim = 0.0;  // binom(m, floor(m/2))
};

// Timing/memory benchmark of the cluster assembly at each size.
std::vector<BenchRow> bench(const SpinSystem& system, const RunConfig& config,
                            const std::vector<int>& sizes, int repeats);

}  // namespace spinspectra

#endif
