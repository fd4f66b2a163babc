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
#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spinspectra/io.hpp"
#include "spinspectra/pipeline.hpp"
#include "spinspectra/svg.hpp"

namespace {

using namespace spinspectra;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
    return std::string(buf, res.ptr);
}

// "A..B", "K", or a comma list.
std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    auto parse_int = [&](const std::string& s) {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw ParseError("bad size token '" + s + "'");
        return v;
    };
    try {
        if (const auto dots = text.find(".."); dots != std::string::npos) {
            const int a = parse_int(text.substr(0, dots));
            const int b = parse_int(text.substr(dots + 2));
            if (a > b) throw ParseError("size range must be ascending");
            for (int s = a; s <= b; ++s) sizes.push_back(s);
        } else {
            std::stringstream ss(text);
            std::string tok;
            while (std::getline(ss, tok, ',')) sizes.push_back(parse_int(tok));
        }
    } catch (const std::exception&) {
        throw ParseError("cannot parse --sizes '" + text + "' (expected A..B or a comma list)");
    }
    if (sizes.empty()) throw ParseError("--sizes is empty");
    return sizes;
}

void parse_presets(const std::string& text, std::vector<double>& fields,
                   std::vector<double>& fwhms) {
    std::stringstream ss(text);
    std::string tok;
    std::vector<double> f, b;
    while (std::getline(ss, tok, ',')) {
        if (tok == "all") {
            f.assign(std::begin(kFieldPresetsMhz), std::end(kFieldPresetsMhz));
            b.assign(std::begin(kBroadeningPresetsHz), std::end(kBroadeningPresetsHz));
        } else if (tok == "high-field") {
            f.push_back(400.0);
        } else if (tok == "low-field") {
            f.push_back(80.0);
        } else if (tok == "very-low-field") {
            f.push_back(20.0);
        } else if (tok == "high-broadening") {
            b.push_back(1.0);
        } else if (tok == "low-broadening") {
            b.push_back(0.1);
        } else {
            throw ParseError("unknown preset '" + tok + "'");
        }
    }
    if (!f.empty()) fields = f;
    if (!b.empty()) fwhms = b;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
}

struct CommonFlags {
    RunConfig config;
    std::string output;
    std::string format = "csv";
};

void add_run_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--field-mhz", flags.config.field_mhz,
                    "Proton reference frequency in MHz (presets: 400/80/20)");
    cmd->add_option("--fwhm-hz", flags.config.fwhm_hz,
                    "Lorentzian line width (FWHM) in Hz (presets: 1.0/0.1)");
    cmd->add_option("--max-cluster", flags.config.max_cluster, "Maximum cluster size");
    cmd->add_option("--points", flags.config.grid_points,
                    "Equal-area grid points (default 2000; 20000 for fwhm <= 0.1 Hz)");
    cmd->add_option("--detect-isotope", flags.config.detect_isotope,
                    "Restrict detection to one isotope symbol");
    cmd->add_option("--epsilon", flags.config.epsilon_metric,
                    "Cluster metric regularizer, rad/s");
    cmd->add_option("--threads", flags.config.threads, "Worker threads (0 = hardware)");
    cmd->add_option("--exact-threshold", flags.config.exact_threshold,
                    "Largest spin count solved exactly by default");
    cmd->add_flag_callback(
        "--direct-ranking",
        [&flags] { flags.config.growth = ClusterGrowth::DirectToCenter; },
        "Rank candidates against the center only instead of all members");
}

std::string spectrum_to_text(const Spectrum& spectrum, const std::string& format,
                             const StickSpectrum& sticks) {
    std::ostringstream os;
    if (format == "json")
        write_spectrum_json(os, spectrum, sticks.system_hash, sticks.settings_hash);
    else
        write_spectrum_csv(os, spectrum);
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"Liquid-state NMR spectra: exact and spin-dependent cluster solver"};
    app.require_subcommand(1);

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand("simulate", "Compute a broadened spectrum");
    std::string sim_molecule;
    CommonFlags sim;
    std::string sim_svg;
    sim_cmd->add_option("molecule", sim_molecule, "Molecule JSON file")->required();
    add_run_flags(sim_cmd, sim);
    sim_cmd->add_flag("--exact", sim.config.exact_mode, "Force the exact path");
    sim_cmd->add_option("--format", sim.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sim_cmd->add_option("--svg", sim_svg, "Also write an SVG rendering");
    sim_cmd->add_option("-o,--output", sim.output, "Output file (default stdout)");

    // --- converge ---
    auto* conv_cmd = app.add_subcommand("converge", "Convergence study vs the reference");
    std::string conv_molecule, conv_sizes, conv_presets, conv_emit;
    CommonFlags conv;
    conv_cmd->add_option("molecule", conv_molecule, "Molecule JSON file")->required();
    conv_cmd->add_option("--sizes", conv_sizes, "Cluster sizes, A..B or comma list")->required();
    conv_cmd->add_option("--presets", conv_presets,
                         "all, or comma list of high-field/low-field/very-low-field/"
                         "high-broadening/low-broadening");
    conv_cmd->add_option("--emit-spectra", conv_emit,
                         "Directory for per-size spectrum CSV files");
    add_run_flags(conv_cmd, conv);
    conv_cmd->add_flag("--exact", conv.config.exact_mode, "Force the exact reference");
    conv_cmd->add_option("--format", conv.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    conv_cmd->add_option("-o,--output", conv.output, "Output file (default stdout)");

    // --- compare ---
    auto* cmp_cmd = app.add_subcommand("compare", "Cosine similarity of two spectrum files");
    std::string cmp_a, cmp_b;
    int cmp_points = kDefaultResamplePoints;
    cmp_cmd->add_option("a", cmp_a, "First spectrum file")->required();
    cmp_cmd->add_option("b", cmp_b, "Second spectrum file")->required();
    cmp_cmd->add_option("--resample-points", cmp_points, "Uniform resample grid size");

    // --- bench ---
    auto* bench_cmd = app.add_subcommand("bench", "Timing and memory benchmark");
    std::string bench_molecule, bench_sizes;
    CommonFlags bench_flags;
    int repeats = 3;
    bench_cmd->add_option("molecule", bench_molecule, "Molecule JSON file")->required();
    bench_cmd->add_option("--sizes", bench_sizes, "Cluster sizes, A..B or comma list")->required();
    bench_cmd->add_option("--repeats", repeats, "Repetitions per size (median is reported)");
    add_run_flags(bench_cmd, bench_flags);
    bench_cmd->add_option("-o,--output", bench_flags.output, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (sim_cmd->parsed()) {
        const MoleculeFile mol = load_molecule(sim_molecule);
        const SimulationResult result = simulate(mol.system, sim.config);
        write_text(sim.output, spectrum_to_text(result.spectrum, sim.format, result.sticks));
        if (!sim_svg.empty()) {
            std::ofstream svg(sim_svg);
            if (!svg) throw std::runtime_error("cannot open SVG output '" + sim_svg + "'");
            write_spectrum_svg(svg, result.spectrum, mol.name.empty() ? sim_molecule : mol.name);
        }
        std::cerr << "solved " << mol.system.size() << " spins ("
                  << (result.used_exact ? (result.used_reduction ? "exact, reduced" : "exact")
                                        : "cluster")
                  << ") in " << result.solve_seconds << " s\n";
        return kExitOk;
    }

    if (conv_cmd->parsed()) {
        const MoleculeFile mol = load_molecule(conv_molecule);
        std::vector<double> fields = {conv.config.field_mhz};
        std::vector<double> fwhms = {conv.config.fwhm_hz};
        if (!conv_presets.empty()) parse_presets(conv_presets, fields, fwhms);
        std::optional<std::string> emit_dir;
        if (!conv_emit.empty()) emit_dir = conv_emit;
        const ConvergenceReport report = converge(mol.system, conv.config,
                                                  parse_sizes(conv_sizes), fields, fwhms, emit_dir);

        std::ostringstream os;
        if (conv.format == "json") {
            os << "{\n  \"reference\": \"" << report.reference << "\",\n  \"rows\": [\n";
            for (size_t i = 0; i < report.rows.size(); ++i) {
                const auto& r = report.rows[i];
                os << "    {\"field_mhz\": " << fmt(r.field_mhz) << ", \"fwhm_hz\": "
                   << fmt(r.fwhm_hz) << ", \"max_cluster\": " << r.max_cluster
                   << ", \"is_reference\": " << (r.is_reference ? "true" : "false")
                   << ", \"cos_theta\": " << fmt(r.cos_theta) << ", \"epsilon\": "
                   << fmt(r.epsilon) << ", \"solve_seconds\": " << fmt(r.solve_seconds)
                   << ", \"peak_mem_bytes\": " << r.peak_mem_bytes
                   << ", \"distinct_member_sets\": " << r.distinct_member_sets
                   << ", \"diagonalizations\": " << r.diagonalizations << "}"
                   << (i + 1 < report.rows.size() ? "," : "") << "\n";
            }
            os << "  ]\n}\n";
        } else {
            os << "field_mhz,fwhm_hz,max_cluster,is_reference,cos_theta,epsilon,"
                  "solve_seconds,peak_mem_bytes,distinct_member_sets,diagonalizations\n";
            for (const auto& r : report.rows)
                os << fmt(r.field_mhz) << ',' << fmt(r.fwhm_hz) << ',' << r.max_cluster << ','
                   << (r.is_reference ? 1 : 0) << ',' << fmt(r.cos_theta) << ','
                   << fmt(r.epsilon) << ',' << fmt(r.solve_seconds) << ',' << r.peak_mem_bytes
                   << ',' << r.distinct_member_sets << ',' << r.diagonalizations << '\n';
        }
        write_text(conv.output, os.str());
        std::cerr << "reference: " << report.reference << "\n";
        return kExitOk;
    }

    if (cmp_cmd->parsed()) {
        const Spectrum a = load_spectrum(cmp_a);
        const Spectrum b = load_spectrum(cmp_b);
        SimilarityReport report;
        try {
            report = cosine_similarity(a, b, cmp_points);
        } catch (const ValidationError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitParse;
        }
        std::cout << "cos_theta " << fmt(report.cos_theta) << "\n"
                  << "epsilon " << fmt(report.epsilon) << "\n";
        return kExitOk;
    }

    if (bench_cmd->parsed()) {
        const MoleculeFile mol = load_molecule(bench_molecule);
        const auto rows = bench(mol.system, bench_flags.config, parse_sizes(bench_sizes), repeats);
        std::ostringstream os;
        os << "max_cluster,median_seconds,peak_mem_bytes,distinct_member_sets,"
              "diagonalizations,dedup_reuse,max_sector_dim,predicted_block_dim\n";
        for (const auto& r : rows)
            os << r.max_cluster << ',' << fmt(r.median_seconds) << ',' << r.peak_mem_bytes << ','
               << r.distinct_member_sets << ',' << r.diagonalizations << ','
               << (mol.system.size() - r.distinct_member_sets) << ',' << r.max_sector_dim << ','
               << fmt(r.predicted_block_dim) << '\n';
        write_text(bench_flags.output, os.str());
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const spinspectra::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spinspectra::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spinspectra::DimensionCapError& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "hint: raise --max-cluster limits only with enough memory, shrink the "
                     "subset, or rely on magnetic equivalence\n";
        return kExitDimension;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
