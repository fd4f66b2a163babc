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
#include "spinspectra/engine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "spinspectra/parallel.hpp"

namespace spinspectra {

Subsystem make_subsystem(const SpinSystem& system, const SpectrometerSettings& settings,
                         const std::optional<std::vector<int>>& subset) {
    settings.validate();
    std::vector<int> sites;
    if (subset) {
        sites = *subset;
        std::sort(sites.begin(), sites.end());
        if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
            throw ValidationError("subsystem subset contains duplicate indices");
        for (int s : sites)
            if (s < 0 || s >= system.size())
                throw ValidationError("subsystem subset index out of range");
        if (sites.empty()) throw ValidationError("subsystem subset must be non-empty");
    } else {
        sites.resize(static_cast<size_t>(system.size()));
        for (int i = 0; i < system.size(); ++i) sites[static_cast<size_t>(i)] = i;
    }

    const int n = static_cast<int>(sites.size());
    Subsystem sub;
    sub.two_spins.reserve(static_cast<size_t>(n));
    sub.two_pi_j = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        const Nucleus& nuc = system.nucleus(sites[static_cast<size_t>(a)]);
        sub.two_spins.push_back(nuc.isotope.two_spin);
        sub.gamma.push_back(nuc.isotope.gamma);
        sub.omega.push_back(larmor_frequency(nuc, settings));
        sub.isotope_symbol.push_back(nuc.isotope.symbol);
        for (int b = a + 1; b < n; ++b) {
            const double j = system.coupling(sites[static_cast<size_t>(a)],
                                             sites[static_cast<size_t>(b)]);
            sub.two_pi_j(a, b) = sub.two_pi_j(b, a) = kTwoPi * j;
        }
    }
    // Identity contribution of the spins left out of the subsystem.
    sub.outside_dim_factor = 1.0;
    std::vector<bool> in(static_cast<size_t>(system.size()), false);
    for (int s : sites) in[static_cast<size_t>(s)] = true;
    for (int k = 0; k < system.size(); ++k)
        if (!in[static_cast<size_t>(k)])
            sub.outside_dim_factor *= system.nucleus(k).isotope.two_spin + 1;
    return sub;
}

std::vector<double> detection_weights(const Subsystem& sub,
                                      const std::optional<std::string>& detect_isotope) {
    std::vector<double> w(sub.gamma);
    if (detect_isotope)
        for (int i = 0; i < sub.sites(); ++i)
            if (sub.isotope_symbol[static_cast<size_t>(i)] != *detect_isotope)
                w[static_cast<size_t>(i)] = 0.0;
    return w;
}

Eigen::MatrixXd sector_matrix(const Subsystem& sub, const ProductBasis& basis,
                              const Sector& sector) {
    const int d = sector.dim();
    const int n = sub.sites();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);

    // Local index lookup for flip-flop targets within this sector.
    std::unordered_map<uint64_t, int> local;
    local.reserve(static_cast<size_t>(d) * 2);
    for (int r = 0; r < d; ++r) local.emplace(sector.states[static_cast<size_t>(r)], r);

    for (int r = 0; r < d; ++r) {
        const uint64_t s = sector.states[static_cast<size_t>(r)];
        double diag = 0.0;
        for (int i = 0; i < n; ++i)
            diag -= sub.omega[static_cast<size_t>(i)] * 0.5 * basis.two_m(s, i);
        for (int k = 0; k < n; ++k) {
            const int mk = basis.two_m(s, k);
            for (int l = k + 1; l < n; ++l) {
                const double c = sub.two_pi_j(k, l);
                if (c == 0.0) continue;
                diag += c * 0.25 * mk * basis.two_m(s, l);
                // Flip-flop (1/2)(I+_k I-_l + I-_k I+_l): raise k, lower l
                // (and the transpose entry comes from the state on the other
                // side when r runs over it).
                const int dk = basis.digit(s, k);
                const int dl = basis.digit(s, l);
                if (dk > 0 && dl < basis.two_spin(l)) {
                    const double amp = 0.5 * c *
                        raise_coefficient(basis.two_spin(k), basis.two_m(s, k)) *
                        raise_coefficient(basis.two_spin(l), basis.two_m(s, l) - 2);
                    const uint64_t t = basis.with_digit(basis.with_digit(s, k, dk - 1), l, dl + 1);
                    H(local.at(t), r) += amp;
                }
                if (dl > 0 && dk < basis.two_spin(k)) {
                    const double amp = 0.5 * c *
                        raise_coefficient(basis.two_spin(l), basis.two_m(s, l)) *
                        raise_coefficient(basis.two_spin(k), basis.two_m(s, k) - 2);
                    const uint64_t t = basis.with_digit(basis.with_digit(s, l, dl - 1), k, dk + 1);
                    H(local.at(t), r) += amp;
                }
            }
        }
        H(r, r) += diag;
    }
    return H;
}

Eigen::MatrixXd full_matrix(const Subsystem& sub, const ProductBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& sector : split_sectors(basis)) {
        const Eigen::MatrixXd block = sector_matrix(sub, basis, sector);
        for (int r = 0; r < sector.dim(); ++r)
            for (int c = 0; c < sector.dim(); ++c)
                H(static_cast<Eigen::Index>(sector.states[static_cast<size_t>(r)]),
                  static_cast<Eigen::Index>(sector.states[static_cast<size_t>(c)])) = block(r, c);
    }
    return H;
}

std::vector<Triplet> raising_triplets(const ProductBasis& basis,
                                      const std::vector<double>& weights) {
    std::vector<Triplet> out;
    for (uint64_t s = 0; s < basis.dim(); ++s) {
        for (int j = 0; j < basis.sites(); ++j) {
            const double w = weights[static_cast<size_t>(j)];
            if (w == 0.0) continue;
            const int d = basis.digit(s, j);
            if (d == 0) continue;  // already at m = +S
            const double coef = w * raise_coefficient(basis.two_spin(j), basis.two_m(s, j));
            out.push_back(Triplet{basis.with_digit(s, j, d - 1), s, coef});
        }
    }
    return out;
}

uint64_t BlockEigensystem::total_dim() const {
    uint64_t t = 0;
    for (const auto& s : sectors) t += s.states.size();
    return t;
}

int BlockEigensystem::max_sector_dim() const {
    int m = 0;
    for (const auto& s : sectors) m = std::max(m, static_cast<int>(s.states.size()));
    return m;
}

BlockEigensystem diagonalize_blocks(const Subsystem& sub, const EngineOptions& opts) {
    const double j_scale = sub.two_pi_j.cwiseAbs().maxCoeff();
    const double j_asym = (sub.two_pi_j - sub.two_pi_j.transpose()).cwiseAbs().maxCoeff();
    if (j_scale > 0.0 && j_asym > 1e-12 * j_scale)
        throw ValidationError("coupling table is not symmetric; upstream bug");

    BlockEigensystem eig;
    eig.basis = ProductBasis(sub.two_spins, opts.dimension_cap);
    auto sectors = split_sectors(eig.basis);
    eig.sectors.resize(sectors.size());

    parallel_for(static_cast<int>(sectors.size()), opts.threads, [&](int si) {
        const Sector& sec = sectors[static_cast<size_t>(si)];
        Eigen::MatrixXd H = sector_matrix(sub, eig.basis, sec);

        const double scale = H.cwiseAbs().maxCoeff();
        const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
        if (scale > 0.0 && asym > 1e-12 * scale)
            throw ValidationError("sector Hamiltonian is not symmetric; upstream bug");

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("sector eigensolver failed to converge");

        if (opts.check_residual) {
            const double hnorm = H.norm();
            const double res =
                (H * solver.eigenvectors() -
                 solver.eigenvectors() * solver.eigenvalues().asDiagonal()).norm();
            if (hnorm > 0.0 && res > 1e-10 * hnorm)
                throw std::runtime_error("sector reconstruction residual above 1e-10");
        }

        eig.sectors[static_cast<size_t>(si)] =
            SectorEigen{sec.two_mz, sec.states, solver.eigenvalues(), solver.eigenvectors()};
    });
    return eig;
}

namespace {

// M+(w) V_lo, scattered into the rows of the target sector.
Eigen::MatrixXd apply_raising(const ProductBasis& basis, const SectorEigen& lo,
                              const SectorEigen& hi,
                              const std::unordered_map<uint64_t, int>& hi_local,
                              const std::vector<double>& weights) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(hi.states.size()),
                                                lo.eigenvectors.cols());
    for (int r = 0; r < static_cast<int>(lo.states.size()); ++r) {
        const uint64_t s = lo.states[static_cast<size_t>(r)];
        for (int j = 0; j < basis.sites(); ++j) {
            const double w = weights[static_cast<size_t>(j)];
            if (w == 0.0) continue;
            const int d = basis.digit(s, j);
            if (d == 0) continue;
            const double coef = w * raise_coefficient(basis.two_spin(j), basis.two_m(s, j));
            const auto it = hi_local.find(basis.with_digit(s, j, d - 1));
            if (it == hi_local.end()) continue;  // unreachable for valid sectors
            out.row(it->second) += coef * lo.eigenvectors.row(r);
        }
    }
    return out;
}

// Merged sticks sit at the unweighted mean of their members' positions:
// the position set of a merge group is identical for every operator pair
// sharing one eigensystem, so all spin-resolved pieces and the plain
// spectrum coalesce to bit-identical frequencies.
void coalesce_and_append(std::vector<Stick>& pair_sticks, double radius,
                         std::vector<Stick>& out) {
    if (pair_sticks.empty()) return;
    std::sort(pair_sticks.begin(), pair_sticks.end(),
              [](const Stick& a, const Stick& b) { return a.omega < b.omega; });
    Stick current = pair_sticks.front();
    double pos_acc = current.omega;
    int count = 1;
    for (size_t i = 1; i < pair_sticks.size(); ++i) {
        const Stick& s = pair_sticks[i];
        if (s.omega - current.omega <= radius) {
            current.weight += s.weight;
            pos_acc += s.omega;
            current.omega = pos_acc / ++count;
        } else {
            out.push_back(current);
            current = s;
            pos_acc = s.omega;
            count = 1;
        }
    }
    out.push_back(current);
}

}  // namespace

std::vector<StickSpectrum> sticks_from_eigensystem_multi(
    const BlockEigensystem& eig, const Subsystem& sub,
    const std::vector<std::vector<double>>& left_weight_sets,
    const std::vector<double>& right_weights, const EngineOptions& opts) {
    const double radius = opts.coalesce_rel * opts.eta;
    std::vector<StickSpectrum> results(left_weight_sets.size());

    // Pair sectors with delta two_mz = +2 (Mz descending ordering).
    for (size_t hi_i = 0; hi_i + 1 < eig.sectors.size(); ++hi_i) {
        const SectorEigen& hi = eig.sectors[hi_i];
        const SectorEigen& lo = eig.sectors[hi_i + 1];
        if (hi.two_mz != lo.two_mz + 2) continue;

        std::unordered_map<uint64_t, int> hi_local;
        hi_local.reserve(hi.states.size() * 2);
        for (int r = 0; r < static_cast<int>(hi.states.size()); ++r)
            hi_local.emplace(hi.states[static_cast<size_t>(r)], r);

        const Eigen::MatrixXd A =
            hi.eigenvectors.transpose() * apply_raising(eig.basis, lo, hi, hi_local, right_weights);

        for (size_t li = 0; li < left_weight_sets.size(); ++li) {
            Eigen::MatrixXd B;
            if (left_weight_sets[li] == right_weights)
                B = A;
            else
                B = hi.eigenvectors.transpose() *
                    apply_raising(eig.basis, lo, hi, hi_local, left_weight_sets[li]);

            std::vector<Stick> pair_sticks;
            pair_sticks.reserve(static_cast<size_t>(A.size()));
            for (Eigen::Index m = 0; m < A.rows(); ++m) {
                for (Eigen::Index n = 0; n < A.cols(); ++n) {
                    const double w = B(m, n) * A(m, n) * sub.outside_dim_factor;
                    if (w == 0.0) continue;
                    results[li].total_weight += w;
                    pair_sticks.push_back(Stick{lo.eigenvalues(n) - hi.eigenvalues(m), w});
                }
            }
            coalesce_and_append(pair_sticks, radius, results[li].sticks);
        }
    }

    for (auto& res : results) {
        const double floor = opts.weight_floor_rel * std::abs(res.total_weight);
        std::erase_if(res.sticks, [floor](const Stick& s) { return std::abs(s.weight) < floor; });
        std::sort(res.sticks.begin(), res.sticks.end(), [](const Stick& a, const Stick& b) {
            return a.omega != b.omega ? a.omega < b.omega : a.weight < b.weight;
        });
    }
    return results;
}

StickSpectrum sticks_from_eigensystem(const BlockEigensystem& eig, const Subsystem& sub,
                                      const std::vector<double>& left_weights,
                                      const std::vector<double>& right_weights,
                                      const EngineOptions& opts) {
    return sticks_from_eigensystem_multi(eig, sub, {left_weights}, right_weights, opts).front();
}

StickSpectrum compute_sticks(const Subsystem& sub, const std::vector<double>& left_weights,
                             const std::vector<double>& right_weights,
                             const EngineOptions& opts) {
    const BlockEigensystem eig = diagonalize_blocks(sub, opts);
    return sticks_from_eigensystem(eig, sub, left_weights, right_weights, opts);
}

double ladder_trace(const Subsystem& sub, const std::vector<double>& left_weights,
                    const std::vector<double>& right_weights) {
    // Tr[I-_i I+_j] vanishes for i != j; per site, with j = S,
    // Tr[I- I+] = sum_m (S(S+1) - m(m+1)) = (2/3) j (j+1) (2j+1).
    double total = 0.0;
    double full_dim = 1.0;
    for (int i = 0; i < sub.sites(); ++i) full_dim *= sub.two_spins[static_cast<size_t>(i)] + 1;
    for (int i = 0; i < sub.sites(); ++i) {
        const double j = 0.5 * sub.two_spins[static_cast<size_t>(i)];
        const double site_trace = (2.0 / 3.0) * j * (j + 1.0) * (2.0 * j + 1.0);
        const double identity_dims = full_dim / (sub.two_spins[static_cast<size_t>(i)] + 1);
        total += left_weights[static_cast<size_t>(i)] * right_weights[static_cast<size_t>(i)] *
                 site_trace * identity_dims;
    }
    return total * sub.outside_dim_factor;
}

}  // namespace spinspectra
