#ifndef SPINORSIM_GROUND_HPP
#define SPINORSIM_GROUND_HPP

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "evolve.hpp"
#include "state.hpp"

namespace spinorsim {

/// Single-particle density matrix rho_{mu nu} = <a_mu† a_nu>, modes (-, 0, +).
struct DensityMatrix1P {
    std::array<std::array<cplx, 3>, 3> entries{};

    double trace() const {
        return std::real(entries[0][0] + entries[1][1] + entries[2][2]);
    }

    /// Real eigenvalues, ascending (Hermitian 3x3 via a real 6x6 embedding).
    std::array<double, 3> eigenvalues() const {
        RMatrix a(6, 6);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                a(i, j) = std::real(entries[i][j]);
                a(i + 3, j + 3) = std::real(entries[i][j]);
                a(i + 3, j) = std::imag(entries[i][j]);
                a(i, j + 3) = -std::imag(entries[i][j]);
            }
        SymmetricEigen eig = eigen_symmetric(std::move(a));
        // complex Hermitian eigenvalues appear twice in the embedding
        return {eig.values[0], eig.values[2], eig.values[4]};
    }
};

struct GroundState {
    double energy = 0.0;
    StateVector state;
};

/// Lowest eigenpair of the (N, m) block of the Hamiltonian.
inline GroundState ground_state(int total_n, int magnetization, const ModelParams& params) {
    BlockKey key{total_n, magnetization};
    if (FockBlock(key).dimension() == 0)
        throw std::invalid_argument("ground_state: empty block");
    EigenSystem eig = diagonalize_block(hamiltonian_block(params, key));
    GroundState g;
    g.energy = eig.eigenvalues[0];
    g.state = StateVector(total_n);
    auto& amps = g.state.block(magnetization);
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = eig.eigenvectors(i, 0);
    return g;
}

/// Parameter-free Gaussian ground-state profile on the even-n_zero lattice of
/// the m = 0 block, psi(Y) with Y = N/3 - n_zero and Y0 = -N/6 - 1/4.
inline StateVector gaussian_profile(int total_n) {
    if (total_n < 4 || total_n % 2 != 0)
        throw std::invalid_argument("gaussian_profile: even N >= 4 required");
    const double y0 = -total_n / 6.0 - 0.25;
    StateVector psi(total_n);
    FockBlock block(total_n, 0);
    auto& amps = psi.block(0);
    for (int i = 0; i < block.dimension(); ++i) {
        const double y = total_n / 3.0 - block.state_at(i).n_zero;
        const double dy = y - y0;
        amps[i] = std::exp(-std::sqrt(2.0) * dy * dy / (8.0 * std::abs(y0)) +
                           dy / (4.0 * std::abs(y0)));
    }
    psi.normalize();
    return psi;
}

/// Eigenpairs of the abstract hypercharge chain: diagonal 2(Y-Y0)², hopping
/// -2 t_Y with t_Y = (N/3 - Y)(N/3 + Y/2 + 1), on one n_zero parity sublattice.
/// Sites ordered by ascending n_zero. This keeps the printed approximate
/// hopping on purpose; the physical spectrum lives in ground_state.
enum class ChainParity { even, odd };

struct ChainResult {
    std::vector<int> n_zero_sites;
    std::vector<double> energies;      // ascending
    RMatrix vectors;                   // columns match energies
};

inline ChainResult chain_solver(int total_n, ChainParity parity) {
    if (total_n < 4) throw std::invalid_argument("chain_solver: N >= 4 required");
    const int p = (parity == ChainParity::even) ? 0 : 1;
    ChainResult out;
    for (int n0 = p; n0 <= total_n; n0 += 2) out.n_zero_sites.push_back(n0);
    const std::size_t n = out.n_zero_sites.size();
    const double y0 = -total_n / 6.0 - 0.25;
    std::vector<double> diag(n), sub(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = total_n / 3.0 - out.n_zero_sites[i];
        diag[i] = 2.0 * (y - y0) * (y - y0);
        if (i + 1 < n) {
            // bond between sites n0 and n0+2, i.e. Y' = Y - 2 and Y: -2 t_{Y'}
            const double yb = total_n / 3.0 - out.n_zero_sites[i + 1];
            sub[i] = -2.0 * (total_n / 3.0 - yb) * (total_n / 3.0 + yb / 2.0 + 1.0);
        }
    }
    SymmetricEigen eig = eigen_tridiagonal(std::move(diag), std::move(sub));
    out.energies = std::move(eig.values);
    out.vectors = std::move(eig.vectors);
    return out;
}

struct FragmentationReport {
    DensityMatrix1P density;
    std::array<double, 3> eigenvalues{};
    bool fragmented = false;
    double threshold_fraction = 0.1;
};

/// Density matrix from ladder-operator moments plus the macroscopic-eigenvalue
/// verdict: fragmented iff at least two eigenvalues exceed fraction * N.
inline FragmentationReport one_particle_density(const StateVector& state,
                                                double threshold_fraction = 0.1) {
    FragmentationReport rep;
    rep.threshold_fraction = threshold_fraction;
    std::array<StateVector, 3> lowered{apply_annihilate(0, state), apply_annihilate(1, state),
                                       apply_annihilate(2, state)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rep.density.entries[i][j] = inner(lowered[i], lowered[j]);
    rep.eigenvalues = rep.density.eigenvalues();
    int macroscopic = 0;
    for (double v : rep.eigenvalues)
        if (v > threshold_fraction * state.total_n) ++macroscopic;
    rep.fragmented = macroscopic >= 2;
    return rep;
}

} // namespace spinorsim

#endif
