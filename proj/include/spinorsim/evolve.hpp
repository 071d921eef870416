#ifndef SPINORSIM_EVOLVE_HPP
#define SPINORSIM_EVOLVE_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "prepare.hpp"
#include "state.hpp"

namespace spinorsim {

/// Spectral decomposition of one block Hamiltonian.
struct EigenSystem {
    BlockKey key;
    std::vector<double> eigenvalues;  // ascending
    RMatrix eigenvectors;             // orthonormal columns
};

/// Uniform time grid in units of hbar/|lambda_a|; `steps` grid points.
struct TimeGrid {
    double t_start = 0.0;
    double t_stop = 0.0;
    int steps = 1;

    void validate() const {
        if (steps < 1) throw std::invalid_argument("TimeGrid: steps >= 1 required");
        if (steps > 1 && !(t_stop > t_start))
            throw std::invalid_argument("TimeGrid: t_stop > t_start required");
    }

    double time_at(int i) const {
        if (steps == 1) return t_start;
        return t_start + (t_stop - t_start) * double(i) / double(steps - 1);
    }
};

inline EigenSystem diagonalize_block(const OperatorMatrix& h) {
    const std::size_t n = h.entries.rows;
    if (h.entries.cols != n) throw std::invalid_argument("diagonalize_block: square input required");
    // block Hamiltonians are real symmetric tridiagonal in the canonical order
    bool tridiag = true;
    for (std::size_t i = 0; i < n && tridiag; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::imag(h.entries(i, j)) != 0.0 ||
                (std::max(i, j) > std::min(i, j) + 1 && h.entries(i, j) != 0.0)) {
                tridiag = false;
                break;
            }
    SymmetricEigen eig;
    try {
        if (tridiag) {
            std::vector<double> d(n), e(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                d[i] = std::real(h.entries(i, i));
                if (i + 1 < n) e[i] = std::real(h.entries(i + 1, i));
            }
            eig = eigen_tridiagonal(std::move(d), std::move(e));
        } else {
            RMatrix a(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (std::imag(h.entries(i, j)) != 0.0)
                        throw std::invalid_argument("diagonalize_block: complex entries");
                    a(i, j) = std::real(h.entries(i, j));
                }
            eig = eigen_symmetric(std::move(a));
        }
    } catch (const numerical_error& err) {
        throw numerical_error("diagonalize_block: block (N=" + std::to_string(h.source.total_n) +
                              ", m=" + std::to_string(h.source.magnetization) + "): " + err.what());
    }
    return EigenSystem{h.source, std::move(eig.values), std::move(eig.vectors)};
}

/// Spectral propagator with per-block eigensystem caching. Without magnetic
/// terms each (N, m) block evolves independently; with them the full fixed-N
/// basis is diagonalized once (subject to the dense cap).
class Evolver {
public:
    Evolver(ModelParams params, int total_n) : params_(params), total_n_(total_n) {}

    const ModelParams& params() const { return params_; }

    StateVector at(const StateVector& psi0, double t) const {
        if (psi0.total_n != total_n_)
            throw std::invalid_argument("Evolver: state atom number mismatch");
        if (params_.has_magnetic()) return full_at(psi0, t);
        StateVector out(total_n_);
        for (const auto& [m, amps] : psi0.blocks) {
            const EigenSystem& eig = block_eigen(m);
            const std::size_t n = amps.size();
            std::vector<cplx> coeff(n, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    coeff[k] += eig.eigenvectors(i, k) * amps[i];
            for (std::size_t k = 0; k < n; ++k)
                coeff[k] *= std::exp(cplx(0.0, -eig.eigenvalues[k] * t));
            auto& dst = out.block(m);
            for (std::size_t i = 0; i < n; ++i) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += eig.eigenvectors(i, k) * coeff[k];
                dst[i] = s;
            }
        }
        return out;
    }

private:
    const EigenSystem& block_eigen(int m) const {
        auto it = cache_.find(m);
        if (it == cache_.end()) {
            EigenSystem eig = diagonalize_block(hamiltonian_block(params_, BlockKey{total_n_, m}));
            it = cache_.emplace(m, std::move(eig)).first;
        }
        return it->second;
    }

    StateVector full_at(const StateVector& psi0, double t) const {
        if (!full_) {
            OperatorMatrix h = hamiltonian_full(params_, total_n_);
            const std::size_t n = h.entries.rows;
            RMatrix a(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) a(i, j) = std::real(h.entries(i, j));
            full_ = std::make_unique<SymmetricEigen>(eigen_symmetric(std::move(a)));
        }
        FullBasis basis(total_n_);
        const std::size_t n = basis.dimension();
        std::vector<cplx> flat(n, 0.0);
        for (const auto& [m, amps] : psi0.blocks)
            for (std::size_t i = 0; i < amps.size(); ++i)
                flat[basis.block_offset(m) + i] = amps[i];
        std::vector<cplx> coeff(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) coeff[k] += full_->vectors(i, k) * flat[i];
            coeff[k] *= std::exp(cplx(0.0, -full_->values[k] * t));
        }
        StateVector out(total_n_);
        for (const FockBlock& b : basis.blocks()) {
            if (b.dimension() == 0) continue;
            auto& dst = out.block(b.magnetization());
            const int off = basis.block_offset(b.magnetization());
            for (int i = 0; i < b.dimension(); ++i) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += full_->vectors(off + i, k) * coeff[k];
                dst[i] = s;
            }
        }
        return out;
    }

    ModelParams params_;
    int total_n_;
    mutable std::map<int, EigenSystem> cache_;
    mutable std::unique_ptr<SymmetricEigen> full_;
};

inline StateVector evolve(const StateVector& psi0, const ModelParams& params, double t) {
    return Evolver(params, psi0.total_n).at(psi0, t);
}

/// Analytic cross-check: propagate in the angular basis with the closed-form
/// energies E(l) = mu N - lambda_s N(N+1) + lambda_a (l(l+1) - 2N).
inline StateVector evolve_oracle_angular(const StateVector& psi0, const ModelParams& params,
                                         double t) {
    if (psi0.total_n > 40)
        throw resource_error("evolve_oracle_angular: oracle limited to N <= 40");
    if (params.has_magnetic())
        throw std::invalid_argument("evolve_oracle_angular: no magnetic terms in the oracle");
    const double n = psi0.total_n;
    const double e0 = params.mu * n - params.lambda_s * n * (n + 1.0) - 2.0 * n * params.lambda_a;
    StateVector out(psi0.total_n);
    for (const auto& [m, amps] : psi0.blocks) {
        detail::AngularBasis basis = detail::angular_basis(BlockKey{psi0.total_n, m});
        const std::size_t dim = amps.size();
        auto& dst = out.block(m);
        for (std::size_t j = 0; j < basis.l_values.size(); ++j) {
            cplx coeff = 0.0;
            for (std::size_t i = 0; i < dim; ++i) coeff += basis.vectors(i, j) * amps[i];
            const double l = basis.l_values[j];
            coeff *= std::exp(cplx(0.0, -(e0 + params.lambda_a * l * (l + 1.0)) * t));
            for (std::size_t i = 0; i < dim; ++i) dst[i] += basis.vectors(i, j) * coeff;
        }
    }
    return out;
}

/// A named scalar observable of a state.
struct Observer {
    std::string name;
    std::function<double(const StateVector&)> eval;
};

inline Observer population_observer(const std::string& name, int mode) {
    return {name, [mode](const StateVector& psi) {
                double s = 0.0;
                for (const auto& [m, amps] : psi.blocks) {
                    FockBlock b(psi.total_n, m);
                    for (std::size_t i = 0; i < amps.size(); ++i)
                        s += detail::occ_component(b.state_at(static_cast<int>(i)), mode) *
                             std::norm(amps[i]);
                }
                return s;
            }};
}

inline Observer expectation_observer(const std::string& name, OperatorKind kind) {
    return {name, [kind](const StateVector& psi) { return std::real(expectation(psi, kind)); }};
}

struct TimeSeries {
    std::vector<std::string> columns; // leading column is t
    std::vector<std::vector<double>> rows;
};

inline TimeSeries time_series(const StateVector& psi0, const ModelParams& params,
                              const TimeGrid& grid, const std::vector<Observer>& observers) {
    grid.validate();
    // fail fast on scope mismatches before any evolution work
    for (const auto& obs : observers) (void)obs.eval(psi0);
    Evolver evolver(params, psi0.total_n);
    TimeSeries ts;
    ts.columns.push_back("t");
    for (const auto& obs : observers) ts.columns.push_back(obs.name);
    ts.rows.resize(grid.steps);
    for (int i = 0; i < grid.steps; ++i) {
        const double t = grid.time_at(i);
        StateVector psi = evolver.at(psi0, t);
        auto& row = ts.rows[i];
        row.reserve(observers.size() + 1);
        row.push_back(t);
        for (const auto& obs : observers) row.push_back(obs.eval(psi));
    }
    return ts;
}

} // namespace spinorsim

#endif
