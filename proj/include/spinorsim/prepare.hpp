#ifndef SPINORSIM_PREPARE_HPP
#define SPINORSIM_PREPARE_HPP

#include <array>
#include <cmath>
#include <map>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "algebra.hpp"
#include "fock.hpp"
#include "state.hpp"

namespace spinorsim {

/// Raman-prepared product state (sum_j alpha_j a_j†)^N |vac> / sqrt(N!).
struct CoherentSpec {
    std::array<cplx, 3> alphas{}; // (alpha_-, alpha_0, alpha_+)
    int total_n = 0;

    double norm_sq() const {
        return std::norm(alphas[0]) + std::norm(alphas[1]) + std::norm(alphas[2]);
    }

    static CoherentSpec from_amplitudes(int n, cplx a_minus, cplx a_zero, cplx a_plus) {
        return {{a_minus, a_zero, a_plus}, n};
    }

    /// alpha_0 = sqrt(P0) e^{i theta/2}, alpha_± = sqrt((1-P0)/2).
    static CoherentSpec from_populations(int n, double p0, double theta) {
        if (p0 < 0.0 || p0 > 1.0)
            throw std::invalid_argument("CoherentSpec: P0 out of [0,1]");
        const double side = std::sqrt((1.0 - p0) / 2.0);
        return {{cplx(side), std::sqrt(p0) * std::exp(cplx(0.0, theta / 2.0)), cplx(side)}, n};
    }
};

/// Dicke-type label |l, m> at fixed atom number.
struct AngularLabel {
    int l = 0;
    int m = 0;
    int total_n = 0;

    bool valid() const {
        return std::abs(m) <= l && l <= total_n && ((total_n - l) % 2 == 0);
    }
};

inline StateVector fock_state(const ModeOccupation& occ) {
    if (!occ.valid()) throw std::invalid_argument("fock_state: negative occupation");
    StateVector psi(occ.total());
    FockBlock b(occ.total(), occ.magnetization());
    psi.block(occ.magnetization())[b.index_of(occ)] = 1.0;
    return psi;
}

/// Multinomial expansion of the coherent state over the full fixed-N basis.
inline StateVector coherent_state(const CoherentSpec& spec) {
    if (spec.total_n < 1) throw std::invalid_argument("coherent_state: N >= 1 required");
    if (std::abs(spec.norm_sq() - 1.0) > 1e-12)
        throw std::invalid_argument("coherent_state: amplitudes not normalized");
    const double lg_n = std::lgamma(spec.total_n + 1.0);
    std::array<double, 3> logmag;
    std::array<double, 3> phase;
    for (int j = 0; j < 3; ++j) {
        logmag[j] = std::abs(spec.alphas[j]) > 0.0 ? std::log(std::abs(spec.alphas[j])) : 0.0;
        phase[j] = std::arg(spec.alphas[j]);
    }
    StateVector psi(spec.total_n);
    for (const FockBlock& b : enumerate_full(spec.total_n)) {
        if (b.dimension() == 0) continue;
        auto& amps = psi.block(b.magnetization());
        for (int i = 0; i < b.dimension(); ++i) {
            const ModeOccupation occ = b.state_at(i);
            const std::array<int, 3> ns{occ.n_minus, occ.n_zero, occ.n_plus};
            bool zero = false;
            double lm = 0.5 * lg_n;
            double ph = 0.0;
            for (int j = 0; j < 3; ++j) {
                if (ns[j] > 0 && spec.alphas[j] == 0.0) {
                    zero = true;
                    break;
                }
                lm += ns[j] * logmag[j] - 0.5 * std::lgamma(ns[j] + 1.0);
                ph += ns[j] * phase[j];
            }
            amps[i] = zero ? cplx(0.0) : std::exp(lm) * std::exp(cplx(0.0, ph));
        }
    }
    psi.prune();
    psi.normalize();
    return psi;
}

namespace detail {

using big_int = boost::multiprecision::cpp_int;
using big_float = boost::multiprecision::cpp_bin_float_100;

inline big_int binom(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    big_int r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline big_float to_f(const big_int& x) { return big_float(x); }

/// Normalization s_l of the Fock-to-angular transformation.
inline big_float angular_norm_sl(int total_n, int l) {
    const int jmax = (total_n - l) / 2;
    big_int sum = 0;
    for (int j = 0; j <= jmax; ++j)
        sum += (big_int(1) << (2 * (jmax - j))) * binom(2 * j, j) *
               binom((total_n + l) / 2 - j, l);
    big_float denom = to_f(sum);
    big_float numer = to_f(big_int(1) << (2 * jmax));
    return sqrt(numer / denom);
}

} // namespace detail

/// Transformation coefficient <n0-ladder state | l, m> for the basis state
/// with the given n_zero (the paper's summation index k equals n_zero / 2).
/// Evaluated with exact big-integer binomials under high-precision square
/// roots; the alternating sum is otherwise catastrophically cancellative.
inline double glmk(const AngularLabel& label, int n_zero) {
    using detail::big_float;
    using detail::big_int;
    using detail::binom;
    using detail::to_f;
    if (!label.valid()) throw std::invalid_argument("glmk: invalid angular label");
    const int N = label.total_n, l = label.l, m = label.m;
    FockBlock block(N, m);
    if (n_zero < 0 || n_zero > N - std::abs(m) || n_zero % 2 != block.parity())
        throw std::invalid_argument("glmk: n_zero outside the (N, m) block");

    const big_float sl = detail::angular_norm_sl(N, l);
    const big_float denom =
        sqrt(to_f(binom(N - n_zero, (N - m - n_zero) / 2) * binom(2 * l, l - m)));

    big_float sum = 0;
    const int rmax = std::min(n_zero / 2, (N - l) / 2);
    for (int r = 0; r <= rmax; ++r) {
        big_int inside = binom(2 * r, r) * binom(n_zero, 2 * r) * binom(l, n_zero - 2 * r) *
                         binom(N - n_zero, l - n_zero + 2 * r) *
                         binom(N - l - 2 * r, (N - l) / 2 - r);
        if (inside == 0) continue;
        big_int outside = binom(l - n_zero + 2 * r, (l - m - n_zero) / 2 + r);
        if (outside == 0) continue;
        big_float term = sqrt(to_f(inside)) * to_f(outside) / to_f(big_int(1) << (2 * r));
        sum += (r % 2 == 0) ? term : -term;
    }
    big_float pref = sqrt(to_f(big_int(1) << n_zero)); // 2^k with 2k = n_zero
    return static_cast<double>(pref * sl * sum / denom);
}

/// Closed form for the stretched case l = N.
inline double glmk_stretched(int total_n, int m, int n_zero) {
    using detail::big_float;
    using detail::big_int;
    using detail::binom;
    using detail::to_f;
    big_float num = to_f(binom(total_n, n_zero) * binom(total_n - n_zero, (total_n - m - n_zero) / 2));
    big_float den = to_f(binom(2 * total_n, total_n - m));
    big_float pref = sqrt(to_f(big_int(1) << n_zero));
    return static_cast<double>(pref * sqrt(num / den));
}

enum class AngularMethod { analytic, numeric };

namespace detail {

/// Real symmetric tridiagonal form of the L² block (ascending n_zero).
inline std::pair<std::vector<double>, std::vector<double>> l2_tridiagonal(BlockKey key) {
    OperatorMatrix l2 = operator_matrix(OperatorKind::L2, key);
    const std::size_t n = l2.entries.rows;
    std::vector<double> diag(n), sub(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = std::real(l2.entries(i, i));
        if (i + 1 < n) sub[i] = std::real(l2.entries(i + 1, i));
    }
    return {diag, sub};
}

/// Eigen-decomposition of the L² block with l labels recovered from the
/// l(l+1) spectrum. Columns ordered by ascending l.
struct AngularBasis {
    std::vector<int> l_values;
    RMatrix vectors; // column j is |l_values[j], m>
};

inline AngularBasis angular_basis(BlockKey key) {
    auto [diag, sub] = l2_tridiagonal(key);
    SymmetricEigen eig = eigen_tridiagonal(diag, sub);
    AngularBasis out;
    out.vectors = eig.vectors;
    const std::size_t n = eig.values.size();
    out.l_values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lam = eig.values[j];
        const int l = static_cast<int>(std::lround(0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * lam))));
        if (std::abs(lam - double(l) * (l + 1.0)) > 1e-6 * std::max(1.0, lam))
            throw numerical_error("angular_basis: L2 eigenvalue off the l(l+1) ladder");
        out.l_values[j] = l;
    }
    // ascending eigenvalues already give ascending l
    return out;
}

/// Sign convention: amplitude at the largest n_zero positive.
inline void fix_sign_largest_n0(std::vector<cplx>& amps) {
    for (std::size_t i = amps.size(); i-- > 0;) {
        if (std::abs(amps[i]) > 1e-12) {
            if (std::real(amps[i]) < 0.0)
                for (auto& a : amps) a = -a;
            return;
        }
    }
}

} // namespace detail

/// |l, m> as a block-scope state, by closed-form coefficients or by L²
/// eigendecomposition.
inline StateVector angular_state(const AngularLabel& label,
                                 AngularMethod method = AngularMethod::numeric) {
    if (!label.valid()) throw std::invalid_argument("angular_state: invalid label");
    FockBlock block(label.total_n, label.m);
    StateVector psi(label.total_n);
    auto& amps = psi.block(label.m);
    if (method == AngularMethod::analytic) {
        for (int i = 0; i < block.dimension(); ++i)
            amps[i] = glmk(label, block.state_at(i).n_zero);
        psi.normalize();
        return psi;
    }
    detail::AngularBasis basis = detail::angular_basis(block.key());
    for (std::size_t j = 0; j < basis.l_values.size(); ++j) {
        if (basis.l_values[j] != label.l) continue;
        for (int i = 0; i < block.dimension(); ++i) amps[i] = basis.vectors(i, j);
        detail::fix_sign_largest_n0(amps);
        return psi;
    }
    throw numerical_error("angular_state: no block eigenvalue matches l(l+1)");
}

/// eta = alpha_0² / (2 alpha_- alpha_+); eta = 1 marks a stationary state.
struct EtaResult {
    cplx value{};
    bool defined = false;    // false when alpha_- alpha_+ = 0
    bool stationary = false; // |eta - 1| <= 1e-12
};

inline EtaResult eta(const CoherentSpec& spec) {
    EtaResult r;
    const cplx denom = 2.0 * spec.alphas[0] * spec.alphas[2];
    if (std::abs(denom) < 1e-300) return r;
    r.defined = true;
    r.value = spec.alphas[1] * spec.alphas[1] / denom;
    r.stationary = std::abs(r.value - 1.0) <= 1e-12;
    return r;
}

/// Amplitudes <l, m | state> over the numeric angular basis.
inline std::map<std::pair<int, int>, cplx> angular_projection(const StateVector& state) {
    std::map<std::pair<int, int>, cplx> out;
    for (const auto& [m, amps] : state.blocks) {
        detail::AngularBasis basis = detail::angular_basis(BlockKey{state.total_n, m});
        std::vector<cplx> fixed;
        for (std::size_t j = 0; j < basis.l_values.size(); ++j) {
            fixed.assign(amps.size(), 0.0);
            for (std::size_t i = 0; i < amps.size(); ++i) fixed[i] = basis.vectors(i, j);
            detail::fix_sign_largest_n0(fixed);
            cplx overlap = 0.0;
            for (std::size_t i = 0; i < amps.size(); ++i)
                overlap += std::conj(fixed[i]) * amps[i];
            out[{basis.l_values[j], m}] = overlap;
        }
    }
    return out;
}

} // namespace spinorsim

#endif
