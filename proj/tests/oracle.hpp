// Brute-force dense oracle used only by the tests. It enumerates the
// three-mode Fock basis in its own (lexicographic) order and realizes every
// operator directly from the bosonic ladder rules, independently of the
// library's block bookkeeping.
#pragma once

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include <spinorsim/state.hpp>

namespace oracle {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;
using Mat = std::vector<Vec>; // row major, Mat[i][j]

// occupations ordered (n_minus, n_zero, n_plus), lexicographic
inline std::vector<std::array<int, 3>> basis(int n) {
    std::vector<std::array<int, 3>> out;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b) out.push_back({a, b, n - a - b});
    return out;
}

inline int index_of(const std::vector<std::array<int, 3>>& bas, const std::array<int, 3>& occ) {
    for (std::size_t i = 0; i < bas.size(); ++i)
        if (bas[i] == occ) return static_cast<int>(i);
    throw std::logic_error("oracle: occupation not in basis");
}

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, Vec(c, 0.0)); }

inline Mat eye(std::size_t n) {
    Mat m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline Mat mul(const Mat& x, const Mat& y) {
    Mat z = zeros(x.size(), y.empty() ? 0 : y[0].size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (x[i][k] == 0.0) continue;
            for (std::size_t j = 0; j < y[0].size(); ++j) z[i][j] += x[i][k] * y[k][j];
        }
    return z;
}

inline Mat add(const Mat& x, const Mat& y) {
    Mat z = x;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = 0; j < z[i].size(); ++j) z[i][j] += y[i][j];
    return z;
}

inline Mat sub(const Mat& x, const Mat& y) {
    Mat z = x;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = 0; j < z[i].size(); ++j) z[i][j] -= y[i][j];
    return z;
}

inline Mat scale(cplx s, const Mat& x) {
    Mat z = x;
    for (auto& row : z)
        for (auto& v : row) v *= s;
    return z;
}

inline Mat dagger(const Mat& x) {
    Mat z = zeros(x.empty() ? 0 : x[0].size(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x[i].size(); ++j) z[j][i] = std::conj(x[i][j]);
    return z;
}

inline Mat commutator(const Mat& x, const Mat& y) { return sub(mul(x, y), mul(y, x)); }

inline double max_abs(const Mat& x) {
    double m = 0.0;
    for (const auto& row : x)
        for (const auto& v : row) m = std::max(m, std::abs(v));
    return m;
}

/// a_create† a_annihilate within the fixed-N basis.
inline Mat adag_a(int n, int create, int annihilate) {
    auto bas = basis(n);
    Mat m = zeros(bas.size(), bas.size());
    for (std::size_t j = 0; j < bas.size(); ++j) {
        std::array<int, 3> s = bas[j];
        if (s[annihilate] == 0) continue;
        const double f1 = std::sqrt(double(s[annihilate]));
        s[annihilate] -= 1;
        const double f2 = std::sqrt(double(s[create] + 1));
        s[create] += 1;
        m[index_of(bas, s)][j] += f1 * f2;
    }
    return m;
}

/// a_mode from the N basis to the N-1 basis.
inline Mat annihilate(int n, int mode) {
    auto src = basis(n);
    auto dst = basis(n - 1);
    Mat m = zeros(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
        std::array<int, 3> s = src[j];
        if (s[mode] == 0) continue;
        const double f = std::sqrt(double(s[mode]));
        s[mode] -= 1;
        m[index_of(dst, s)][j] += f;
    }
    return m;
}

// SU(3) generators from their mode-pair definitions (modes 0=-, 1=0, 2=+)
inline Mat t_plus(int n) { return adag_a(n, 2, 0); }
inline Mat t_minus(int n) { return adag_a(n, 0, 2); }
inline Mat u_plus(int n) { return adag_a(n, 0, 1); }
inline Mat u_minus(int n) { return adag_a(n, 1, 0); }
inline Mat v_plus(int n) { return adag_a(n, 2, 1); }
inline Mat v_minus(int n) { return adag_a(n, 1, 2); }

inline Mat t3(int n) { return scale(0.5, sub(adag_a(n, 2, 2), adag_a(n, 0, 0))); }
inline Mat u3(int n) { return scale(0.5, sub(adag_a(n, 0, 0), adag_a(n, 1, 1))); }
inline Mat v3(int n) { return scale(0.5, sub(adag_a(n, 2, 2), adag_a(n, 1, 1))); }

inline Mat hypercharge(int n) {
    Mat m = add(adag_a(n, 2, 2), adag_a(n, 0, 0));
    return scale(1.0 / 3.0, sub(m, scale(2.0, adag_a(n, 1, 1))));
}

/// Spin-1 collective angular momentum built independently from the standard
/// single-particle matrix elements: L+ = sqrt(2)(a+† a0 + a0† a-).
inline Mat l_plus(int n) {
    return scale(std::sqrt(2.0), add(adag_a(n, 2, 1), adag_a(n, 1, 0)));
}

inline Mat lz(int n) { return sub(adag_a(n, 2, 2), adag_a(n, 0, 0)); }

inline Mat l2(int n) {
    Mat lp = l_plus(n);
    Mat z = lz(n);
    return add(add(mul(dagger(lp), lp), mul(z, z)), z);
}

/// Singlet pair annihilator A = (a0 a0 - 2 a+ a-)/sqrt(3), N -> N-2.
inline Mat singlet(int n) {
    Mat a00 = mul(annihilate(n - 1, 1), annihilate(n, 1));
    Mat apm = mul(annihilate(n - 1, 2), annihilate(n, 0));
    return scale(1.0 / std::sqrt(3.0), sub(a00, scale(2.0, apm)));
}

inline Mat adag_a_singlet(int n) {
    Mat a = singlet(n);
    return mul(dagger(a), a);
}

inline Mat g_y(int n) {
    Mat kp = mul(v_plus(n), u_plus(n));
    return scale(2.0, add(kp, dagger(kp)));
}

/// Flatten a library state onto the oracle basis order.
inline Vec to_vec(const spinorsim::StateVector& psi) {
    auto bas = basis(psi.total_n);
    Vec v(bas.size(), 0.0);
    for (const auto& [m, amps] : psi.blocks) {
        spinorsim::FockBlock b(psi.total_n, m);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            auto occ = b.state_at(static_cast<int>(i));
            v[index_of(bas, {occ.n_minus, occ.n_zero, occ.n_plus})] = amps[i];
        }
    }
    return v;
}

inline Vec apply(const Mat& m, const Vec& v) {
    Vec out(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline cplx dot(const Vec& x, const Vec& y) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

inline cplx expectation(const Mat& m, const Vec& v) { return dot(v, apply(m, v)); }

inline double variance(const Mat& m, const Vec& v) {
    Vec mv = apply(m, v);
    return std::real(dot(mv, mv)) - std::norm(dot(v, mv));
}

} // namespace oracle
