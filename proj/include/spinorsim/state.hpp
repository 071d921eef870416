#ifndef SPINORSIM_STATE_HPP
#define SPINORSIM_STATE_HPP

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "fock.hpp"
#include "linalg.hpp"

namespace spinorsim {

/// Complex amplitudes over one or more (N, m) blocks at fixed atom number.
/// Block vectors follow the ascending-n_zero order of FockBlock.
struct StateVector {
    int total_n = 0;
    std::map<int, std::vector<cplx>> blocks; // magnetization -> amplitudes

    StateVector() = default;
    explicit StateVector(int n) : total_n(n) {}

    std::vector<cplx>& block(int magnetization) {
        auto it = blocks.find(magnetization);
        if (it == blocks.end()) {
            FockBlock b(total_n, magnetization);
            it = blocks.emplace(magnetization, std::vector<cplx>(b.dimension())).first;
        }
        return it->second;
    }

    bool single_block() const { return blocks.size() == 1; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& [m, amps] : blocks)
            for (const auto& a : amps) s += std::norm(a);
        return s;
    }

    double norm() const { return std::sqrt(norm_sq()); }

    void normalize() {
        double n = norm();
        if (n == 0.0) throw numerical_error("StateVector::normalize: zero vector");
        for (auto& [m, amps] : blocks)
            for (auto& a : amps) a /= n;
    }

    StateVector& operator*=(cplx s) {
        for (auto& [m, amps] : blocks)
            for (auto& a : amps) a *= s;
        return *this;
    }

    StateVector& operator+=(const StateVector& other) {
        if (other.total_n != total_n)
            throw std::invalid_argument("StateVector::operator+=: atom number mismatch");
        for (const auto& [m, amps] : other.blocks) {
            auto& dst = block(m);
            for (std::size_t i = 0; i < amps.size(); ++i) dst[i] += amps[i];
        }
        return *this;
    }

    /// Drop blocks whose amplitudes are all exactly zero.
    void prune() {
        for (auto it = blocks.begin(); it != blocks.end();) {
            bool zero = true;
            for (const auto& a : it->second)
                if (a != 0.0) {
                    zero = false;
                    break;
                }
            it = zero ? blocks.erase(it) : std::next(it);
        }
    }
};

/// <x|y>; both states must live at the same atom number.
inline cplx inner(const StateVector& x, const StateVector& y) {
    if (x.total_n != y.total_n)
        throw std::invalid_argument("inner: states live at different atom numbers");
    cplx s = 0.0;
    auto ix = x.blocks.begin();
    auto iy = y.blocks.begin();
    while (ix != x.blocks.end() && iy != y.blocks.end()) {
        if (ix->first < iy->first) {
            ++ix;
        } else if (iy->first < ix->first) {
            ++iy;
        } else {
            const auto& ax = ix->second;
            const auto& ay = iy->second;
            for (std::size_t i = 0; i < ax.size(); ++i) s += std::conj(ax[i]) * ay[i];
            ++ix;
            ++iy;
        }
    }
    return s;
}

inline StateVector operator*(cplx s, StateVector v) {
    v *= s;
    return v;
}

inline StateVector operator+(StateVector x, const StateVector& y) {
    x += y;
    return x;
}

inline StateVector operator-(StateVector x, const StateVector& y) {
    x += (cplx(-1.0) * y);
    return x;
}

} // namespace spinorsim

#endif
