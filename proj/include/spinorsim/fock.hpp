#ifndef SPINORSIM_FOCK_HPP
#define SPINORSIM_FOCK_HPP

#include <cstdlib>
#include <string>
#include <vector>

#include "errors.hpp"

namespace spinorsim {

/// Occupation of the three Zeeman modes, canonical order (n_minus, n_zero, n_plus).
struct ModeOccupation {
    int n_minus = 0;
    int n_zero = 0;
    int n_plus = 0;

    int total() const { return n_minus + n_zero + n_plus; }
    int magnetization() const { return n_plus - n_minus; }
    bool valid() const { return n_minus >= 0 && n_zero >= 0 && n_plus >= 0; }

    friend bool operator==(const ModeOccupation&, const ModeOccupation&) = default;
};

/// Conserved charges (N, m) labelling one Hamiltonian block.
struct BlockKey {
    int total_n = 0;
    int magnetization = 0;

    friend bool operator==(const BlockKey&, const BlockKey&) = default;
    friend auto operator<=>(const BlockKey&, const BlockKey&) = default;
};

/// Hypercharge and isospin projection of a single Fock state.
struct Charges {
    double hypercharge;        // Y = (n+ + n- - 2 n0)/3
    double isospin_projection; // T3 = (n+ - n-)/2
};

inline Charges charges(const ModeOccupation& occ) {
    return {(occ.n_plus + occ.n_minus - 2.0 * occ.n_zero) / 3.0,
            (occ.n_plus - occ.n_minus) / 2.0};
}

/// All occupations with fixed (N, m), ordered by ascending n_zero.
/// Consecutive states differ by 2 in n_zero (the spin-mixing hopping step),
/// so block Hamiltonians are tridiagonal in this order.
class FockBlock {
public:
    FockBlock() = default;
    explicit FockBlock(BlockKey key) : key_(key) {}
    FockBlock(int total_n, int magnetization) : key_{total_n, magnetization} {}

    const BlockKey& key() const { return key_; }
    int total_n() const { return key_.total_n; }
    int magnetization() const { return key_.magnetization; }

    /// Parity of n_zero within the block: n_zero = N + m (mod 2).
    int parity() const {
        int p = (key_.total_n + key_.magnetization) % 2;
        return p < 0 ? p + 2 : p;
    }

    int dimension() const {
        if (key_.total_n < 0 || std::abs(key_.magnetization) > key_.total_n) return 0;
        return (key_.total_n - std::abs(key_.magnetization)) / 2 + 1;
    }

    ModeOccupation state_at(int i) const {
        const int n0 = parity() + 2 * i;
        const int N = key_.total_n, m = key_.magnetization;
        return {(N - n0 - m) / 2, n0, (N - n0 + m) / 2};
    }

    /// Position of an occupation within the block (round-trips with state_at).
    int index_of(const ModeOccupation& occ) const { return (occ.n_zero - parity()) / 2; }

    bool contains(const ModeOccupation& occ) const {
        return occ.valid() && occ.total() == key_.total_n &&
               occ.magnetization() == key_.magnetization;
    }

    std::vector<ModeOccupation> states() const {
        std::vector<ModeOccupation> s(dimension());
        for (int i = 0; i < dimension(); ++i) s[i] = state_at(i);
        return s;
    }

private:
    BlockKey key_;
};

inline FockBlock enumerate_block(int total_n, int magnetization) {
    if (total_n < 0) throw std::invalid_argument("enumerate_block: negative atom number");
    if (std::abs(magnetization) > total_n)
        throw std::invalid_argument("enumerate_block: empty block, |m| = " +
                                    std::to_string(std::abs(magnetization)) + " exceeds N = " +
                                    std::to_string(total_n));
    return FockBlock(total_n, magnetization);
}

/// Blocks for m = -N..N in ascending order; total dimension (N+1)(N+2)/2.
inline std::vector<FockBlock> enumerate_full(int total_n) {
    if (total_n < 0) throw std::invalid_argument("enumerate_full: negative atom number");
    std::vector<FockBlock> blocks;
    blocks.reserve(2 * total_n + 1);
    for (int m = -total_n; m <= total_n; ++m) blocks.emplace_back(total_n, m);
    return blocks;
}

/// The full fixed-N basis with a flat index (blocks concatenated by ascending m).
class FullBasis {
public:
    explicit FullBasis(int total_n) : total_n_(total_n), blocks_(enumerate_full(total_n)) {
        offsets_.reserve(blocks_.size() + 1);
        int off = 0;
        for (const auto& b : blocks_) {
            offsets_.push_back(off);
            off += b.dimension();
        }
        offsets_.push_back(off);
    }

    int total_n() const { return total_n_; }
    int dimension() const { return offsets_.back(); }
    const std::vector<FockBlock>& blocks() const { return blocks_; }

    int block_offset(int magnetization) const { return offsets_[magnetization + total_n_]; }

    int index_of(const ModeOccupation& occ) const {
        const FockBlock& b = blocks_[occ.magnetization() + total_n_];
        return block_offset(occ.magnetization()) + b.index_of(occ);
    }

    ModeOccupation occupation_at(int flat) const {
        // blocks are small; linear scan over m is fine
        std::size_t k = 0;
        while (flat >= offsets_[k + 1]) ++k;
        return blocks_[k].state_at(flat - offsets_[k]);
    }

private:
    int total_n_;
    std::vector<FockBlock> blocks_;
    std::vector<int> offsets_;
};

} // namespace spinorsim

#endif
