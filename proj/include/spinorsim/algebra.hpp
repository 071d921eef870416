#ifndef SPINORSIM_ALGEBRA_HPP
#define SPINORSIM_ALGEBRA_HPP

#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fock.hpp"
#include "linalg.hpp"
#include "state.hpp"

namespace spinorsim {

/// Symbolic tags for the SU(3) generators and derived operators.
enum class OperatorKind {
    T_plus,
    T_minus,
    T3,
    Tx,
    Ty,
    U_plus,
    U_minus,
    U3,
    V_plus,
    V_minus,
    V3,
    Y,
    Ntot,
    L_plus,
    L_minus,
    Lz,
    L2,
    G_Y,
    A_singlet,
    AdagA,
    K_plus,
    K_minus,
};

inline const char* name(OperatorKind k) {
    switch (k) {
        case OperatorKind::T_plus: return "T+";
        case OperatorKind::T_minus: return "T-";
        case OperatorKind::T3: return "T3";
        case OperatorKind::Tx: return "Tx";
        case OperatorKind::Ty: return "Ty";
        case OperatorKind::U_plus: return "U+";
        case OperatorKind::U_minus: return "U-";
        case OperatorKind::U3: return "U3";
        case OperatorKind::V_plus: return "V+";
        case OperatorKind::V_minus: return "V-";
        case OperatorKind::V3: return "V3";
        case OperatorKind::Y: return "Y";
        case OperatorKind::Ntot: return "N";
        case OperatorKind::L_plus: return "L+";
        case OperatorKind::L_minus: return "L-";
        case OperatorKind::Lz: return "Lz";
        case OperatorKind::L2: return "L2";
        case OperatorKind::G_Y: return "G_Y";
        case OperatorKind::A_singlet: return "A";
        case OperatorKind::AdagA: return "A†A";
        case OperatorKind::K_plus: return "K+";
        case OperatorKind::K_minus: return "K-";
    }
    return "?";
}

/// Hamiltonian couplings. Time is measured in hbar/|lambda_a|.
struct MagneticParams {
    double alpha_B = 0.0;
    double beta_B = 0.0;
    double gamma_B = 0.0;
};

struct ModelParams {
    double lambda_a = -1.0; // ferromagnetic default
    double lambda_s = 0.0;
    double mu = 0.0;
    std::optional<MagneticParams> magnetic;

    bool has_magnetic() const {
        return magnetic && (magnetic->alpha_B != 0.0 || magnetic->beta_B != 0.0 ||
                            magnetic->gamma_B != 0.0);
    }
};

namespace detail {

inline int occ_component(const ModeOccupation& occ, int mode) {
    return mode == 0 ? occ.n_minus : (mode == 1 ? occ.n_zero : occ.n_plus);
}

inline void occ_add(ModeOccupation& occ, int mode, int delta) {
    (mode == 0 ? occ.n_minus : (mode == 1 ? occ.n_zero : occ.n_plus)) += delta;
}

/// a_create† a_annihilate with exact bosonic ladder factors.
inline StateVector apply_bilinear(int create, int annihilate, const StateVector& psi) {
    StateVector out(psi.total_n);
    for (const auto& [m, amps] : psi.blocks) {
        FockBlock src(psi.total_n, m);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (amps[i] == 0.0) continue;
            ModeOccupation occ = src.state_at(static_cast<int>(i));
            const int na = occ_component(occ, annihilate);
            if (na == 0) continue;
            double factor;
            if (create == annihilate) {
                factor = static_cast<double>(na);
            } else {
                const int nc = occ_component(occ, create);
                factor = std::sqrt(double(na) * double(nc + 1));
                occ_add(occ, annihilate, -1);
                occ_add(occ, create, +1);
            }
            FockBlock dst(psi.total_n, occ.magnetization());
            out.block(occ.magnetization())[dst.index_of(occ)] += factor * amps[i];
        }
    }
    out.prune();
    return out;
}

template <class F>
StateVector apply_diagonal(const StateVector& psi, F f) {
    StateVector out(psi.total_n);
    for (const auto& [m, amps] : psi.blocks) {
        FockBlock src(psi.total_n, m);
        auto& dst = out.block(m);
        for (std::size_t i = 0; i < amps.size(); ++i)
            dst[i] = f(src.state_at(static_cast<int>(i))) * amps[i];
    }
    return out;
}

} // namespace detail

/// a_mode acting on psi (atom number drops by one).
inline StateVector apply_annihilate(int mode, const StateVector& psi) {
    StateVector out(psi.total_n - 1);
    if (psi.total_n == 0) return out;
    for (const auto& [m, amps] : psi.blocks) {
        FockBlock src(psi.total_n, m);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (amps[i] == 0.0) continue;
            ModeOccupation occ = src.state_at(static_cast<int>(i));
            const int n = detail::occ_component(occ, mode);
            if (n == 0) continue;
            detail::occ_add(occ, mode, -1);
            FockBlock dst(out.total_n, occ.magnetization());
            out.block(occ.magnetization())[dst.index_of(occ)] += std::sqrt(double(n)) * amps[i];
        }
    }
    out.prune();
    return out;
}

/// a_mode† acting on psi (atom number grows by one).
inline StateVector apply_create(int mode, const StateVector& psi) {
    StateVector out(psi.total_n + 1);
    for (const auto& [m, amps] : psi.blocks) {
        FockBlock src(psi.total_n, m);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            if (amps[i] == 0.0) continue;
            ModeOccupation occ = src.state_at(static_cast<int>(i));
            const int n = detail::occ_component(occ, mode);
            detail::occ_add(occ, mode, +1);
            FockBlock dst(out.total_n, occ.magnetization());
            out.block(occ.magnetization())[dst.index_of(occ)] += std::sqrt(double(n + 1)) * amps[i];
        }
    }
    out.prune();
    return out;
}

/// Apply an operator tag to a state via the exact ladder rules.
inline StateVector apply(OperatorKind kind, const StateVector& psi) {
    using detail::apply_bilinear;
    using detail::apply_diagonal;
    constexpr double sqrt2 = 1.4142135623730950488;
    switch (kind) {
        case OperatorKind::T_plus: return apply_bilinear(2, 0, psi);
        case OperatorKind::T_minus: return apply_bilinear(0, 2, psi);
        case OperatorKind::U_plus: return apply_bilinear(0, 1, psi);
        case OperatorKind::U_minus: return apply_bilinear(1, 0, psi);
        case OperatorKind::V_plus: return apply_bilinear(2, 1, psi);
        case OperatorKind::V_minus: return apply_bilinear(1, 2, psi);
        case OperatorKind::T3:
            return apply_diagonal(psi, [](const ModeOccupation& o) {
                return 0.5 * (o.n_plus - o.n_minus);
            });
        case OperatorKind::U3:
            return apply_diagonal(psi, [](const ModeOccupation& o) {
                return 0.5 * (o.n_minus - o.n_zero);
            });
        case OperatorKind::V3:
            return apply_diagonal(psi, [](const ModeOccupation& o) {
                return 0.5 * (o.n_plus - o.n_zero);
            });
        case OperatorKind::Y:
            return apply_diagonal(psi, [](const ModeOccupation& o) {
                return (o.n_plus + o.n_minus - 2.0 * o.n_zero) / 3.0;
            });
        case OperatorKind::Ntot:
            return apply_diagonal(psi, [](const ModeOccupation& o) { return double(o.total()); });
        case OperatorKind::Lz:
            return apply_diagonal(psi, [](const ModeOccupation& o) {
                return double(o.n_plus - o.n_minus);
            });
        case OperatorKind::Tx:
            return cplx(0.5) * apply(OperatorKind::T_plus, psi) +
                   cplx(0.5) * apply(OperatorKind::T_minus, psi);
        case OperatorKind::Ty:
            return cplx(0.0, -0.5) * apply(OperatorKind::T_plus, psi) +
                   cplx(0.0, 0.5) * apply(OperatorKind::T_minus, psi);
        case OperatorKind::L_plus:
            return cplx(sqrt2) * (apply(OperatorKind::V_plus, psi) +
                                  apply(OperatorKind::U_minus, psi));
        case OperatorKind::L_minus:
            return cplx(sqrt2) * (apply(OperatorKind::V_minus, psi) +
                                  apply(OperatorKind::U_plus, psi));
        case OperatorKind::L2: {
            // L² = L₋L₊ + Lz² + Lz
            StateVector out = apply(OperatorKind::L_minus, apply(OperatorKind::L_plus, psi));
            out += apply_diagonal(psi, [](const ModeOccupation& o) {
                double lz = o.n_plus - o.n_minus;
                return lz * lz + lz;
            });
            return out;
        }
        case OperatorKind::K_plus:
            return apply(OperatorKind::V_plus, apply(OperatorKind::U_plus, psi));
        case OperatorKind::K_minus:
            return apply(OperatorKind::U_minus, apply(OperatorKind::V_minus, psi));
        case OperatorKind::G_Y:
            return cplx(2.0) * (apply(OperatorKind::K_plus, psi) +
                                apply(OperatorKind::K_minus, psi));
        case OperatorKind::A_singlet: {
            constexpr double inv_sqrt3 = 0.57735026918962576451;
            StateVector a0a0 = apply_annihilate(1, apply_annihilate(1, psi));
            StateVector apam = apply_annihilate(2, apply_annihilate(0, psi));
            return cplx(inv_sqrt3) * a0a0 + cplx(-2.0 * inv_sqrt3) * apam;
        }
        case OperatorKind::AdagA: {
            constexpr double inv_sqrt3 = 0.57735026918962576451;
            StateVector a = apply(OperatorKind::A_singlet, psi);
            StateVector c0 = apply_create(1, apply_create(1, a));
            StateVector cpm = apply_create(2, apply_create(0, a));
            return cplx(inv_sqrt3) * c0 + cplx(-2.0 * inv_sqrt3) * cpm;
        }
    }
    throw std::invalid_argument("apply: unknown operator tag");
}

/// Block displacement of a tag: (delta N, delta m). Tags mixing several
/// target blocks (Tx, Ty) have no single displacement.
inline std::optional<std::pair<int, int>> block_displacement(OperatorKind k) {
    switch (k) {
        case OperatorKind::T_plus: return {{0, 2}};
        case OperatorKind::T_minus: return {{0, -2}};
        case OperatorKind::U_plus: return {{0, -1}};
        case OperatorKind::U_minus: return {{0, 1}};
        case OperatorKind::V_plus: return {{0, 1}};
        case OperatorKind::V_minus: return {{0, -1}};
        case OperatorKind::L_plus: return {{0, 1}};
        case OperatorKind::L_minus: return {{0, -1}};
        case OperatorKind::A_singlet: return {{-2, 0}};
        case OperatorKind::Tx:
        case OperatorKind::Ty: return std::nullopt;
        default: return {{0, 0}};
    }
}

/// A realized operator mapping amplitudes of one block into another.
struct OperatorMatrix {
    BlockKey source;
    BlockKey target;
    bool full_scope = false; // entries span the whole fixed-N basis
    Matrix entries;
};

inline OperatorMatrix operator_matrix(OperatorKind kind, BlockKey source) {
    auto disp = block_displacement(kind);
    if (!disp)
        throw std::invalid_argument(std::string("operator_matrix: tag ") + name(kind) +
                                    " has no single block displacement");
    FockBlock src(source);
    if (src.dimension() == 0) throw std::invalid_argument("operator_matrix: empty source block");
    BlockKey target{source.total_n + disp->first, source.magnetization + disp->second};
    FockBlock dst(target);
    OperatorMatrix out{source, target, false, Matrix(dst.dimension(), src.dimension())};
    if (dst.dimension() == 0) return out;
    for (int j = 0; j < src.dimension(); ++j) {
        StateVector unit(source.total_n);
        unit.block(source.magnetization)[j] = 1.0;
        StateVector col = apply(kind, unit);
        for (const auto& [m, amps] : col.blocks) {
            if (m != target.magnetization)
                throw numerical_error("operator_matrix: displacement table violated");
            for (std::size_t i = 0; i < amps.size(); ++i) out.entries(i, j) = amps[i];
        }
    }
    return out;
}

/// Dense matrix of an N-conserving tag over the full fixed-N basis.
inline Matrix full_matrix(OperatorKind kind, int total_n) {
    auto disp = block_displacement(kind);
    if (disp && disp->first != 0)
        throw std::invalid_argument("full_matrix: tag changes the atom number");
    FullBasis basis(total_n);
    Matrix out(basis.dimension(), basis.dimension());
    for (int j = 0; j < basis.dimension(); ++j) {
        ModeOccupation occ = basis.occupation_at(j);
        StateVector unit(total_n);
        FockBlock b(total_n, occ.magnetization());
        unit.block(occ.magnetization())[b.index_of(occ)] = 1.0;
        StateVector col = apply(kind, unit);
        for (const auto& [m, amps] : col.blocks) {
            FockBlock tb(total_n, m);
            for (std::size_t i = 0; i < amps.size(); ++i)
                if (amps[i] != 0.0)
                    out(basis.block_offset(m) + static_cast<int>(i), j) = amps[i];
        }
    }
    return out;
}

/// Full-basis dimension cap for dense work; SPINORSIM_DENSE_CAP overrides.
inline int dense_dimension_cap() {
    if (const char* env = std::getenv("SPINORSIM_DENSE_CAP")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1891; // N = 60
}

namespace detail {

/// The ladder rules produce transpose pairs as products of the same square
/// roots in different orders; average them so Hermiticity is bit-exact.
inline void symmetrize(Matrix& h) {
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = i + 1; j < h.cols; ++j)
            h(i, j) = h(j, i) = 0.5 * (std::real(h(i, j)) + std::real(h(j, i)));
}

} // namespace detail

/// H = mu N - lambda_s N(N+1) + lambda_a (L² - 2N) restricted to one block.
/// Real symmetric tridiagonal in the ascending-n_zero basis.
inline OperatorMatrix hamiltonian_block(const ModelParams& params, BlockKey key) {
    if (params.has_magnetic())
        throw std::invalid_argument("hamiltonian_block: magnetic terms need the full basis");
    OperatorMatrix h = operator_matrix(OperatorKind::L2, key);
    detail::symmetrize(h.entries);
    const double n = key.total_n;
    const double shift = params.mu * n - params.lambda_s * n * (n + 1.0) -
                         2.0 * n * params.lambda_a;
    for (std::size_t i = 0; i < h.entries.rows; ++i) {
        for (std::size_t j = 0; j < h.entries.cols; ++j) h.entries(i, j) *= params.lambda_a;
        h.entries(i, i) += shift;
    }
    return h;
}

/// Full-basis Hamiltonian: the rotationally invariant part plus, when
/// magnetic parameters are present, H_B = alpha(T₊+T₋) + beta T₃² - gamma T₃.
inline OperatorMatrix hamiltonian_full(const ModelParams& params, int total_n) {
    FullBasis basis(total_n);
    const int cap = dense_dimension_cap();
    if (basis.dimension() > cap)
        throw resource_error("hamiltonian_full: basis dimension " +
                             std::to_string(basis.dimension()) + " exceeds dense cap " +
                             std::to_string(cap));
    Matrix h = full_matrix(OperatorKind::L2, total_n);
    detail::symmetrize(h);
    const double n = total_n;
    const double shift = params.mu * n - params.lambda_s * n * (n + 1.0) -
                         2.0 * n * params.lambda_a;
    for (std::size_t i = 0; i < h.rows; ++i) {
        for (std::size_t j = 0; j < h.cols; ++j) h(i, j) *= params.lambda_a;
        h(i, i) += shift;
    }
    if (params.magnetic) {
        const MagneticParams& b = *params.magnetic;
        if (b.alpha_B != 0.0) {
            Matrix tpm = full_matrix(OperatorKind::T_plus, total_n) +
                         full_matrix(OperatorKind::T_minus, total_n);
            h = h + cplx(b.alpha_B) * tpm;
        }
        for (int j = 0; j < basis.dimension(); ++j) {
            double t3 = charges(basis.occupation_at(j)).isospin_projection;
            h(j, j) += b.beta_B * t3 * t3 - b.gamma_B * t3;
        }
    }
    OperatorMatrix out;
    out.source = out.target = BlockKey{total_n, 0};
    out.full_scope = true;
    out.entries = std::move(h);
    return out;
}

// ---- moments ----

inline cplx expectation(const StateVector& psi, OperatorKind kind) {
    return inner(psi, apply(kind, psi));
}

/// Variance <A²> - <A>² for a Hermitian tag.
inline double variance(const StateVector& psi, OperatorKind kind) {
    StateVector ap = apply(kind, psi);
    const cplx mean = inner(psi, ap);
    return std::real(inner(ap, ap)) - std::norm(mean);
}

/// Cov(A,B) = <AB> - <A><B> without symmetrization; A, B need not be Hermitian.
inline cplx covariance(const StateVector& psi, OperatorKind a, OperatorKind b) {
    StateVector bp = apply(b, psi);
    if (bp.total_n != psi.total_n)
        throw std::invalid_argument("covariance: operator leaves the state's scope");
    return inner(psi, apply(a, bp)) - expectation(psi, a) * expectation(psi, b);
}

inline cplx expectation(const StateVector& psi, const OperatorMatrix& op) {
    if (op.source != op.target)
        throw std::invalid_argument("expectation: operator matrix is not block diagonal");
    if (psi.total_n != op.source.total_n)
        throw std::invalid_argument("expectation: state scope does not match operator");
    std::vector<cplx> flat;
    if (op.full_scope) {
        FullBasis basis(psi.total_n);
        flat.assign(basis.dimension(), 0.0);
        for (const auto& [m, amps] : psi.blocks)
            for (std::size_t i = 0; i < amps.size(); ++i)
                flat[basis.block_offset(m) + i] = amps[i];
    } else {
        auto it = psi.blocks.find(op.source.magnetization);
        if (it == psi.blocks.end() || psi.blocks.size() != 1)
            throw std::invalid_argument("expectation: state scope does not match operator block");
        flat = it->second;
    }
    cplx s = 0.0;
    for (std::size_t i = 0; i < op.entries.rows; ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < op.entries.cols; ++j) row += op.entries(i, j) * flat[j];
        s += std::conj(flat[i]) * row;
    }
    return s;
}

// ---- identity validation ----

struct IdentityReport {
    int total_n = 0;
    double eq_l2_decomposition = 0.0;  // L² vs 4T₃² + ½(N-ε₊)(N-ε₋) - 2(Y-Y₀)² + G_Y
    double l2_scale = 0.0;             // max |L²| entry, for relative tolerances
    double singlet_coeff3 = 0.0;       // L² = N(N+1) - 3 A†A
    double singlet_coeff1 = 0.0;       // the printed coefficient, expected to fail
    std::vector<std::pair<std::string, double>> commutators; // name -> max-abs residual
    double bch_eta_sq = 0.0;           // e^{ηL₊} vs product with c = η²
    double bch_printed = 0.0;          // same with c = η/√2
    std::string bch_match;             // which coefficient reproduces e^{ηL₊}

    double max_commutator() const {
        double m = 0.0;
        for (const auto& [n, v] : commutators) m = std::max(m, v);
        return m;
    }
};

inline IdentityReport verify_identities(int total_n) {
    if (total_n > 20)
        throw resource_error("verify_identities: dense full-basis work limited to N <= 20");
    IdentityReport rep;
    rep.total_n = total_n;
    const double n = total_n;
    FullBasis basis(total_n);
    const std::size_t dim = basis.dimension();

    Matrix l2 = full_matrix(OperatorKind::L2, total_n);
    rep.l2_scale = max_abs(l2);

    // hypercharge decomposition of L²
    {
        constexpr double sqrt2 = 1.4142135623730950488;
        const double eps_p = -1.5 + sqrt2, eps_m = -1.5 - sqrt2;
        const double y0 = -n / 6.0 - 0.25;
        Matrix rhs = full_matrix(OperatorKind::G_Y, total_n);
        for (std::size_t j = 0; j < dim; ++j) {
            Charges c = charges(basis.occupation_at(static_cast<int>(j)));
            rhs(j, j) += 4.0 * c.isospin_projection * c.isospin_projection +
                         0.5 * (n - eps_p) * (n - eps_m) -
                         2.0 * (c.hypercharge - y0) * (c.hypercharge - y0);
        }
        rep.eq_l2_decomposition = max_abs(l2 - rhs);
    }

    // singlet-pair identity, both normalizations
    {
        Matrix ada = full_matrix(OperatorKind::AdagA, total_n);
        Matrix r3(dim, dim), r1(dim, dim);
        for (std::size_t j = 0; j < dim; ++j) {
            r3(j, j) = n * (n + 1.0);
            r1(j, j) = n * (n + 1.0);
        }
        rep.singlet_coeff3 = max_abs(l2 - (r3 - cplx(3.0) * ada));
        rep.singlet_coeff1 = max_abs(l2 - (r1 - ada));
    }

    // commutator table
    {
        using K = OperatorKind;
        auto M = [&](K k) { return full_matrix(k, total_n); };
        auto record = [&](const std::string& label, const Matrix& resid) {
            rep.commutators.emplace_back(label, max_abs(resid));
        };
        struct Su2 {
            const char* tag;
            K plus, minus, three;
        };
        for (const Su2& s : {Su2{"T", K::T_plus, K::T_minus, K::T3},
                             Su2{"U", K::U_plus, K::U_minus, K::U3},
                             Su2{"V", K::V_plus, K::V_minus, K::V3}}) {
            Matrix xp = M(s.plus), xm = M(s.minus), x3 = M(s.three);
            record(std::string("[") + s.tag + "+," + s.tag + "-]-2" + s.tag + "3",
                   commutator(xp, xm) - cplx(2.0) * x3);
            record(std::string("[") + s.tag + "3," + s.tag + "+]-" + s.tag + "+",
                   commutator(x3, xp) - xp);
            record(std::string("[") + s.tag + "3," + s.tag + "-]+" + s.tag + "-",
                   commutator(x3, xm) + xm);
        }
        record("[V+,U-]-T+", commutator(M(K::V_plus), M(K::U_minus)) - M(K::T_plus));
        record("[T3,G_Y]", commutator(M(K::T3), M(K::G_Y)));
        Matrix h = hamiltonian_full(ModelParams{}, total_n).entries;
        record("[H,Lz]", commutator(h, M(K::Lz)));
        record("[H,N]", commutator(h, M(K::Ntot)));
    }

    // disentangling: e^{ηL₊} vs e^{√2ηV₊} e^{√2ηU₋} e^{-cT₊}
    {
        constexpr double sqrt2 = 1.4142135623730950488;
        Matrix lp = full_matrix(OperatorKind::L_plus, total_n);
        Matrix vp = full_matrix(OperatorKind::V_plus, total_n);
        Matrix um = full_matrix(OperatorKind::U_minus, total_n);
        Matrix tp = full_matrix(OperatorKind::T_plus, total_n);
        for (cplx eta : {cplx(0.5), cplx(0.3), cplx(0.2, 0.3)}) {
            Matrix lhs = expm_nilpotent(eta * lp);
            Matrix base = expm_nilpotent(cplx(sqrt2) * eta * vp) *
                          expm_nilpotent(cplx(sqrt2) * eta * um);
            double scale = max_abs(lhs);
            double r_sq = max_abs(lhs - base * expm_nilpotent(cplx(-1.0) * eta * eta * tp)) / scale;
            double r_pr = max_abs(lhs - base * expm_nilpotent(cplx(-1.0 / sqrt2) * eta * tp)) / scale;
            rep.bch_eta_sq = std::max(rep.bch_eta_sq, r_sq);
            rep.bch_printed = std::max(rep.bch_printed, r_pr);
        }
        const bool sq_ok = rep.bch_eta_sq <= 1e-10;
        const bool pr_ok = rep.bch_printed <= 1e-10;
        rep.bch_match = (sq_ok && !pr_ok)   ? "eta^2"
                        : (pr_ok && !sq_ok) ? "eta/sqrt2"
                        : (sq_ok && pr_ok)  ? "ambiguous"
                                            : "none";
    }
    return rep;
}

} // namespace spinorsim

#endif
