#ifndef SPINORSIM_SQUEEZE_HPP
#define SPINORSIM_SQUEEZE_HPP

#include <array>
#include <cmath>
#include <limits>

#include "algebra.hpp"
#include "state.hpp"

namespace spinorsim {

/// Quadrature variances of the U and V spins at one angle, plus the U-V
/// correlation c_uv. Satisfies
///   var_qplus + var_qminus_perp
///     = (var_xu + var_xv + var_xu_perp + var_xv_perp)/4 + c_uv
/// as an exact operator identity.
struct QuadratureStats {
    double alpha = 0.0;
    double var_xu = 0.0, var_xv = 0.0;
    double var_xu_perp = 0.0, var_xv_perp = 0.0;
    double var_qplus = 0.0;
    double var_qminus_perp = 0.0;
    double c_uv = 0.0;
};

namespace detail {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

/// First and second moments of the U/V raising-lowering pairs and of the
/// isospin generators, cached so angle scans reduce to scalar trigonometry.
class SqueezeMoments {
public:
    explicit SqueezeMoments(const StateVector& psi) : n_(psi.total_n) {
        using K = OperatorKind;
        const std::array<K, 4> uv{K::U_plus, K::U_minus, K::V_plus, K::V_minus};
        std::array<StateVector, 4> w;
        for (int i = 0; i < 4; ++i) {
            w[i] = apply(uv[i], psi);
            m_[i] = inner(psi, w[i]);
        }
        static constexpr int dag4[4] = {1, 0, 3, 2};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s_[i][j] = inner(w[dag4[i]], w[j]);

        const std::array<K, 3> ts{K::T_plus, K::T_minus, K::T3};
        std::array<StateVector, 3> wt;
        for (int i = 0; i < 3; ++i) {
            wt[i] = apply(ts[i], psi);
            mt_[i] = inner(psi, wt[i]);
        }
        static constexpr int dag3[3] = {1, 0, 2};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) st_[i][j] = inner(wt[dag3[i]], wt[j]);

        mean_y_ = std::real(expectation(psi, K::Y));
    }

    double atom_count() const { return n_; }
    double mean_y() const { return mean_y_; }
    double mean_tx() const { return std::real(mt_[0]); }
    double mean_ty() const { return std::imag(mt_[0]); }
    double mean_t3() const { return std::real(mt_[2]); }

    cplx cov_vp_up() const { return s_[2][0] - m_[2] * m_[0]; }

    /// X_u^alpha coefficients over (U+, U-, V+, V-).
    static std::array<cplx, 4> xu_coeff(double alpha) {
        const cplx e(std::cos(alpha), std::sin(alpha));
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        return {std::conj(e) * inv_sqrt2, e * inv_sqrt2, 0.0, 0.0};
    }

    static std::array<cplx, 4> xv_coeff(double alpha) {
        const cplx e(std::cos(alpha), std::sin(alpha));
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        return {0.0, 0.0, std::conj(e) * inv_sqrt2, e * inv_sqrt2};
    }

    /// Q_±^alpha = (X_v^alpha ± X_u^alpha)/2.
    static std::array<cplx, 4> q_coeff(int sign, double alpha) {
        auto cu = xu_coeff(alpha);
        auto cv = xv_coeff(alpha);
        std::array<cplx, 4> c;
        for (int i = 0; i < 4; ++i) c[i] = 0.5 * (cv[i] + double(sign) * cu[i]);
        return c;
    }

    double uv_mean(const std::array<cplx, 4>& c) const {
        cplx s = 0.0;
        for (int i = 0; i < 4; ++i) s += c[i] * m_[i];
        return std::real(s); // Hermitian combinations only
    }

    double uv_variance(const std::array<cplx, 4>& c) const {
        cplx sec = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) sec += c[i] * c[j] * s_[i][j];
        const double mean = uv_mean(c);
        return std::real(sec) - mean * mean;
    }

    /// Variance of cos(phi) Ty + sin(phi) T3.
    double ty_rotated_variance(double phi) const {
        const std::array<cplx, 3> c{cplx(0.0, -0.5) * std::cos(phi),
                                    cplx(0.0, 0.5) * std::cos(phi), cplx(std::sin(phi))};
        cplx sec = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) sec += c[i] * c[j] * st_[i][j];
        const double mean = std::cos(phi) * mean_ty() + std::sin(phi) * mean_t3();
        return std::real(sec) - mean * mean;
    }

private:
    double n_;
    double mean_y_ = 0.0;
    std::array<cplx, 4> m_{};
    cplx s_[4][4]{};
    std::array<cplx, 3> mt_{};
    cplx st_[3][3]{};
};

/// Grid scan over one period plus golden-section refinement around the best
/// grid point. f must be periodic with the given period.
template <class F>
std::pair<double, double> minimize_periodic(F f, double period, int points, double tol = 1e-6) {
    if (points < 3) points = 3;
    int best = 0;
    double best_val = f(0.0);
    for (int i = 1; i < points; ++i) {
        const double v = f(period * i / points);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = period * (best - 1) / points;
    double b = period * (best + 1) / points;
    constexpr double inv_phi = 0.61803398874989484820;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    double x = 0.5 * (a + b);
    double v = f(x);
    if (best_val < v) {
        x = period * best / points;
        v = best_val;
    }
    // report the representative angle inside [0, period)
    x = std::fmod(x + period, period);
    return {v, x};
}

} // namespace detail

/// A squeezing value together with the angle it was evaluated (or found) at.
struct SqueezeValue {
    double value = detail::quiet_nan;
    double angle = 0.0;
    bool defined = false;
};

/// (xi_+^alpha)², (xi_-^{alpha+pi/2})² and their sum (two-mode criterion < 2).
struct TwoModeValue {
    double xi_plus_sq = detail::quiet_nan;
    double xi_minus_sq = detail::quiet_nan;
    double sum = detail::quiet_nan;
    double alpha = 0.0;
    bool defined = false;
};

namespace detail {

inline QuadratureStats quadrature_stats(const SqueezeMoments& mom, double alpha) {
    QuadratureStats q;
    q.alpha = alpha;
    const double perp = alpha + 1.5707963267948966192;
    q.var_xu = mom.uv_variance(SqueezeMoments::xu_coeff(alpha));
    q.var_xv = mom.uv_variance(SqueezeMoments::xv_coeff(alpha));
    q.var_xu_perp = mom.uv_variance(SqueezeMoments::xu_coeff(perp));
    q.var_xv_perp = mom.uv_variance(SqueezeMoments::xv_coeff(perp));
    q.var_qplus = mom.uv_variance(SqueezeMoments::q_coeff(+1, alpha));
    q.var_qminus_perp = mom.uv_variance(SqueezeMoments::q_coeff(-1, perp));
    const cplx e2(std::cos(2.0 * alpha), -std::sin(2.0 * alpha));
    q.c_uv = std::real(e2 * mom.cov_vp_up());
    return q;
}

inline SqueezeValue xi_uv(const SqueezeMoments& mom, double alpha) {
    SqueezeValue out;
    out.angle = alpha;
    if (std::abs(mom.mean_y()) < 1e-9 * std::max(1.0, mom.atom_count())) return out;
    const double perp = alpha + 1.5707963267948966192;
    const double num = mom.uv_variance(SqueezeMoments::q_coeff(+1, alpha)) +
                       mom.uv_variance(SqueezeMoments::q_coeff(-1, perp));
    out.value = num / std::abs(mom.mean_y());
    out.defined = true;
    return out;
}

inline TwoModeValue xi_pm(const SqueezeMoments& mom, double alpha) {
    TwoModeValue out;
    out.alpha = alpha;
    constexpr double half_pi = 1.5707963267948966192;
    const double n = mom.atom_count();
    const double j_plus3 = 0.5 * (1.5 * mom.mean_y() + mom.mean_tx());
    const double j_minus3 = 0.5 * (1.5 * mom.mean_y() - mom.mean_tx());
    const double qp_perp = mom.uv_mean(SqueezeMoments::q_coeff(+1, alpha + half_pi));
    const double qm_perp = mom.uv_mean(SqueezeMoments::q_coeff(-1, alpha + 2.0 * half_pi));
    const double den_p = qp_perp * qp_perp + j_plus3 * j_plus3;
    const double den_m = qm_perp * qm_perp + j_minus3 * j_minus3;
    const double floor = 1e-12 * std::max(1.0, n * n);
    if (den_p < floor || den_m < floor) return out;
    out.xi_plus_sq = n * mom.uv_variance(SqueezeMoments::q_coeff(+1, alpha)) / den_p;
    out.xi_minus_sq = n * mom.uv_variance(SqueezeMoments::q_coeff(-1, alpha + half_pi)) / den_m;
    out.sum = out.xi_plus_sq + out.xi_minus_sq;
    out.defined = true;
    return out;
}

inline SqueezeValue xi_phi(const SqueezeMoments& mom, double phi) {
    SqueezeValue out;
    out.angle = phi;
    const double n = mom.atom_count();
    const double tx = mom.mean_tx();
    const double tz = -std::sin(phi) * mom.mean_ty() + std::cos(phi) * mom.mean_t3();
    const double den = tx * tx + tz * tz;
    if (den < 1e-12 * std::max(1.0, n * n)) return out;
    out.value = std::sqrt(n * mom.ty_rotated_variance(phi) / den);
    out.defined = true;
    return out;
}

constexpr double pi = 3.14159265358979323846;

} // namespace detail

inline QuadratureStats quadrature_stats(const StateVector& psi, double alpha) {
    return detail::quadrature_stats(detail::SqueezeMoments(psi), alpha);
}

/// U-V squeezing parameter at a fixed quadrature angle; squeezing iff < 3/4.
inline SqueezeValue xi_uv(const StateVector& psi, double alpha) {
    return detail::xi_uv(detail::SqueezeMoments(psi), alpha);
}

/// Minimum of xi_uv over alpha in [0, pi) (grid + golden-section refinement).
inline SqueezeValue xi_uv_min(const StateVector& psi, int grid_points = 180) {
    detail::SqueezeMoments mom(psi);
    SqueezeValue probe = detail::xi_uv(mom, 0.0);
    if (!probe.defined) return probe;
    auto [v, a] = detail::minimize_periodic(
        [&](double alpha) { return detail::xi_uv(mom, alpha).value; }, detail::pi, grid_points);
    return {v, a, true};
}

/// Two-mode entanglement criterion components at a fixed angle.
inline TwoModeValue xi_pm(const StateVector& psi, double alpha) {
    return detail::xi_pm(detail::SqueezeMoments(psi), alpha);
}

/// Minimize the two-mode sum over alpha in [0, pi).
inline TwoModeValue xi_pm_min(const StateVector& psi, int grid_points = 180) {
    detail::SqueezeMoments mom(psi);
    if (!detail::xi_pm(mom, 0.0).defined) return detail::xi_pm(mom, 0.0);
    auto [v, a] = detail::minimize_periodic(
        [&](double alpha) { return detail::xi_pm(mom, alpha).sum; }, detail::pi, grid_points);
    return detail::xi_pm(mom, a);
}

/// Isospin squeezing parameter at rotation angle phi; squeezing iff < 1.
inline SqueezeValue xi_phi(const StateVector& psi, double phi) {
    return detail::xi_phi(detail::SqueezeMoments(psi), phi);
}

inline SqueezeValue xi_phi_min(const StateVector& psi, int grid_points = 180) {
    detail::SqueezeMoments mom(psi);
    if (!detail::xi_phi(mom, 0.0).defined) return detail::xi_phi(mom, 0.0);
    auto [v, p] = detail::minimize_periodic(
        [&](double phi) { return detail::xi_phi(mom, phi).value; }, detail::pi, grid_points);
    return {v, p, true};
}

/// All squeezing diagnostics of one state, as written to the evolve CSV.
struct SqueezeReport {
    double t = 0.0;
    double xi_uv_fixed = detail::quiet_nan;
    double xi_uv_min = detail::quiet_nan;
    double alpha_min = detail::quiet_nan;
    bool uv_defined = false;
    double xi_plus_sq = detail::quiet_nan;
    double xi_minus_sq = detail::quiet_nan;
    double two_mode_sum = detail::quiet_nan;
    bool pm_defined = false;
    double xi_phi_fixed = detail::quiet_nan;
    double xi_phi_min = detail::quiet_nan;
    double phi_min = detail::quiet_nan;
    bool phi_defined = false;
};

inline SqueezeReport squeeze_report(const StateVector& psi, double t, double fixed_alpha,
                                    double fixed_phi, int alpha_points = 180,
                                    int phi_points = 180) {
    detail::SqueezeMoments mom(psi);
    SqueezeReport rep;
    rep.t = t;

    SqueezeValue uv = detail::xi_uv(mom, fixed_alpha);
    rep.uv_defined = uv.defined;
    if (uv.defined) {
        rep.xi_uv_fixed = uv.value;
        auto [v, a] = detail::minimize_periodic(
            [&](double alpha) { return detail::xi_uv(mom, alpha).value; }, detail::pi,
            alpha_points);
        rep.xi_uv_min = v;
        rep.alpha_min = a;
    }

    TwoModeValue pm0 = detail::xi_pm(mom, fixed_alpha);
    if (pm0.defined) {
        auto [v, a] = detail::minimize_periodic(
            [&](double alpha) {
                TwoModeValue x = detail::xi_pm(mom, alpha);
                return x.defined ? x.sum : std::numeric_limits<double>::infinity();
            },
            detail::pi, alpha_points);
        TwoModeValue best = detail::xi_pm(mom, a);
        rep.pm_defined = best.defined;
        rep.xi_plus_sq = best.xi_plus_sq;
        rep.xi_minus_sq = best.xi_minus_sq;
        rep.two_mode_sum = best.sum;
    }

    SqueezeValue phi0 = detail::xi_phi(mom, fixed_phi);
    rep.phi_defined = phi0.defined;
    if (phi0.defined) {
        rep.xi_phi_fixed = phi0.value;
        auto [v, p] = detail::minimize_periodic(
            [&](double phi) {
                SqueezeValue x = detail::xi_phi(mom, phi);
                return x.defined ? x.value : std::numeric_limits<double>::infinity();
            },
            detail::pi, phi_points);
        rep.xi_phi_min = v;
        rep.phi_min = p;
    }
    return rep;
}

} // namespace spinorsim

#endif
