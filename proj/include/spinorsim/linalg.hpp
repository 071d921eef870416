#ifndef SPINORSIM_LINALG_HPP
#define SPINORSIM_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace spinorsim {

using cplx = std::complex<double>;

/// Dense complex matrix, row major.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<cplx> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool empty() const { return rows == 0 || cols == 0; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    Matrix adjoint() const {
        Matrix m(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const cplx xik = x(i, k);
            if (xik == 0.0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
        }
    return z;
}

inline Matrix operator+(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix sum: shape mismatch");
    Matrix z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
    return z;
}

inline Matrix operator-(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix diff: shape mismatch");
    Matrix z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
    return z;
}

inline Matrix operator*(cplx s, const Matrix& x) {
    Matrix z = x;
    for (auto& v : z.a) v *= s;
    return z;
}

inline double max_abs(const Matrix& x) {
    double m = 0.0;
    for (const auto& v : x.a) m = std::max(m, std::abs(v));
    return m;
}

inline Matrix commutator(const Matrix& x, const Matrix& y) { return x * y - y * x; }

/// exp(M) for nilpotent M: the power series terminates on its own.
inline Matrix expm_nilpotent(const Matrix& m, std::size_t max_power = 0) {
    if (m.rows != m.cols) throw std::invalid_argument("expm: square matrix required");
    if (max_power == 0) max_power = 4 * m.rows + 8;
    Matrix sum = Matrix::identity(m.rows);
    Matrix term = Matrix::identity(m.rows);
    for (std::size_t k = 1; k <= max_power; ++k) {
        term = (cplx(1.0 / double(k)) * (term * m));
        if (max_abs(term) == 0.0) return sum;
        sum = sum + term;
    }
    throw numerical_error("expm_nilpotent: series did not terminate (operator not nilpotent?)");
}

/// Dense real matrix, row major.
struct RMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    RMatrix() = default;
    RMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static RMatrix identity(std::size_t n) {
        RMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

namespace detail {

inline double pythag(double a, double b) { return std::hypot(a, b); }

/// Implicit QL with Wilkinson shift for a symmetric tridiagonal matrix.
/// d: diagonal (n), e: subdiagonal (n, e[0] unused as e[i] couples i-1,i here
/// we use the convention e[i] couples i and i+1 with e[n-1] scratch).
/// z accumulates rotations (pass identity to get eigenvectors as columns).
inline void tqli(std::vector<double>& d, std::vector<double>& e, RMatrix& z) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n);
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw numerical_error("tqli: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = pythag(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

/// Householder reduction of a real symmetric matrix to tridiagonal form.
/// On exit `a` holds the accumulated orthogonal transform, d the diagonal
/// and e the subdiagonal (e[i] couples i-1 and i; e[0] = 0).
inline void tred2(RMatrix& a, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = a.rows;
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    if (n == 0) return;
    for (std::size_t i = n - 1; i >= 1; --i) {
        std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

} // namespace detail

/// Eigen-decomposition result of a real symmetric matrix: ascending
/// eigenvalues, orthonormal eigenvectors as columns of `vectors`, and a
/// deterministic sign convention (largest-magnitude component positive).
struct SymmetricEigen {
    std::vector<double> values;
    RMatrix vectors;
};

namespace detail {

inline void sort_and_fix(SymmetricEigen& s) {
    const std::size_t n = s.values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return s.values[x] < s.values[y]; });
    std::vector<double> vals(n);
    RMatrix vecs(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        vals[j] = s.values[order[j]];
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = std::abs(s.vectors(i, order[j]));
            if (v > best + 1e-15) {
                best = v;
                imax = i;
            }
        }
        double sign = (s.vectors(imax, order[j]) >= 0.0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) vecs(i, j) = sign * s.vectors(i, order[j]);
    }
    s.values = std::move(vals);
    s.vectors = std::move(vecs);
}

} // namespace detail

/// Symmetric tridiagonal eigensolver. `sub[i]` couples rows i and i+1
/// (length n-1 or n; trailing entry ignored).
inline SymmetricEigen eigen_tridiagonal(std::vector<double> diag, std::vector<double> sub) {
    const std::size_t n = diag.size();
    SymmetricEigen out;
    out.vectors = RMatrix::identity(n);
    sub.resize(n, 0.0);
    detail::tqli(diag, sub, out.vectors);
    out.values = std::move(diag);
    detail::sort_and_fix(out);
    return out;
}

/// Dense real symmetric eigensolver (Householder reduction + implicit QL).
inline SymmetricEigen eigen_symmetric(RMatrix a) {
    const std::size_t n = a.rows;
    if (a.cols != n) throw std::invalid_argument("eigen_symmetric: square matrix required");
    std::vector<double> d, e;
    detail::tred2(a, d, e);
    // shift subdiagonal to the e[i] couples (i, i+1) convention
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = e[i + 1];
    if (n > 0) e[n - 1] = 0.0;
    detail::tqli(d, e, a);
    SymmetricEigen out;
    out.values = std::move(d);
    out.vectors = std::move(a);
    detail::sort_and_fix(out);
    return out;
}

} // namespace spinorsim

#endif
