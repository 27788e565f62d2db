#pragma once

// Dense complex linear algebra used by the determinant formulas: LU with
// scaled partial pivoting, determinants, solves, and an infinity-norm
// condition estimate.  Sizes here are tiny (order + 1 at most), so the
// kernels stay straightforward.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cfinite/model.hpp"

namespace cfinite {

struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Complex> entries;  // row-major

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c)
        : rows(r), cols(c), entries(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}

    Complex& at(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
    const Complex& at(int r, int c) const {
        return entries[static_cast<std::size_t>(r) * cols + c];
    }

    bool square() const { return rows == cols; }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline double row_max_abs(const ComplexMatrix& m, int r) {
    double mx = 0.0;
    for (int c = 0; c < m.cols; ++c) mx = std::max(mx, std::abs(m.at(r, c)));
    return mx;
}

// max absolute row sum
inline double norm_inf(const ComplexMatrix& m) {
    double mx = 0.0;
    for (int r = 0; r < m.rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < m.cols; ++c) sum += std::abs(m.at(r, c));
        mx = std::max(mx, sum);
    }
    return mx;
}

namespace detail {

// P*A = L*U with row scaling in the pivot choice.  perm[i] is the original
// row now in position i; parity tracks the permutation sign.  A pivot whose
// magnitude is at most zero_tol times its row's original scale marks the
// matrix singular (elimination stops there).
struct LuFactorization {
    ComplexMatrix lu;
    std::vector<int> perm;
    int parity = 1;
    bool singular = false;
    int size = 0;
};

inline LuFactorization lu_factor(ComplexMatrix m, double zero_tol) {
    if (!m.square()) fail(ErrorCode::NotSquare, "LU factorization requires a square matrix");
    const int n = m.rows;
    LuFactorization f;
    f.size = n;
    f.perm.resize(static_cast<std::size_t>(n));
    std::vector<double> scale(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        f.perm[r] = r;
        scale[r] = row_max_abs(m, r);
        if (scale[r] == 0.0) scale[r] = 1.0;  // zero row; any pivot from it fails the test below
    }

    for (int k = 0; k < n; ++k) {
        int pivot_row = -1;
        double best = 0.0;
        for (int r = k; r < n; ++r) {
            const double candidate = std::abs(m.at(r, k)) / scale[r];
            if (candidate > best) {
                best = candidate;
                pivot_row = r;
            }
        }
        if (pivot_row < 0 || best <= zero_tol) {
            f.singular = true;
            break;
        }
        if (pivot_row != k) {
            for (int c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(pivot_row, c));
            std::swap(scale[k], scale[pivot_row]);
            std::swap(f.perm[k], f.perm[pivot_row]);
            f.parity = -f.parity;
        }
        const Complex pivot = m.at(k, k);
        for (int r = k + 1; r < n; ++r) {
            const Complex mult = m.at(r, k) / pivot;
            m.at(r, k) = mult;
            for (int c = k + 1; c < n; ++c) m.at(r, c) -= mult * m.at(k, c);
        }
    }
    f.lu = std::move(m);
    return f;
}

// Solves A x = b given PA = LU.
inline std::vector<Complex> lu_solve(const LuFactorization& f, std::span<const Complex> b) {
    const int n = f.size;
    std::vector<Complex> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = b[static_cast<std::size_t>(f.perm[i])];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu.at(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu.at(i, j) * x[j];
        x[i] /= f.lu.at(i, i);
    }
    return x;
}

// Solves A^H x = b using the same factors: A^H = U^H L^H P.
inline std::vector<Complex> lu_solve_adjoint(const LuFactorization& f, std::span<const Complex> b) {
    const int n = f.size;
    std::vector<Complex> t(b.begin(), b.end());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) t[i] -= std::conj(f.lu.at(j, i)) * t[j];
        t[i] /= std::conj(f.lu.at(i, i));
    }
    for (int i = n - 1; i >= 0; --i)
        for (int j = i + 1; j < n; ++j) t[i] -= std::conj(f.lu.at(j, i)) * t[j];
    std::vector<Complex> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(f.perm[i])] = t[i];
    return x;
}

}  // namespace detail

// Determinant via LU; returns exact 0 when elimination hits a pivot at or
// below zero_tol relative to its row scale.
inline Complex det(const ComplexMatrix& m, double zero_tol = Tolerances{}.zero) {
    if (!m.square()) fail(ErrorCode::NotSquare, "det requires a square matrix");
    if (m.rows == 0) return 1.0;
    auto f = detail::lu_factor(m, zero_tol);
    if (f.singular) return 0.0;
    Complex d = static_cast<double>(f.parity);
    for (int i = 0; i < f.size; ++i) d *= f.lu.at(i, i);
    return d;
}

inline std::vector<Complex> solve(const ComplexMatrix& m, std::span<const Complex> rhs,
                                  double zero_tol = Tolerances{}.zero) {
    if (!m.square()) fail(ErrorCode::NotSquare, "solve requires a square matrix");
    if (rhs.size() != static_cast<std::size_t>(m.rows))
        fail(ErrorCode::LengthMismatch, "right-hand side length does not match matrix size");
    auto f = detail::lu_factor(m, zero_tol);
    if (f.singular) fail(ErrorCode::Singular, "matrix is singular to working precision");
    return detail::lu_solve(f, rhs);
}

// Hager-style estimate of ||A||_inf * ||A^-1||_inf.  ||A^-1||_inf equals the
// 1-norm of (A^H)^-1, which the power iteration below estimates from a
// handful of solves with A and A^H; +infinity for singular input.
inline double cond_estimate(const ComplexMatrix& m, double zero_tol = Tolerances{}.zero) {
    if (!m.square()) fail(ErrorCode::NotSquare, "cond_estimate requires a square matrix");
    const int n = m.rows;
    if (n == 0) return 1.0;
    auto f = detail::lu_factor(m, zero_tol);
    if (f.singular) return std::numeric_limits<double>::infinity();

    const auto norm1 = [n](std::span<const Complex> v) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += std::abs(v[static_cast<std::size_t>(i)]);
        return s;
    };

    std::vector<Complex> x(static_cast<std::size_t>(n), Complex(1.0 / n, 0.0));
    double estimate = 0.0;
    int last_pick = -1;
    for (int iter = 0; iter < 5; ++iter) {
        auto y = detail::lu_solve_adjoint(f, x);  // (A^H)^-1 x
        estimate = std::max(estimate, norm1(y));
        for (auto& v : y) {
            const double mag = std::abs(v);
            v = mag > 0.0 ? v / mag : Complex(1.0, 0.0);
        }
        auto z = detail::lu_solve(f, y);  // A^-1 sign(y) = ((A^H)^-1)^H sign(y)
        int pick = 0;
        double zmax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(z[static_cast<std::size_t>(i)]);
            if (mag > zmax) {
                zmax = mag;
                pick = i;
            }
        }
        if (pick == last_pick) break;
        last_pick = pick;
        std::fill(x.begin(), x.end(), Complex(0.0, 0.0));
        x[static_cast<std::size_t>(pick)] = 1.0;
    }

    // Alternating safeguard vector, as in the classic estimator.
    std::vector<Complex> alt(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double v = 1.0 + static_cast<double>(i) / std::max(1, n - 1);
        alt[static_cast<std::size_t>(i)] = (i % 2 == 0) ? Complex(v, 0) : Complex(-v, 0);
    }
    auto y = detail::lu_solve_adjoint(f, alt);
    estimate = std::max(estimate, 2.0 * norm1(y) / (3.0 * n));

    return norm_inf(m) * estimate;
}

}  // namespace cfinite
