#pragma once

// Evaluation strategies that scale to huge term indices, generic over the
// coefficient ring: companion-matrix binary exponentiation (O(n^3 log h))
// and powering X^h modulo the characteristic polynomial (O(n^2 log h)).
// Both use only ring operations (+, -, *), so over big integers every
// intermediate stays an exact integer.  Also the inverse problem: inferring
// the minimal recurrence from raw terms through Hankel systems.
//
// Ring element requirements: copyable, +, -, *, ==, and ADL-reachable
// ring_zero/ring_one taking a sample element (so rings that carry runtime
// state, like a modulus, can mint constants).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "cfinite/linalg.hpp"
#include "cfinite/model.hpp"

namespace cfinite {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

template <class R>
R ring_zero(const R&) {
    return R(0);
}

template <class R>
R ring_one(const R&) {
    return R(1);
}

// Arithmetic modulo an odd 64-bit modulus; both operands of any operation
// must carry the same modulus.
struct Mod64 {
    std::uint64_t value = 0;
    std::uint64_t modulus = 0;

    static Mod64 reduce(std::int64_t v, std::uint64_t m) {
        const std::int64_t r = v % static_cast<std::int64_t>(m);
        return {static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r), m};
    }

    friend Mod64 operator+(const Mod64& a, const Mod64& b) {
        std::uint64_t s = a.value + b.value;
        if (s >= a.modulus) s -= a.modulus;
        return {s, a.modulus};
    }
    friend Mod64 operator-(const Mod64& a, const Mod64& b) {
        return {a.value >= b.value ? a.value - b.value : a.value + a.modulus - b.value, a.modulus};
    }
    friend Mod64 operator*(const Mod64& a, const Mod64& b) {
        const auto wide = static_cast<unsigned __int128>(a.value) * b.value;
        return {static_cast<std::uint64_t>(wide % a.modulus), a.modulus};
    }
    friend bool operator==(const Mod64& a, const Mod64& b) { return a.value == b.value; }
};

inline Mod64 ring_zero(const Mod64& sample) { return {0, sample.modulus}; }
inline Mod64 ring_one(const Mod64& sample) { return {1 % sample.modulus, sample.modulus}; }

// A recurrence over an arbitrary ring: u[h+n] = sum_i coefficients[i-1] * u[h+n-i].
template <class R>
struct Recurrence {
    std::vector<R> coefficients;
    std::vector<R> initial;

    int order() const { return static_cast<int>(coefficients.size()); }
};

inline Recurrence<Mod64> to_modular(std::span<const std::int64_t> coefficients,
                                    std::span<const std::int64_t> initial, std::uint64_t modulus) {
    if (modulus < 3 || modulus % 2 == 0)
        fail(ErrorCode::PreconditionViolated, "modulus must be an odd prime");
    Recurrence<Mod64> r;
    for (const std::int64_t c : coefficients) r.coefficients.push_back(Mod64::reduce(c, modulus));
    for (const std::int64_t u : initial) r.initial.push_back(Mod64::reduce(u, modulus));
    return r;
}

// First `count` terms by direct recursion.
template <class R>
std::vector<R> iterate_terms(const Recurrence<R>& rec, std::size_t count) {
    const auto n = static_cast<std::size_t>(rec.order());
    std::vector<R> terms(rec.initial.begin(), rec.initial.end());
    terms.reserve(std::max(count, n));
    while (terms.size() < count) {
        R next = ring_zero(rec.coefficients.front());
        for (std::size_t i = 1; i <= n; ++i)
            next = next + rec.coefficients[i - 1] * terms[terms.size() - i];
        terms.push_back(std::move(next));
    }
    terms.resize(count, ring_zero(rec.coefficients.front()));
    return terms;
}

// u_h via binary exponentiation of the companion matrix applied to the
// initial state (u_{n-1},...,u_0).
template <class R>
R eval_companion_power(const Recurrence<R>& rec, std::uint64_t h) {
    const int n = rec.order();
    if (h < static_cast<std::uint64_t>(n)) return rec.initial[static_cast<std::size_t>(h)];
    const R zero = ring_zero(rec.coefficients.front());
    const R one = ring_one(rec.coefficients.front());

    using Matrix = std::vector<std::vector<R>>;
    const auto multiply = [&](const Matrix& a, const Matrix& b) {
        Matrix out(static_cast<std::size_t>(n), std::vector<R>(static_cast<std::size_t>(n), zero));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const R& aik = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                if (aik == zero) continue;
                for (int j = 0; j < n; ++j)
                    out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                        aik * b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            }
        return out;
    };

    Matrix base(static_cast<std::size_t>(n), std::vector<R>(static_cast<std::size_t>(n), zero));
    for (int j = 0; j < n; ++j) base[0][static_cast<std::size_t>(j)] = rec.coefficients[static_cast<std::size_t>(j)];
    for (int i = 1; i < n; ++i) base[static_cast<std::size_t>(i)][static_cast<std::size_t>(i - 1)] = one;

    Matrix acc(static_cast<std::size_t>(n), std::vector<R>(static_cast<std::size_t>(n), zero));
    for (int i = 0; i < n; ++i) acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = one;

    std::uint64_t exponent = h - static_cast<std::uint64_t>(n) + 1;
    while (exponent > 0) {
        if (exponent & 1) acc = multiply(acc, base);
        base = multiply(base, base);
        exponent >>= 1;
    }

    R result = zero;
    for (int j = 0; j < n; ++j)
        result = result + acc[0][static_cast<std::size_t>(j)] *
                              rec.initial[static_cast<std::size_t>(n - 1 - j)];
    return result;
}

// u_h from the residue X^h mod chi(X): square-and-multiply over residues of
// degree < n, then u_h = sum_k r_k u_k.
template <class R>
R eval_kitamasa(const Recurrence<R>& rec, std::uint64_t h) {
    const auto n = static_cast<std::size_t>(rec.order());
    if (h < n) return rec.initial[static_cast<std::size_t>(h)];
    const R zero = ring_zero(rec.coefficients.front());
    const R one = ring_one(rec.coefficients.front());

    // multiply two residues, reduce by X^n = sum_i s_i X^{n-i}
    const auto mulmod = [&](const std::vector<R>& a, const std::vector<R>& b) {
        std::vector<R> prod(a.size() + b.size() - 1, zero);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == zero) continue;
            for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = prod[i + j] + a[i] * b[j];
        }
        for (std::size_t k = prod.size(); k-- > n;) {
            const R head = prod[k];
            if (head == zero) continue;
            for (std::size_t i = 1; i <= n; ++i)
                prod[k - i] = prod[k - i] + head * rec.coefficients[i - 1];
        }
        prod.resize(n, zero);
        return prod;
    };

    std::vector<R> residue(n, zero);
    residue[0] = one;
    std::vector<R> base(n, zero);
    if (n == 1) {
        base[0] = rec.coefficients[0];  // X reduces immediately for order 1
    } else {
        base[1] = one;
    }

    std::uint64_t exponent = h;
    while (exponent > 0) {
        if (exponent & 1) residue = mulmod(residue, base);
        base = mulmod(base, base);
        exponent >>= 1;
    }

    R result = zero;
    for (std::size_t k = 0; k < n; ++k) result = result + residue[k] * rec.initial[k];
    return result;
}

namespace detail {

// Gaussian elimination over an exact field; nullopt when singular.
inline std::optional<std::vector<BigRational>> solve_exact(
    std::vector<std::vector<BigRational>> m, std::vector<BigRational> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            const BigRational factor = m[r][col] / m[col][col];
            for (std::size_t cc = col; cc < n; ++cc) m[r][cc] -= factor * m[col][cc];
            rhs[r] -= factor * rhs[col];
        }
    }
    std::vector<BigRational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        BigRational acc = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= m[i][j] * x[j];
        x[i] = acc / m[i][i];
    }
    return x;
}

}  // namespace detail

// Minimal-order recurrence fitting all given terms exactly: for ascending n,
// solve the n x n Hankel system over windows of consecutive terms and accept
// the first solution that reproduces every term (with nonzero trailing
// coefficient).
inline Recurrence<BigRational> infer_recurrence(const std::vector<BigRational>& terms,
                                                int max_order) {
    if (max_order < 1) fail(ErrorCode::PreconditionViolated, "max order must be positive");
    if (terms.size() < 2 * static_cast<std::size_t>(max_order))
        fail(ErrorCode::LengthMismatch, "need at least 2*maxOrder terms");

    for (int n = 1; n <= max_order; ++n) {
        const auto un = static_cast<std::size_t>(n);
        std::vector<std::vector<BigRational>> m(un, std::vector<BigRational>(un));
        std::vector<BigRational> rhs(un);
        for (std::size_t r = 0; r < un; ++r) {
            for (std::size_t i = 1; i <= un; ++i) m[r][i - 1] = terms[un + r - i];
            rhs[r] = terms[un + r];
        }
        auto solution = detail::solve_exact(std::move(m), std::move(rhs));
        if (!solution || solution->back() == 0) continue;

        Recurrence<BigRational> candidate;
        candidate.coefficients = *solution;
        candidate.initial.assign(terms.begin(), terms.begin() + n);
        const std::vector<BigRational> regenerated = iterate_terms(candidate, terms.size());
        if (std::equal(regenerated.begin(), regenerated.end(), terms.begin())) return candidate;
    }
    fail(ErrorCode::NoRecurrenceFound,
         "no recurrence of order <= " + std::to_string(max_order) + " fits the terms");
}

// Floating-point variant: Hankel systems judged by condition estimate, fit
// judged at relative 1e-8 over all terms.
inline RecurrenceSpec infer_recurrence(const std::vector<Complex>& terms, int max_order,
                                       const Tolerances& tol = {}) {
    tol.check();
    if (max_order < 1) fail(ErrorCode::PreconditionViolated, "max order must be positive");
    if (terms.size() < 2 * static_cast<std::size_t>(max_order))
        fail(ErrorCode::LengthMismatch, "need at least 2*maxOrder terms");

    for (int n = 1; n <= max_order; ++n) {
        const auto un = static_cast<std::size_t>(n);
        ComplexMatrix m(n, n);
        std::vector<Complex> rhs(un);
        for (int r = 0; r < n; ++r) {
            for (int i = 1; i <= n; ++i)
                m.at(r, i - 1) = terms[un + static_cast<std::size_t>(r) - static_cast<std::size_t>(i)];
            rhs[static_cast<std::size_t>(r)] = terms[un + static_cast<std::size_t>(r)];
        }
        if (!(cond_estimate(m, tol.zero) <= tol.cond_max)) continue;

        std::vector<Complex> coefficients;
        try {
            coefficients = solve(m, rhs, tol.zero);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Singular) continue;
            throw;
        }
        if (std::abs(coefficients.back()) <= tol.zero) continue;

        RecurrenceSpec candidate;
        candidate.order = n;
        candidate.coefficients = coefficients;
        candidate.initial.assign(terms.begin(), terms.begin() + n);

        bool fits = true;
        std::vector<Complex> window(candidate.initial);
        for (std::size_t t = un; t < terms.size() && fits; ++t) {
            Complex next = 0.0;
            for (std::size_t i = 1; i <= un; ++i)
                next += coefficients[i - 1] * window[window.size() - i];
            if (std::abs(next - terms[t]) > 1e-8 * std::max(1.0, std::abs(terms[t]))) fits = false;
            window.push_back(next);
        }
        if (fits) return candidate;
    }
    fail(ErrorCode::NoRecurrenceFound,
         "no recurrence of order <= " + std::to_string(max_order) + " fits the terms");
}

// Bridges to the complex-double model type.
inline Recurrence<Complex> to_ring(const RecurrenceSpec& spec) {
    return {spec.coefficients, spec.initial};
}

inline Complex eval_companion_power(const RecurrenceSpec& spec, std::uint64_t h) {
    return eval_companion_power(to_ring(spec), h);
}

inline Complex eval_kitamasa(const RecurrenceSpec& spec, std::uint64_t h) {
    return eval_kitamasa(to_ring(spec), h);
}

}  // namespace cfinite
