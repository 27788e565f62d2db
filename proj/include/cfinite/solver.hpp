#pragma once

// Term evaluation and exact-form extraction for C-finite sequences:
//  - eval_iterative: direct recursion, the reference everything else is
//    checked against
//  - eval_determinant / reconstruct_from_samples: u_h as a ratio of
//    determinants over an arbitrary n-element index set
//  - eval_corollary1: the simple-root case with the Vandermonde product as
//    the denominator
//  - closed_form: the per-root polynomials A_i with u_h = sum A_i(h) alpha_i^h
//  - generating_function: P(x)/Q(x) computed along two independent routes
//    that must agree

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cfinite/basis.hpp"
#include "cfinite/charpoly.hpp"
#include "cfinite/linalg.hpp"
#include "cfinite/model.hpp"

namespace cfinite {

enum class EvalMethod { iterative, determinant, vandermonde, samples };

inline const char* eval_method_name(EvalMethod m) {
    switch (m) {
        case EvalMethod::iterative: return "iterative";
        case EvalMethod::determinant: return "determinant";
        case EvalMethod::vandermonde: return "vandermonde";
        case EvalMethod::samples: return "samples";
    }
    return "unknown";
}

// Value plus the diagnostics that tell whether the ratio was trustworthy.
struct EvalReport {
    Complex value;
    Complex denom_det;
    double cond_estimate = 1.0;
    EvalMethod method = EvalMethod::determinant;
};

// u_h by running the recurrence forward from the initial values.
inline Complex eval_iterative(const RecurrenceSpec& spec, std::uint64_t h) {
    const auto n = static_cast<std::size_t>(spec.order);
    if (h < n) return spec.initial[static_cast<std::size_t>(h)];
    std::vector<Complex> window(spec.initial.begin(), spec.initial.end());
    std::size_t head = 0;  // window[(head+k) mod n] = u_{t+k} for current base t
    for (std::uint64_t t = n; t <= h; ++t) {
        Complex next = 0.0;
        for (std::size_t i = 1; i <= n; ++i) next += spec.coefficients[i - 1] * window[(head + n - i) % n];
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
            fail(ErrorCode::RangeOverflow, "term magnitude exceeds double range at index " +
                                               std::to_string(t) + "; use the fast evaluators");
        window[head] = next;
        head = (head + 1) % n;
    }
    return window[(head + n - 1) % n];
}

namespace detail {

// Numerator of the determinant formula: column 0 holds the sample values
// followed by 0, the remaining columns hold each basis element on the sample
// indices followed by its value at h.  Rows are the samples in order, h last.
inline ComplexMatrix numerator_matrix(const SampleSet& samples, const RootSpectrum& spectrum,
                                      std::uint64_t h) {
    const int n = static_cast<int>(samples.indices.size());
    const auto ids = basis_elements(spectrum);
    ComplexMatrix m(n + 1, n + 1);
    for (int r = 0; r < n; ++r) m.at(r, 0) = samples.values[static_cast<std::size_t>(r)];
    m.at(n, 0) = 0.0;
    for (int col = 0; col < static_cast<int>(ids.size()); ++col) {
        const auto& id = ids[static_cast<std::size_t>(col)];
        const Complex alpha = spectrum.roots[static_cast<std::size_t>(id.root_index)].root;
        for (int r = 0; r < n; ++r)
            m.at(r, col + 1) = basis_value(alpha, id.deriv_order,
                                           samples.indices[static_cast<std::size_t>(r)]);
        m.at(n, col + 1) = basis_value(alpha, id.deriv_order, h);
    }
    return m;
}

inline double sign_prefactor(int n) { return (n % 2 == 0) ? -1.0 : 1.0; }  // (-1)^(n+1)

inline std::string format_diagnostic(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3g", v);
    return buffer;
}

inline void check_samples(const SampleSet& samples, int order) {
    if (samples.indices.size() != samples.values.size())
        fail(ErrorCode::LengthMismatch, "sample indices and values differ in length");
    if (static_cast<int>(samples.indices.size()) != order)
        fail(ErrorCode::LengthMismatch, "need exactly " + std::to_string(order) +
                                            " samples, got " + std::to_string(samples.indices.size()));
    for (std::size_t k = 1; k < samples.indices.size(); ++k)
        if (samples.indices[k] <= samples.indices[k - 1])
            fail(ErrorCode::PreconditionViolated, "sample indices must be strictly increasing");
}

// log of the product of row infinity-norms (the Hadamard-style scale a
// determinant's rounding error is bounded by); kept in log space because the
// rows can span hundreds of orders of magnitude
inline double log_hadamard_scale(const ComplexMatrix& m) {
    double sum = 0.0;
    for (int r = 0; r < m.rows; ++r) sum += std::log(row_max_abs(m, r));
    return sum;
}

}  // namespace detail

// u_h = (-1)^(n+1) * det(numerator) / det(basis matrix on I).  Also evaluated
// for h in I, where the same ratio reproduces the sample value.
//
// "SingularBasis" covers two situations: the denominator determinant is
// negligible against its row scales, or the amplification estimate of the
// ratio exceeds cond_max.  The amplification estimate is Hadamard-based:
// rounding in an LU determinant is bounded by eps times the product of row
// scales, so the ratio's relative error is roughly
// eps * prod(rowScales(num)) / (|detDen| * max(1, |value|)), and similarly
// for the denominator's own digits.
inline EvalReport eval_determinant(const SampleSet& samples, const RootSpectrum& spectrum,
                                   std::uint64_t h, const Tolerances& tol = {},
                                   EvalMethod method = EvalMethod::determinant) {
    tol.check();
    const int n = spectrum.order();
    detail::check_samples(samples, n);

    const ComplexMatrix den = basis_matrix(spectrum, samples.indices);
    const Complex den_det = det(den, tol.zero);
    if (!std::isfinite(den_det.real()) || !std::isfinite(den_det.imag()))
        fail(ErrorCode::RangeOverflow, "denominator determinant exceeds double range");
    const double log_den_scale = detail::log_hadamard_scale(den);
    const double log_den_det = std::log(std::abs(den_det));
    if (log_den_det <= std::log(tol.zero) + log_den_scale)
        fail(ErrorCode::SingularBasis, "singular basis matrix on the given index set");
    const double den_amplification = n * std::exp(log_den_scale - log_den_det);

    // all-zero samples on a nonsingular basis pin the zero sequence exactly
    const bool all_zero = std::all_of(samples.values.begin(), samples.values.end(),
                                      [](Complex v) { return v == Complex(0.0, 0.0); });
    if (all_zero) return {Complex(0.0, 0.0), den_det, std::max(1.0, den_amplification), method};

    const ComplexMatrix num = detail::numerator_matrix(samples, spectrum, h);
    const Complex num_det = det(num, tol.zero);
    if (!std::isfinite(num_det.real()) || !std::isfinite(num_det.imag()))
        fail(ErrorCode::RangeOverflow, "numerator determinant exceeds double range");

    const Complex value = detail::sign_prefactor(n) * num_det / den_det;
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        fail(ErrorCode::RangeOverflow, "determinant ratio exceeds double range");

    const double log_num_scale = detail::log_hadamard_scale(num);
    const double log_value_floor = std::log(std::max(1.0, std::abs(value)));
    const double amplification =
        std::max({1.0, den_amplification,
                  (n + 1) * std::exp(log_num_scale - log_den_det - log_value_floor)});
    if (!(amplification <= tol.cond_max))
        fail(ErrorCode::SingularBasis,
             "ratio amplification estimate " + detail::format_diagnostic(amplification) +
                 " leaves no trustworthy digits at this index set");

    return {value, den_det, amplification, method};
}

// Corollary-2 entry point: same ratio, arbitrary strictly increasing sample
// indices.
inline EvalReport reconstruct_from_samples(const SampleSet& samples, const RootSpectrum& spectrum,
                                           std::uint64_t h, const Tolerances& tol = {}) {
    return eval_determinant(samples, spectrum, h, tol, EvalMethod::samples);
}

// Simple-root fast path over I = {0..n-1}: denominator replaced by the
// closed-form Vandermonde product.  Valid for every h, including h < n.
inline Complex eval_corollary1(std::span<const Complex> initial, const RootSpectrum& spectrum,
                               std::uint64_t h, const Tolerances& tol = {}) {
    tol.check();
    const int n = spectrum.order();
    if (!spectrum.all_simple())
        fail(ErrorCode::PreconditionViolated, "eval_corollary1 requires simple roots");
    if (static_cast<int>(initial.size()) != n)
        fail(ErrorCode::LengthMismatch, "need exactly " + std::to_string(n) + " initial values");

    SampleSet samples;
    samples.indices.resize(static_cast<std::size_t>(n));
    std::iota(samples.indices.begin(), samples.indices.end(), 0);
    samples.values.assign(initial.begin(), initial.end());

    std::vector<std::uint64_t> base(samples.indices);
    const Complex den = vandermonde_det(spectrum, base);
    if (std::abs(den) <= tol.zero)
        fail(ErrorCode::SingularBasis, "Vandermonde product is negligible");

    const ComplexMatrix num = detail::numerator_matrix(samples, spectrum, h);
    return detail::sign_prefactor(n) * det(num, tol.zero) / den;
}

namespace detail {

// Coordinates c ordered like the basis columns, solving
// basis_matrix(spectrum, {0..n-1}) c = initial.
inline std::vector<Complex> basis_coordinates(std::span<const Complex> initial,
                                              const RootSpectrum& spectrum, const Tolerances& tol) {
    const int n = spectrum.order();
    std::vector<std::uint64_t> indices(static_cast<std::size_t>(n));
    std::iota(indices.begin(), indices.end(), 0);
    const ComplexMatrix m = basis_matrix(spectrum, indices);
    try {
        return solve(m, initial, tol.zero);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Singular)
            fail(ErrorCode::SingularBasis, "basis matrix on {0..n-1} is singular");
        throw;
    }
}

inline void check_consistent(const RecurrenceSpec& spec, const RootSpectrum& spectrum) {
    const std::vector<Complex> expanded = coeffs_from_spectrum(spectrum);
    if (expanded.size() != spec.coefficients.size())
        fail(ErrorCode::InconsistentSpectrum, "spectrum order does not match the recurrence order");
    double scale = 1.0;
    for (const Complex& s : spec.coefficients) scale = std::max(scale, std::abs(s));
    for (std::size_t i = 0; i < expanded.size(); ++i)
        if (std::abs(expanded[i] - spec.coefficients[i]) > 1e-4 * scale)
            fail(ErrorCode::InconsistentSpectrum,
                 "spectrum does not reproduce coefficient s_" + std::to_string(i + 1));
}

}  // namespace detail

// Per-root polynomials A_i with u_h = sum_i A_i(h) alpha_i^h, expanded to
// monomial coefficients.  From the coordinates c_{j,i} of the initial values
// in the basis: A_i(X) = sum_j c_{j,i} alpha_i^{-j} X(X-1)...(X-j+1).
inline ClosedForm closed_form(const RecurrenceSpec& spec, const RootSpectrum& spectrum,
                              const Tolerances& tol = {}) {
    tol.check();
    detail::check_consistent(spec, spectrum);
    const std::vector<Complex> coords = detail::basis_coordinates(spec.initial, spectrum, tol);

    ClosedForm result;
    std::size_t next = 0;
    for (const auto& entry : spectrum.roots) {
        ClosedFormTerm term;
        term.root = entry.root;
        term.coefficients.assign(static_cast<std::size_t>(entry.multiplicity), Complex(0.0, 0.0));
        std::vector<Complex> falling{1.0};  // X(X-1)...(X-j+1), monomial coefficients
        Complex inv_power = 1.0;            // alpha^{-j}
        for (int j = 0; j < entry.multiplicity; ++j) {
            if (j > 0) {
                const std::vector<Complex> factor{Complex(-(j - 1), 0.0), Complex(1.0, 0.0)};
                falling = poly_mul(falling, factor);
                inv_power /= entry.root;
            }
            const Complex c = coords[next++] * inv_power;
            for (std::size_t k = 0; k < falling.size(); ++k) term.coefficients[k] += c * falling[k];
        }
        result.terms.push_back(std::move(term));
    }
    return result;
}

// Drops trailing coefficients of each A_i at or below zero_tol (relative to
// the largest coefficient present); keeps at least the constant term.
inline ClosedForm trimmed(ClosedForm form, double zero_tol = Tolerances{}.zero) {
    double scale = 1.0;
    for (const auto& term : form.terms)
        for (const Complex& c : term.coefficients) scale = std::max(scale, std::abs(c));
    for (auto& term : form.terms)
        while (term.coefficients.size() > 1 &&
               std::abs(term.coefficients.back()) <= zero_tol * scale)
            term.coefficients.pop_back();
    return form;
}

// P(x)/Q(x) with Q(x) = 1 - sum_i s_i x^i and P the degree-(n-1) truncation
// of (sum_{h<n} u_h x^h) Q(x).  A second, independent assembly through the
// partial fractions sum_{j,i} c_{j,i} j! x^j / (1 - alpha_i x)^{j+1} must
// agree coefficient-wise; disagreement means the spectrum was too inaccurate
// and raises RouteMismatch.  The returned coefficients come from the direct
// route, which is exact for rational input.
inline RationalGF generating_function(const RecurrenceSpec& spec, const RootSpectrum& spectrum,
                                      const Tolerances& tol = {}) {
    tol.check();
    detail::check_consistent(spec, spectrum);
    const auto n = static_cast<std::size_t>(spec.order);

    RationalGF gf;
    gf.denominator.assign(n + 1, Complex(0.0, 0.0));
    gf.denominator[0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) gf.denominator[i] = -spec.coefficients[i - 1];
    const std::vector<Complex> product = poly_mul(spec.initial, gf.denominator);
    gf.numerator.assign(product.begin(), product.begin() + static_cast<std::ptrdiff_t>(n));

    // partial-fraction route over the common denominator prod (1 - alpha_i x)^{n_i}
    const std::vector<Complex> coords = detail::basis_coordinates(spec.initial, spectrum, tol);
    std::vector<Complex> denom_pf{1.0};
    for (const auto& entry : spectrum.roots) {
        const std::vector<Complex> factor{1.0, -entry.root};
        for (int k = 0; k < entry.multiplicity; ++k) denom_pf = poly_mul(denom_pf, factor);
    }
    std::vector<Complex> numer_pf(n, Complex(0.0, 0.0));
    std::size_t next = 0;
    for (std::size_t i = 0; i < spectrum.roots.size(); ++i) {
        const auto& entry = spectrum.roots[i];
        for (int j = 0; j < entry.multiplicity; ++j) {
            const Complex c = coords[next++];
            // j! x^j * (1 - alpha_i x)^{n_i - 1 - j} * prod_{k != i} (1 - alpha_k x)^{n_k}
            std::vector<Complex> piece(static_cast<std::size_t>(j) + 1, Complex(0.0, 0.0));
            double factorial = 1.0;
            for (int t = 2; t <= j; ++t) factorial *= t;
            piece.back() = c * factorial;
            const std::vector<Complex> own{1.0, -entry.root};
            for (int k = 0; k < entry.multiplicity - 1 - j; ++k) piece = poly_mul(piece, own);
            for (std::size_t other = 0; other < spectrum.roots.size(); ++other) {
                if (other == i) continue;
                const std::vector<Complex> factor{1.0, -spectrum.roots[other].root};
                for (int k = 0; k < spectrum.roots[other].multiplicity; ++k)
                    piece = poly_mul(piece, factor);
            }
            for (std::size_t k = 0; k < piece.size(); ++k) numer_pf[k] += piece[k];
        }
    }

    double scale = 1.0;
    for (const Complex& v : gf.numerator) scale = std::max(scale, std::abs(v));
    for (const Complex& v : gf.denominator) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(numer_pf[k] - gf.numerator[k]) > 1e-8 * scale)
            fail(ErrorCode::RouteMismatch,
                 "generating-function routes disagree in numerator coefficient " + std::to_string(k));
    for (std::size_t k = 0; k <= n; ++k)
        if (std::abs(denom_pf[k] - gf.denominator[k]) > 1e-8 * scale)
            fail(ErrorCode::RouteMismatch,
                 "generating-function routes disagree in denominator coefficient " + std::to_string(k));

    while (gf.numerator.size() > 1 && std::abs(gf.numerator.back()) <= tol.zero * scale)
        gf.numerator.pop_back();
    return gf;
}

}  // namespace cfinite
