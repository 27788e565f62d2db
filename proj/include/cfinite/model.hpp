#pragma once

// Core domain types for constant-coefficient linear recurrences
// (C-finite sequences), shared by every other header.
//
// Conventions used throughout the library:
//  - A recurrence of order n is  u[h+n] = s_1*u[h+n-1] + ... + s_n*u[h],
//    with s_n != 0 and initial values u[0..n-1].
//  - Root spectra list distinct nonzero roots alpha_i of the characteristic
//    polynomial chi(X) = X^n - sum_i s_i X^{n-i}, with multiplicities n_i,
//    sum n_i = n.
//  - Basis columns are always ordered root-first ascending, derivative order
//    ascending within a root.  Every matrix built anywhere in the library
//    uses this one column order.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfinite {

using Complex = std::complex<double>;

enum class ErrorCode {
    // validation / input errors
    ZeroTrailingCoefficient,
    LengthMismatch,
    DuplicateRoot,
    ZeroRoot,
    MultiplicitySumMismatch,
    NotSquare,
    PreconditionViolated,
    ParseError,
    // numeric failures
    Singular,
    SingularBasis,
    NoConvergence,
    RangeOverflow,
    RouteMismatch,
    InconsistentSpectrum,
    NoRecurrenceFound,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroTrailingCoefficient: return "ZeroTrailingCoefficient";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DuplicateRoot: return "DuplicateRoot";
        case ErrorCode::ZeroRoot: return "ZeroRoot";
        case ErrorCode::MultiplicitySumMismatch: return "MultiplicitySumMismatch";
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::SingularBasis: return "SingularBasis";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::RangeOverflow: return "RangeOverflow";
        case ErrorCode::RouteMismatch: return "RouteMismatch";
        case ErrorCode::InconsistentSpectrum: return "InconsistentSpectrum";
        case ErrorCode::NoRecurrenceFound: return "NoRecurrenceFound";
    }
    return "Unknown";
}

// True for errors caused by malformed input rather than by a numeric
// computation failing.  The CLI maps the former to exit 2, the latter to 3.
inline bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroTrailingCoefficient:
        case ErrorCode::LengthMismatch:
        case ErrorCode::DuplicateRoot:
        case ErrorCode::ZeroRoot:
        case ErrorCode::MultiplicitySumMismatch:
        case ErrorCode::NotSquare:
        case ErrorCode::PreconditionViolated:
        case ErrorCode::ParseError:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

// Numeric thresholds shared by validation and the determinant formulas.
//  zero     -- magnitudes at or below this are treated as zero (absolute)
//  cluster  -- root clustering radius, relative to the largest root magnitude
//  cond_max -- largest condition estimate accepted by the determinant route
struct Tolerances {
    double zero = 1e-12;
    double cluster = 1e-8;
    double cond_max = 1e12;

    void check() const {
        if (zero < 0 || cluster < 0) fail(ErrorCode::PreconditionViolated, "tolerances must be nonnegative");
        if (!(cond_max > 1)) fail(ErrorCode::PreconditionViolated, "cond_max must exceed 1");
    }
};

// Order-n recurrence: coefficients s_1..s_n, initial values u_0..u_{n-1}.
struct RecurrenceSpec {
    int order = 0;
    std::vector<Complex> coefficients;
    std::vector<Complex> initial;
};

struct RootMultiplicity {
    Complex root;
    int multiplicity = 1;
};

// Distinct nonzero roots with multiplicities summing to the order.
struct RootSpectrum {
    std::vector<RootMultiplicity> roots;

    int order() const {
        int n = 0;
        for (const auto& r : roots) n += r.multiplicity;
        return n;
    }

    double max_magnitude() const {
        double m = 0.0;
        for (const auto& r : roots) m = std::max(m, std::abs(r.root));
        return m;
    }

    bool all_simple() const {
        return std::all_of(roots.begin(), roots.end(),
                           [](const RootMultiplicity& r) { return r.multiplicity == 1; });
    }
};

// n sequence values u_{k} at strictly increasing indices k_0 < ... < k_{n-1}.
struct SampleSet {
    std::vector<std::uint64_t> indices;
    std::vector<Complex> values;
};

// One closed-form term A_i(X) * alpha_i^X; coefficients are monomial,
// ascending degree, exactly multiplicity-many of them.
struct ClosedFormTerm {
    Complex root;
    std::vector<Complex> coefficients;
};

struct ClosedForm {
    std::vector<ClosedFormTerm> terms;

    Complex evaluate(std::uint64_t h) const {
        Complex sum = 0.0;
        for (const auto& term : terms) {
            Complex poly = 0.0;
            Complex x = static_cast<double>(h);
            Complex power = 1.0;
            for (const Complex& c : term.coefficients) {
                poly += c * power;
                power *= x;
            }
            sum += poly * std::pow(term.root, static_cast<double>(h));
        }
        return sum;
    }
};

// Ordinary generating function P(x)/Q(x); coefficient lists ascending,
// deg P < deg Q = n, Q(0) = 1.
struct RationalGF {
    std::vector<Complex> numerator;
    std::vector<Complex> denominator;
};

// Sorts spectrum entries by (Re, Im) ascending.  find_roots emits this order
// so identical inputs produce identical column layouts everywhere.
inline void sort_canonical(RootSpectrum& spectrum) {
    std::sort(spectrum.roots.begin(), spectrum.roots.end(),
              [](const RootMultiplicity& a, const RootMultiplicity& b) {
                  if (a.root.real() != b.root.real()) return a.root.real() < b.root.real();
                  return a.root.imag() < b.root.imag();
              });
}

inline RecurrenceSpec validate_spec(RecurrenceSpec spec, const Tolerances& tol = {}) {
    tol.check();
    if (spec.order < 1)
        fail(ErrorCode::LengthMismatch, "order must be at least 1, got " + std::to_string(spec.order));
    const auto n = static_cast<std::size_t>(spec.order);
    if (spec.coefficients.size() != n)
        fail(ErrorCode::LengthMismatch,
             "expected " + std::to_string(spec.order) + " coefficients, got " +
                 std::to_string(spec.coefficients.size()));
    if (spec.initial.size() != n)
        fail(ErrorCode::LengthMismatch,
             "expected " + std::to_string(spec.order) + " initial values, got " +
                 std::to_string(spec.initial.size()));
    if (std::abs(spec.coefficients.back()) <= tol.zero)
        fail(ErrorCode::ZeroTrailingCoefficient,
             "trailing coefficient s_" + std::to_string(spec.order) + " must be nonzero");
    return spec;
}

inline RootSpectrum validate_spectrum(RootSpectrum spectrum, int order, const Tolerances& tol = {}) {
    tol.check();
    if (spectrum.roots.empty())
        fail(ErrorCode::MultiplicitySumMismatch, "spectrum has no roots");
    for (const auto& r : spectrum.roots) {
        if (r.multiplicity < 1)
            fail(ErrorCode::MultiplicitySumMismatch, "multiplicities must be positive");
        if (std::abs(r.root) <= tol.zero)
            fail(ErrorCode::ZeroRoot, "roots must be nonzero");
    }
    const double separation = tol.cluster * spectrum.max_magnitude();
    for (std::size_t i = 0; i < spectrum.roots.size(); ++i)
        for (std::size_t j = i + 1; j < spectrum.roots.size(); ++j)
            if (std::abs(spectrum.roots[i].root - spectrum.roots[j].root) <= separation)
                fail(ErrorCode::DuplicateRoot, "roots " + std::to_string(i) + " and " +
                                                   std::to_string(j) + " are not distinct");
    if (spectrum.order() != order)
        fail(ErrorCode::MultiplicitySumMismatch,
             "multiplicities sum to " + std::to_string(spectrum.order()) + ", expected " +
                 std::to_string(order));
    return spectrum;
}

}  // namespace cfinite
