#pragma once

// The solution-space basis for an order-n recurrence with root spectrum
// {(alpha_i, n_i)}: sequences e^{j,i}_h = h(h-1)...(h+1-j) * alpha_i^{h-j}
// for j = 0..n_i-1, and the matrices of their values on index sets.  Columns
// are always laid out root-first ascending, then derivative order ascending.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "cfinite/linalg.hpp"
#include "cfinite/model.hpp"

namespace cfinite {

struct BasisElementId {
    int root_index = 0;   // position in the spectrum
    int deriv_order = 0;  // j, with j < multiplicity of that root
};

inline std::vector<BasisElementId> basis_elements(const RootSpectrum& spectrum) {
    std::vector<BasisElementId> ids;
    for (int i = 0; i < static_cast<int>(spectrum.roots.size()); ++i)
        for (int j = 0; j < spectrum.roots[static_cast<std::size_t>(i)].multiplicity; ++j)
            ids.push_back({i, j});
    return ids;
}

namespace detail {

inline Complex pow_binary(Complex base, std::uint64_t exponent) {
    Complex acc = 1.0;
    while (exponent > 0) {
        if (exponent & 1) acc *= base;
        base *= base;
        exponent >>= 1;
    }
    return acc;
}

}  // namespace detail

// e^{j,i}_h = fallingFactorial(h, j) * alpha^(h-j).  Exactly 0 for h < j
// (the falling factorial vanishes; no negative power is ever formed).
// Magnitudes outside double range raise RangeOverflow instead of returning
// infinities; the fast evaluators cover that regime.
inline Complex basis_value(Complex alpha, int deriv_order, std::uint64_t h) {
    if (std::abs(alpha) == 0.0) fail(ErrorCode::ZeroRoot, "basis_value requires a nonzero root");
    if (h < static_cast<std::uint64_t>(deriv_order)) return 0.0;

    double falling = 1.0;
    for (int t = 0; t < deriv_order; ++t) falling *= static_cast<double>(h - static_cast<std::uint64_t>(t));

    const std::uint64_t exponent = h - static_cast<std::uint64_t>(deriv_order);
    const double log_mag = std::log(std::abs(alpha));
    if (static_cast<double>(exponent) * std::abs(log_mag) > 700.0)
        fail(ErrorCode::RangeOverflow,
             "alpha^" + std::to_string(exponent) + " exceeds double range; use the fast evaluators");

    const Complex value = falling * detail::pow_binary(alpha, exponent);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        fail(ErrorCode::RangeOverflow, "basis value exceeds double range");
    return value;
}

// One row per index (in the order given), one column per basis element in
// canonical order.
inline ComplexMatrix basis_matrix(const RootSpectrum& spectrum,
                                  std::span<const std::uint64_t> indices) {
    const auto ids = basis_elements(spectrum);
    ComplexMatrix m(static_cast<int>(indices.size()), static_cast<int>(ids.size()));
    for (int r = 0; r < m.rows; ++r)
        for (int col = 0; col < m.cols; ++col) {
            const auto& id = ids[static_cast<std::size_t>(col)];
            m.at(r, col) = basis_value(spectrum.roots[static_cast<std::size_t>(id.root_index)].root,
                                       id.deriv_order, indices[static_cast<std::size_t>(r)]);
        }
    return m;
}

// prod_{i<j} (alpha_j - alpha_i), the closed form of det(basis_matrix) for a
// simple-root spectrum on I = {0..n-1}.
inline Complex vandermonde_det(const RootSpectrum& spectrum,
                               std::span<const std::uint64_t> indices) {
    if (!spectrum.all_simple())
        fail(ErrorCode::PreconditionViolated, "vandermonde_det requires simple roots");
    const int n = spectrum.order();
    if (static_cast<int>(indices.size()) != n)
        fail(ErrorCode::PreconditionViolated, "vandermonde_det requires exactly n indices");
    for (int k = 0; k < n; ++k)
        if (indices[static_cast<std::size_t>(k)] != static_cast<std::uint64_t>(k))
            fail(ErrorCode::PreconditionViolated, "vandermonde_det requires indices {0..n-1}");

    Complex product = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            product *= spectrum.roots[static_cast<std::size_t>(j)].root -
                       spectrum.roots[static_cast<std::size_t>(i)].root;
    return product;
}

}  // namespace cfinite
