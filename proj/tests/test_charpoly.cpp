#include "test_support.hpp"

using namespace cfinite;
using testsup::kPhi;
using testsup::kPsi;

namespace {

// nearest-neighbor match of recovered roots against the originals
void require_spectra_match(const RootSpectrum& original, const RootSpectrum& recovered,
                           double tol) {
    REQUIRE(recovered.roots.size() == original.roots.size());
    std::vector<bool> used(recovered.roots.size(), false);
    for (const auto& want : original.roots) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = 0;
        for (std::size_t k = 0; k < recovered.roots.size(); ++k) {
            if (used[k]) continue;
            const double d = std::abs(recovered.roots[k].root - want.root);
            if (d < best) {
                best = d;
                pick = k;
            }
        }
        INFO("root " << want.root << " best match distance " << best);
        REQUIRE(best <= tol);
        REQUIRE(recovered.roots[pick].multiplicity == want.multiplicity);
        used[pick] = true;
    }
}

}  // namespace

TEST_CASE("char_poly builds X^n - sum s_i X^(n-i)") {
    const Polynomial fib = char_poly(testsup::fibonacci_spec());
    REQUIRE(fib.coefficients == std::vector<Complex>{{-1.0, 0.0}, {-1.0, 0.0}, {1.0, 0.0}});

    const Polynomial square = char_poly(testsup::arithmetic_spec());
    REQUIRE(square.coefficients == std::vector<Complex>{{1.0, 0.0}, {-2.0, 0.0}, {1.0, 0.0}});

    const Polynomial linear = char_poly(validate_spec({1, {Complex(0.0, 2.0)}, {1.0}}));
    REQUIRE(linear.coefficients == std::vector<Complex>{{0.0, -2.0}, {1.0, 0.0}});
}

TEST_CASE("find_roots solves the golden quadratic") {
    const RootSpectrum s = find_roots(char_poly(testsup::fibonacci_spec()));
    REQUIRE(s.roots.size() == 2);
    testsup::check_close(s.roots[0].root, Complex(kPsi, 0.0), 1e-10);
    testsup::check_close(s.roots[1].root, Complex(kPhi, 0.0), 1e-10);
    REQUIRE(s.all_simple());
}

TEST_CASE("find_roots clusters the perfect square (X-1)^2") {
    const RootSpectrum s = find_roots(char_poly(testsup::arithmetic_spec()));
    REQUIRE(s.roots.size() == 1);
    REQUIRE(s.roots[0].multiplicity == 2);
    testsup::check_close(s.roots[0].root, Complex(1.0, 0.0), 1e-7);
}

TEST_CASE("find_roots finds the cube roots of unity") {
    Polynomial p;
    p.coefficients = {-1.0, 0.0, 0.0, 1.0};  // X^3 - 1
    const RootSpectrum s = find_roots(p);
    REQUIRE(s.roots.size() == 3);
    for (const auto& entry : s.roots) {
        REQUIRE(entry.multiplicity == 1);
        testsup::check_close(entry.root * entry.root * entry.root, Complex(1.0, 0.0), 1e-8);
    }
}

TEST_CASE("find_roots rejects a zero constant term and reports non-convergence") {
    Polynomial zero_root;
    zero_root.coefficients = {0.0, 1.0, 1.0};
    try {
        find_roots(zero_root);
        FAIL("expected ZeroRoot");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::ZeroRoot);
    }

    Polynomial wilkinsonish;
    wilkinsonish.coefficients = {40320.0, -109584.0, 118124.0, -67284.0, 22449.0,
                                 -4536.0, 546.0,     -36.0,    1.0};  // roots 1..8
    try {
        find_roots(wilkinsonish, {}, 1);
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NoConvergence);
    }
    REQUIRE_NOTHROW(find_roots(wilkinsonish));
}

TEST_CASE("residuals at simple recovered roots stay small") {
    const Polynomial p = char_poly(testsup::fibonacci_spec());
    const RootSpectrum s = find_roots(p);
    for (const auto& entry : s.roots) {
        const double scale = poly_scale_at(p.coefficients, std::abs(entry.root));
        REQUIRE(std::abs(poly_eval(p.coefficients, entry.root)) <= 1e-8 * scale);
    }
}

TEST_CASE("coeffs_from_spectrum expands golden, squared and single-root spectra") {
    const auto golden = coeffs_from_spectrum(testsup::golden_spectrum());
    REQUIRE(golden.size() == 2);
    testsup::check_close(golden[0], Complex(1.0, 0.0), 1e-12);
    testsup::check_close(golden[1], Complex(1.0, 0.0), 1e-12);

    const auto squared = coeffs_from_spectrum({{{Complex(1.0, 0.0), 2}}});
    REQUIRE(squared == std::vector<Complex>{{2.0, 0.0}, {-1.0, 0.0}});

    const auto single = coeffs_from_spectrum({{{Complex(2.0, 0.0), 1}}});
    REQUIRE(single == std::vector<Complex>{{2.0, 0.0}});
}

TEST_CASE("round trip coefficients -> roots -> coefficients") {
    std::mt19937 rng(20240801);
    int done = 0;
    for (int trial = 0; trial < 120 && done < 60; ++trial) {
        const RootSpectrum original = testsup::random_spectrum(rng);
        if (original.order() < 1) continue;
        const std::vector<Complex> coeffs = coeffs_from_spectrum(original);
        RecurrenceSpec spec;
        spec.order = original.order();
        spec.coefficients = coeffs;
        spec.initial.assign(static_cast<std::size_t>(spec.order), Complex(1.0, 0.0));
        const RootSpectrum recovered = find_roots(char_poly(spec));
        const std::vector<Complex> back = coeffs_from_spectrum(recovered);
        double scale = 1.0;
        for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            INFO("coefficient " << k << " of order " << spec.order);
            REQUIRE(std::abs(back[k] - coeffs[k]) <= 1e-6 * scale);
        }
        ++done;
    }
    REQUIRE(done == 60);
}

TEST_CASE("round trip roots -> coefficients -> roots preserves multiplicities") {
    std::mt19937 rng(20240802);
    int done = 0;
    for (int trial = 0; trial < 120 && done < 60; ++trial) {
        const RootSpectrum original = testsup::random_spectrum(rng);
        if (original.order() < 1) continue;
        RecurrenceSpec spec;
        spec.order = original.order();
        spec.coefficients = coeffs_from_spectrum(original);
        spec.initial.assign(static_cast<std::size_t>(spec.order), Complex(1.0, 0.0));
        const RootSpectrum recovered = find_roots(char_poly(spec));
        require_spectra_match(original, recovered, 1e-6);
        ++done;
    }
    REQUIRE(done == 60);
}

TEST_CASE("every recovered root satisfies the characteristic equation") {
    std::mt19937 rng(20240803);
    for (int trial = 0; trial < 40; ++trial) {
        const RecurrenceSpec spec = testsup::random_integer_spec(rng);
        RootSpectrum spectrum;
        try {
            spectrum = find_roots(char_poly(spec));
        } catch (const Error&) {
            continue;
        }
        for (const auto& entry : spectrum.roots) {
            if (entry.multiplicity > 1) continue;  // centroid accuracy is looser there
            Complex lhs = 1.0;
            for (int k = 0; k < spec.order; ++k) lhs *= entry.root;
            Complex rhs = 0.0;
            Complex power = 1.0;
            for (int i = spec.order; i >= 1; --i) {
                rhs += spec.coefficients[static_cast<std::size_t>(i - 1)] * power;
                power *= entry.root;
            }
            testsup::check_rel(lhs, rhs, 1e-6);
        }
    }
}

TEST_CASE("reciprocal identity: X^n chi(1/X) equals prod (1 - alpha_i X)^(n_i)") {
    std::mt19937 rng(20240804);
    for (int trial = 0; trial < 20; ++trial) {
        const RootSpectrum spectrum = testsup::random_spectrum(rng);
        if (spectrum.order() < 1) continue;
        RecurrenceSpec spec;
        spec.order = spectrum.order();
        spec.coefficients = coeffs_from_spectrum(spectrum);
        spec.initial.assign(static_cast<std::size_t>(spec.order), Complex(0.0, 0.0));
        const Polynomial chi = char_poly(spec);

        std::vector<Complex> reversed(chi.coefficients.rbegin(), chi.coefficients.rend());
        std::vector<Complex> product{1.0};
        for (const auto& entry : spectrum.roots) {
            const std::vector<Complex> factor{1.0, -entry.root};
            for (int k = 0; k < entry.multiplicity; ++k) product = poly_mul(product, factor);
        }
        REQUIRE(product.size() == reversed.size());
        for (std::size_t k = 0; k < product.size(); ++k)
            testsup::check_close(product[k], reversed[k], 1e-8 * std::max(1.0, std::abs(reversed[k])));
    }
}
