#include "test_support.hpp"

using namespace cfinite;
using testsup::kPhi;
using testsup::kPsi;

namespace {

SampleSet initial_samples(const RecurrenceSpec& spec) {
    SampleSet s;
    s.indices.resize(static_cast<std::size_t>(spec.order));
    std::iota(s.indices.begin(), s.indices.end(), 0);
    s.values = spec.initial;
    return s;
}

// independent power-series division: coefficients of P(x)/Q(x)
std::vector<Complex> series_coefficients(const RationalGF& gf, std::size_t count) {
    std::vector<Complex> c(count, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < count; ++k) {
        Complex acc = k < gf.numerator.size() ? gf.numerator[k] : Complex(0.0, 0.0);
        for (std::size_t i = 1; i < gf.denominator.size() && i <= k; ++i)
            acc -= gf.denominator[i] * c[k - i];
        c[k] = acc / gf.denominator[0];
    }
    return c;
}

}  // namespace

TEST_CASE("eval_iterative walks the recurrence forward") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    REQUIRE(eval_iterative(fib, 5) == Complex(8.0, 0.0));
    REQUIRE(eval_iterative(fib, 0) == Complex(1.0, 0.0));
    REQUIRE(eval_iterative(testsup::arithmetic_spec(), 4) == Complex(11.0, 0.0));
}

TEST_CASE("eval_iterative raises RangeOverflow past double range") {
    try {
        eval_iterative(testsup::geometric_spec(), 5000);
        FAIL("expected RangeOverflow");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::RangeOverflow);
    }
}

TEST_CASE("eval_determinant reproduces Fibonacci from the initial segment") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    const EvalReport report =
        eval_determinant(initial_samples(fib), testsup::golden_spectrum(), 2);
    testsup::check_rel(report.value, Complex(2.0, 0.0), 1e-10);
    testsup::check_close(report.denom_det, Complex(kPsi - kPhi, 0.0), 1e-12);
    REQUIRE(report.cond_estimate >= 1.0);
    REQUIRE(report.method == EvalMethod::determinant);
}

TEST_CASE("eval_determinant order 1 gives u0 * a^h") {
    const RootSpectrum single{{{Complex(2.0, 0.0), 1}}};
    SampleSet samples;
    samples.indices = {0};
    samples.values = {Complex(3.0, 0.0)};
    const EvalReport report = eval_determinant(samples, single, 7);
    testsup::check_rel(report.value, Complex(384.0, 0.0), 1e-12);
}

TEST_CASE("eval_determinant rejects the parity-singular index set") {
    const RootSpectrum parity{{{Complex(-1.0, 0.0), 1}, {Complex(1.0, 0.0), 1}}};
    SampleSet samples;
    samples.indices = {0, 2};
    samples.values = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
    try {
        eval_determinant(samples, parity, 5);
        FAIL("expected SingularBasis");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::SingularBasis);
    }
}

TEST_CASE("eval_determinant checks sample shape") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    SampleSet bad = initial_samples(fib);
    bad.values.pop_back();
    try {
        eval_determinant(bad, testsup::golden_spectrum(), 3);
        FAIL("expected LengthMismatch");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::LengthMismatch);
    }
}

TEST_CASE("eval_determinant raises RangeOverflow when basis values leave double range") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    try {
        eval_determinant(initial_samples(fib), testsup::golden_spectrum(), 2000);
        FAIL("expected RangeOverflow");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::RangeOverflow);
    }
}

TEST_CASE("the ratio also reproduces sample values for h inside I") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    for (std::uint64_t h = 0; h < 2; ++h) {
        const EvalReport report =
            eval_determinant(initial_samples(fib), testsup::golden_spectrum(), h);
        testsup::check_rel(report.value, fib.initial[static_cast<std::size_t>(h)], 1e-9);
    }

    std::mt19937 rng(20240809);
    int done = 0;
    for (int trial = 0; trial < 40 && done < 20; ++trial) {
        const RecurrenceSpec spec = testsup::random_integer_spec(rng);
        RootSpectrum spectrum;
        try {
            spectrum = find_roots(char_poly(spec));
        } catch (const Error&) {
            continue;
        }
        if (testsup::min_root_separation(spectrum) < 0.05) continue;
        bool used = false;
        for (std::uint64_t h = 0; h < static_cast<std::uint64_t>(spec.order); ++h) {
            EvalReport report;
            try {
                report = eval_determinant(initial_samples(spec), spectrum, h);
            } catch (const Error& e) {
                REQUIRE(e.code() == ErrorCode::SingularBasis);
                continue;
            }
            testsup::check_rel(report.value, spec.initial[static_cast<std::size_t>(h)], 1e-7);
            used = true;
        }
        if (used) ++done;
    }
    REQUIRE(done >= 20);
}

TEST_CASE("eval_corollary1 on Fibonacci and a geometric sequence") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    testsup::check_rel(eval_corollary1(fib.initial, testsup::golden_spectrum(), 10),
                       Complex(89.0, 0.0), 1e-9);
    // h inside {0..n-1}
    testsup::check_rel(eval_corollary1(fib.initial, testsup::golden_spectrum(), 1),
                       Complex(1.0, 0.0), 1e-9);

    const RootSpectrum single{{{Complex(2.0, 0.0), 1}}};
    const std::vector<Complex> u0{Complex(3.0, 0.0)};
    testsup::check_rel(eval_corollary1(u0, single, 7), Complex(384.0, 0.0), 1e-12);
}

TEST_CASE("eval_corollary1 requires simple roots") {
    const RootSpectrum squared{{{Complex(1.0, 0.0), 2}}};
    const std::vector<Complex> init{Complex(3.0, 0.0), Complex(5.0, 0.0)};
    try {
        eval_corollary1(init, squared, 4);
        FAIL("expected PreconditionViolated");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::PreconditionViolated);
    }
}

TEST_CASE("eval_corollary1 matches eval_determinant on simple-root instances") {
    std::mt19937 rng(20240810);
    int done = 0;
    for (int trial = 0; trial < 60 && done < 25; ++trial) {
        const RecurrenceSpec spec = testsup::random_integer_spec(rng);
        RootSpectrum spectrum;
        try {
            spectrum = find_roots(char_poly(spec));
        } catch (const Error&) {
            continue;
        }
        if (!spectrum.all_simple() || testsup::min_root_separation(spectrum) < 0.1) continue;
        for (std::uint64_t h = 0; h <= 20; ++h) {
            EvalReport report;
            try {
                report = eval_determinant(initial_samples(spec), spectrum, h);
            } catch (const Error& e) {
                REQUIRE(e.code() == ErrorCode::SingularBasis);
                continue;
            }
            const Complex direct = eval_corollary1(spec.initial, spectrum, h);
            testsup::check_rel(direct, report.value, 1e-9);
        }
        ++done;
    }
    REQUIRE(done >= 25);
}

TEST_CASE("reconstruct_from_samples recovers Fibonacci from scattered samples") {
    // f: 1,1,2,3,5,8,13,21 -> samples {3:3, 7:21}
    SampleSet samples;
    samples.indices = {3, 7};
    samples.values = {Complex(3.0, 0.0), Complex(21.0, 0.0)};
    const EvalReport report = reconstruct_from_samples(samples, testsup::golden_spectrum(), 10);
    testsup::check_rel(report.value, Complex(89.0, 0.0), 1e-9);
    REQUIRE(report.method == EvalMethod::samples);
}

TEST_CASE("reconstruct_from_samples reduces to the base case on I={0..n-1}") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    const EvalReport a = reconstruct_from_samples(initial_samples(fib), testsup::golden_spectrum(), 9);
    const EvalReport b = eval_determinant(initial_samples(fib), testsup::golden_spectrum(), 9);
    REQUIRE(a.value == b.value);
}

TEST_CASE("reconstruct_from_samples raises SingularBasis for the parity trap") {
    const RootSpectrum parity{{{Complex(-1.0, 0.0), 1}, {Complex(1.0, 0.0), 1}}};
    SampleSet samples;
    samples.indices = {0, 2};
    samples.values = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
    try {
        reconstruct_from_samples(samples, parity, 5);
        FAIL("expected SingularBasis");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::SingularBasis);
    }
}

TEST_CASE("sample-set independence for Fibonacci") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    const std::vector<std::vector<std::uint64_t>> index_sets{{1, 4}, {2, 5}, {0, 3}};
    for (const auto& indices : index_sets) {
        SampleSet samples;
        samples.indices = indices;
        for (const std::uint64_t k : indices) samples.values.push_back(eval_iterative(fib, k));
        for (std::uint64_t h = 0; h <= 40; ++h) {
            const Complex expected = eval_iterative(fib, h);
            const EvalReport report =
                reconstruct_from_samples(samples, testsup::golden_spectrum(), h);
            testsup::check_rel(report.value, expected, 1e-7);
        }
    }
}

TEST_CASE("closed_form of Fibonacci is the Binet form") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    const ClosedForm form = closed_form(fib, testsup::golden_spectrum());
    REQUIRE(form.terms.size() == 2);
    REQUIRE(form.terms[0].coefficients.size() == 1);
    testsup::check_close(form.terms[0].root, Complex(kPhi, 0.0), 1e-12);
    testsup::check_close(form.terms[0].coefficients[0], Complex(0.72360679774997896, 0.0), 1e-10);
    testsup::check_close(form.terms[1].coefficients[0], Complex(0.27639320225002104, 0.0), 1e-10);
    for (std::uint64_t h = 0; h <= 10; ++h)
        testsup::check_rel(form.evaluate(h), eval_iterative(fib, h), 1e-10);
}

TEST_CASE("closed_form of the double-root sequence is 3 + 2h") {
    const RecurrenceSpec spec = testsup::arithmetic_spec();
    const RootSpectrum spectrum = find_roots(char_poly(spec));
    const ClosedForm form = closed_form(spec, spectrum);
    REQUIRE(form.terms.size() == 1);
    REQUIRE(form.terms[0].coefficients.size() == 2);
    testsup::check_close(form.terms[0].coefficients[0], Complex(3.0, 0.0), 1e-7);
    testsup::check_close(form.terms[0].coefficients[1], Complex(2.0, 0.0), 1e-7);
}

TEST_CASE("closed_form of order 1 is the constant u0") {
    const RecurrenceSpec spec = testsup::geometric_spec();
    const RootSpectrum spectrum{{{Complex(2.0, 0.0), 1}}};
    const ClosedForm form = closed_form(spec, spectrum);
    REQUIRE(form.terms.size() == 1);
    REQUIRE(form.terms[0].coefficients == std::vector<Complex>{Complex(3.0, 0.0)});
}

TEST_CASE("closed_form agrees with the oracle over h <= 50") {
    std::mt19937 rng(20240812);
    int done = 0;
    for (int trial = 0; trial < 40 && done < 15; ++trial) {
        const RecurrenceSpec spec = testsup::random_integer_spec(rng, 1, 5);
        RootSpectrum spectrum;
        try {
            spectrum = find_roots(char_poly(spec));
        } catch (const Error&) {
            continue;
        }
        if (testsup::min_root_separation(spectrum) < 0.1) continue;
        ClosedForm form;
        try {
            form = closed_form(spec, spectrum);
        } catch (const Error& e) {
            REQUIRE(e.code() == ErrorCode::InconsistentSpectrum);
            continue;
        }
        const double max_mag = spectrum.max_magnitude();
        for (std::uint64_t h = 0; h <= 50; ++h) {
            const Complex expected = eval_iterative(spec, h);
            // skip indices where cancellation against the dominant-root growth
            // leaves double precision no correct digits in a small answer
            const double growth = std::pow(std::max(1.0, max_mag), static_cast<double>(h)) *
                                  static_cast<double>((h + 1) * (h + 1));
            if (1e-13 * growth > 1e-8 * std::max(1.0, std::abs(expected))) continue;
            testsup::check_rel(form.evaluate(h), expected, 1e-8);
        }
        ++done;
    }
    REQUIRE(done >= 15);
}

TEST_CASE("closed_form rejects a spectrum from a different recurrence") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    const RootSpectrum wrong{{{Complex(2.0, 0.0), 1}, {Complex(3.0, 0.0), 1}}};
    try {
        closed_form(fib, wrong);
        FAIL("expected InconsistentSpectrum");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::InconsistentSpectrum);
    }
}

TEST_CASE("trimmed drops negligible leading coefficients") {
    ClosedForm form;
    form.terms.push_back({Complex(1.0, 0.0), {Complex(3.0, 0.0), Complex(1e-15, 0.0)}});
    const ClosedForm t = trimmed(form);
    REQUIRE(t.terms[0].coefficients.size() == 1);
}

TEST_CASE("generating_function of Fibonacci is 1/(1-x-x^2)") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    const RationalGF gf = generating_function(fib, testsup::golden_spectrum());
    REQUIRE(gf.numerator == std::vector<Complex>{Complex(1.0, 0.0)});
    REQUIRE(gf.denominator ==
            std::vector<Complex>{Complex(1.0, 0.0), Complex(-1.0, 0.0), Complex(-1.0, 0.0)});
}

TEST_CASE("generating_function of the geometric sequence is 3/(1-2x)") {
    const RecurrenceSpec spec = testsup::geometric_spec();
    const RootSpectrum spectrum{{{Complex(2.0, 0.0), 1}}};
    const RationalGF gf = generating_function(spec, spectrum);
    REQUIRE(gf.numerator == std::vector<Complex>{Complex(3.0, 0.0)});
    REQUIRE(gf.denominator == std::vector<Complex>{Complex(1.0, 0.0), Complex(-2.0, 0.0)});
}

TEST_CASE("generating_function of the double-root sequence is (3-x)/(1-x)^2") {
    const RecurrenceSpec spec = testsup::arithmetic_spec();
    const RootSpectrum spectrum = find_roots(char_poly(spec));
    const RationalGF gf = generating_function(spec, spectrum);
    REQUIRE(gf.numerator.size() == 2);
    testsup::check_close(gf.numerator[0], Complex(3.0, 0.0), 1e-12);
    testsup::check_close(gf.numerator[1], Complex(-1.0, 0.0), 1e-12);
    REQUIRE(gf.denominator ==
            std::vector<Complex>{Complex(1.0, 0.0), Complex(-2.0, 0.0), Complex(1.0, 0.0)});
}

TEST_CASE("generating_function raises RouteMismatch for a drifted spectrum") {
    const RecurrenceSpec fib = testsup::fibonacci_spec();
    RootSpectrum drifted = testsup::golden_spectrum();
    drifted.roots[0].root += 1e-6;
    try {
        generating_function(fib, drifted);
        FAIL("expected RouteMismatch");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::RouteMismatch);
    }
}

TEST_CASE("the first 50 series coefficients match the oracle") {
    std::mt19937 rng(20240813);
    int done = 0;
    for (int trial = 0; trial < 40 && done < 15; ++trial) {
        const RecurrenceSpec spec = testsup::random_integer_spec(rng, 1, 5);
        RootSpectrum spectrum;
        RationalGF gf;
        try {
            spectrum = find_roots(char_poly(spec));
            gf = generating_function(spec, spectrum);
        } catch (const Error&) {
            continue;
        }
        const auto series = series_coefficients(gf, 50);
        for (std::uint64_t h = 0; h < 50; ++h)
            testsup::check_rel(series[static_cast<std::size_t>(h)], eval_iterative(spec, h), 1e-8);
        ++done;
    }
    REQUIRE(done >= 15);
}

TEST_CASE("determinant evaluation agrees with the oracle across random specs") {
    std::mt19937 rng(20240814);
    int done = 0;
    for (int trial = 0; trial < 150 && done < 60; ++trial) {
        const RecurrenceSpec spec = testsup::random_integer_spec(rng);
        RootSpectrum spectrum;
        try {
            spectrum = find_roots(char_poly(spec));
        } catch (const Error&) {
            continue;
        }
        if (testsup::min_root_separation(spectrum) < 0.05) continue;
        const SampleSet samples = initial_samples(spec);
        for (std::uint64_t h = 0; h <= 60; ++h) {
            const Complex expected = eval_iterative(spec, h);
            EvalReport report;
            try {
                report = eval_determinant(samples, spectrum, h);
            } catch (const Error& e) {
                REQUIRE(e.code() == ErrorCode::SingularBasis);
                continue;
            }
            // eps times this amplification bounds the achievable accuracy;
            // past ~1e7 a 1e-7 comparison is not meaningful in doubles
            if (report.cond_estimate > 1e7) continue;
            testsup::check_rel(report.value, expected, 1e-7);
        }
        ++done;
    }
    REQUIRE(done >= 60);
}
