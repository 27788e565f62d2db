#pragma once

// Command-line front end.  Subcommands: eval, closed-form, gf, reconstruct,
// infer, roots, bench.  Exit codes: 0 success, 2 invalid input, 3 numeric
// failure; diagnostics go to the error stream.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "cfinite/io.hpp"

namespace cfinite {

namespace detail_cli {

inline std::vector<std::uint64_t> parse_index_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        errno = 0;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(item.c_str(), &end, 10);
        if (end == item.c_str() || *end != '\0' || errno != 0)
            fail(ErrorCode::ParseError, "'" + item + "' is not a nonnegative integer");
        out.push_back(v);
    }
    if (out.empty()) fail(ErrorCode::ParseError, "empty index list");
    return out;
}

inline SampleSet initial_samples(const RecurrenceSpec& spec) {
    SampleSet samples;
    samples.indices.resize(static_cast<std::size_t>(spec.order));
    std::iota(samples.indices.begin(), samples.indices.end(), 0);
    samples.values = spec.initial;
    return samples;
}

inline Json value_json(const BigInt& value) {
    if (value >= std::numeric_limits<std::int64_t>::min() &&
        value <= std::numeric_limits<std::int64_t>::max())
        return Json(static_cast<std::int64_t>(value));
    return Json(value.str());
}

struct TimedRun {
    bool ok = false;
    Complex value;
    std::string rendered;
    std::string error;
    long long median_ns = 0;
};

template <class F>
TimedRun time_method(F&& run, int repetitions = 9) {
    TimedRun result;
    std::vector<long long> times;
    times.reserve(static_cast<std::size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        try {
            result.value = run();
        } catch (const Error& e) {
            result.error = error_code_name(e.code());
            return result;
        }
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    result.median_ns = times[times.size() / 2];
    result.rendered = format_complex(result.value);
    result.ok = true;
    return result;
}

}  // namespace detail_cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"cfinite: linear recurrences with constant coefficients -- evaluation, "
                 "closed forms, generating functions, reconstruction, benchmarks"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h; term indices are passed as --h

    const auto add_subcommand = [&app](const std::string& name, const std::string& description) {
        auto* sub = app.add_subcommand(name, description);
        sub->set_help_flag("--help", "print help");
        return sub;
    };

    std::string spec_path;
    std::string format = "text";
    std::string method = "iterative";
    std::string samples_text;
    std::string terms_text;
    std::string h_list_text;
    std::uint64_t h = 0;
    int max_order = 0;

    auto* eval_cmd = add_subcommand("eval", "evaluate u_H");
    eval_cmd->add_option("--spec", spec_path, "spec file (JSON)")->required();
    eval_cmd->add_option("--h", h, "term index H")->required();
    eval_cmd->add_option("--method", method,
                         "iterative|determinant|vandermonde|companion|kitamasa");
    eval_cmd->add_option("--format", format, "text|json");

    auto* closed_cmd = add_subcommand("closed-form", "print u_h = sum A_i(h) alpha_i^h");
    closed_cmd->add_option("--spec", spec_path, "spec file (JSON)")->required();
    closed_cmd->add_option("--format", format, "text|json|latex");

    auto* gf_cmd = add_subcommand("gf", "print the ordinary generating function P(x)/Q(x)");
    gf_cmd->add_option("--spec", spec_path, "spec file (JSON)")->required();
    gf_cmd->add_option("--format", format, "text|json|latex");

    auto* rec_cmd = add_subcommand("reconstruct", "evaluate u_H from arbitrary samples");
    rec_cmd->add_option("--spec", spec_path, "spec file (JSON)")->required();
    rec_cmd->add_option("--samples", samples_text, "k0=v0,k1=v1,...")->required();
    rec_cmd->add_option("--h", h, "term index H")->required();
    rec_cmd->add_option("--format", format, "text|json");

    auto* infer_cmd = add_subcommand("infer", "infer the minimal recurrence from terms");
    infer_cmd->add_option("--terms", terms_text, "t0,t1,...")->required();
    infer_cmd->add_option("--max-order", max_order, "largest order to try")->required();
    infer_cmd->add_option("--format", format, "text|json");

    auto* roots_cmd = add_subcommand("roots", "print the root spectrum");
    roots_cmd->add_option("--spec", spec_path, "spec file (JSON)")->required();
    roots_cmd->add_option("--format", format, "text|json");

    auto* bench_cmd = add_subcommand("bench", "time evaluation methods against each other");
    bench_cmd->add_option("--spec", spec_path, "spec file (JSON)")->required();
    bench_cmd->add_option("--h-list", h_list_text, "comma-separated term indices")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (*eval_cmd) {
            const SpecDocument doc = load_spec_file(spec_path);
            if (method != "iterative" && method != "determinant" && method != "vandermonde" &&
                method != "companion" && method != "kitamasa")
                fail(ErrorCode::ParseError, "unknown method '" + method + "'");

            if ((method == "companion" || method == "kitamasa") && doc.exact) {
                const BigInt value = method == "companion" ? eval_companion_power(*doc.exact, h)
                                                           : eval_kitamasa(*doc.exact, h);
                if (format == "json") {
                    Json j;
                    j["value"] = detail_cli::value_json(value);
                    out << j.dump() << "\n";
                } else {
                    out << value.str() << "\n";
                }
                return 0;
            }

            const RecurrenceSpec spec = doc.spec();
            Complex value;
            if (method == "iterative") {
                value = eval_iterative(spec, h);
            } else if (method == "companion") {
                value = eval_companion_power(spec, h);
            } else if (method == "kitamasa") {
                value = eval_kitamasa(spec, h);
            } else if (method == "vandermonde") {
                value = eval_corollary1(spec.initial, doc.spectrum(), h, doc.tolerances);
            } else {
                value = eval_determinant(detail_cli::initial_samples(spec), doc.spectrum(), h,
                                         doc.tolerances)
                            .value;
            }
            if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
                fail(ErrorCode::RangeOverflow,
                     "term exceeds double range; integer specs evaluate exactly via "
                     "--method companion or kitamasa");
            if (format == "json") {
                Json j;
                j["value"] = complex_to_json(value);
                out << j.dump() << "\n";
            } else {
                out << format_complex(value) << "\n";
            }
            return 0;
        }

        if (*closed_cmd) {
            const SpecDocument doc = load_spec_file(spec_path);
            const RecurrenceSpec spec = doc.spec();
            const ClosedForm form = closed_form(spec, doc.spectrum(), doc.tolerances);
            if (format == "json") out << closed_form_json(form).dump() << "\n";
            else if (format == "latex") out << closed_form_latex(form, doc.tolerances.zero) << "\n";
            else out << closed_form_text(form, doc.tolerances.zero) << "\n";
            return 0;
        }

        if (*gf_cmd) {
            const SpecDocument doc = load_spec_file(spec_path);
            const RecurrenceSpec spec = doc.spec();
            const RationalGF gf = generating_function(spec, doc.spectrum(), doc.tolerances);
            if (format == "json") out << gf_json(gf).dump() << "\n";
            else if (format == "latex") out << gf_latex(gf) << "\n";
            else out << gf_text(gf) << "\n";
            return 0;
        }

        if (*rec_cmd) {
            const SpecDocument doc = load_spec_file(spec_path);
            const SampleSet samples = parse_samples(samples_text);
            const EvalReport report =
                reconstruct_from_samples(samples, doc.spectrum(), h, doc.tolerances);
            if (format == "json") {
                Json j;
                j["value"] = complex_to_json(report.value);
                j["cond_estimate"] = report.cond_estimate;
                out << j.dump() << "\n";
            } else {
                out << format_complex(report.value) << "\n";
            }
            return 0;
        }

        if (*infer_cmd) {
            if (const auto integer_terms = try_parse_integer_terms(terms_text)) {
                std::vector<BigRational> terms(integer_terms->begin(), integer_terms->end());
                const Recurrence<BigRational> rec = infer_recurrence(terms, max_order);
                if (format == "json") {
                    Json j;
                    j["order"] = rec.order();
                    Json coeffs = Json::array();
                    for (const auto& c : rec.coefficients) {
                        if (boost::multiprecision::denominator(c) == 1)
                            coeffs.push_back(detail_cli::value_json(boost::multiprecision::numerator(c)));
                        else coeffs.push_back(c.str());
                    }
                    j["coefficients"] = std::move(coeffs);
                    Json init = Json::array();
                    for (const auto& u : rec.initial)
                        init.push_back(detail_cli::value_json(boost::multiprecision::numerator(u)));
                    j["initial"] = std::move(init);
                    out << j.dump() << "\n";
                } else {
                    out << "order: " << rec.order() << "\n";
                    out << "coefficients:";
                    for (const auto& c : rec.coefficients) out << " " << c.str();
                    out << "\n";
                    out << "initial:";
                    for (const auto& u : rec.initial) out << " " << u.str();
                    out << "\n";
                }
                return 0;
            }
            const RecurrenceSpec rec = infer_recurrence(parse_terms(terms_text), max_order);
            if (format == "json") {
                Json j;
                j["order"] = rec.order;
                Json coeffs = Json::array();
                for (const Complex& c : rec.coefficients) coeffs.push_back(complex_to_json(c));
                j["coefficients"] = std::move(coeffs);
                Json init = Json::array();
                for (const Complex& u : rec.initial) init.push_back(complex_to_json(u));
                j["initial"] = std::move(init);
                out << j.dump() << "\n";
            } else {
                out << "order: " << rec.order << "\n";
                out << "coefficients:";
                for (const Complex& c : rec.coefficients) out << " " << format_complex(c);
                out << "\n";
                out << "initial:";
                for (const Complex& u : rec.initial) out << " " << format_complex(u);
                out << "\n";
            }
            return 0;
        }

        if (*roots_cmd) {
            const SpecDocument doc = load_spec_file(spec_path);
            const RootSpectrum spectrum = doc.spectrum();
            if (format == "json") out << spectrum_json(spectrum).dump() << "\n";
            else out << spectrum_text(spectrum);
            return 0;
        }

        if (*bench_cmd) {
            const SpecDocument doc = load_spec_file(spec_path);
            const RecurrenceSpec spec = doc.spec();
            const RootSpectrum spectrum = doc.spectrum();
            const std::vector<std::uint64_t> h_values = detail_cli::parse_index_list(h_list_text);
            constexpr std::uint64_t iterative_limit = 10'000'000;

            for (const std::uint64_t hv : h_values) {
                out << "h = " << hv << "\n";
                out << "  method        median_ns  value\n";
                std::vector<std::pair<std::string, detail_cli::TimedRun>> runs;
                if (hv <= iterative_limit)
                    runs.emplace_back("iterative", detail_cli::time_method([&] {
                                          return eval_iterative(spec, hv);
                                      }));
                runs.emplace_back("determinant", detail_cli::time_method([&] {
                                      return eval_determinant(detail_cli::initial_samples(spec),
                                                              spectrum, hv, doc.tolerances)
                                          .value;
                                  }));
                if (spectrum.all_simple())
                    runs.emplace_back("vandermonde", detail_cli::time_method([&] {
                                          return eval_corollary1(spec.initial, spectrum, hv,
                                                                 doc.tolerances);
                                      }));
                runs.emplace_back("companion", detail_cli::time_method([&] {
                                      return eval_companion_power(spec, hv);
                                  }));
                runs.emplace_back("kitamasa", detail_cli::time_method([&] {
                                      return eval_kitamasa(spec, hv);
                                  }));

                double scale = 1.0;
                for (const auto& [name, run] : runs)
                    if (run.ok) scale = std::max(scale, std::abs(run.value));
                double disagreement = 0.0;
                for (std::size_t a = 0; a < runs.size(); ++a)
                    for (std::size_t b = a + 1; b < runs.size(); ++b)
                        if (runs[a].second.ok && runs[b].second.ok)
                            disagreement = std::max(
                                disagreement,
                                std::abs(runs[a].second.value - runs[b].second.value) / scale);

                for (const auto& [name, run] : runs) {
                    char line[160];
                    if (run.ok)
                        std::snprintf(line, sizeof line, "  %-12s %10lld  %s", name.c_str(),
                                      run.median_ns, run.rendered.c_str());
                    else
                        std::snprintf(line, sizeof line, "  %-12s %10s  error(%s)", name.c_str(),
                                      "-", run.error.c_str());
                    out << line << "\n";
                }
                out << "  max pairwise disagreement: " << format_real(disagreement, 3) << "\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_input_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace cfinite
