#pragma once

// Input and output surfaces shared by the CLI and its tests: the JSON spec
// document (either coefficients+initial or roots+multiplicities+initial),
// scalar parsing ("re+imi" strings, sample and term lists) and deterministic
// rendering of values, closed forms, generating functions and spectra.

#include <nlohmann/json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfinite/charpoly.hpp"
#include "cfinite/fasteval.hpp"
#include "cfinite/model.hpp"
#include "cfinite/solver.hpp"

namespace cfinite {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// scalar formatting

inline std::string format_real(double x, int significant = 12) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", significant, x);
    std::string s = buffer;
    if (s == "-0") s = "0";
    return s;
}

// "a", "a+bi" or "a-bi"; the imaginary part is dropped when negligible
// against the real one.
inline std::string format_complex(Complex z, int significant = 12) {
    const double re = z.real();
    const double im = z.imag();
    if (std::abs(im) <= 1e-9 * std::max(1.0, std::abs(re))) return format_real(re, significant);
    std::string s = format_real(re, significant);
    s += (im < 0) ? "-" : "+";
    s += format_real(std::abs(im), significant);
    s += "i";
    return s;
}

inline bool is_integral_value(double x) {
    return std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.007199254740992e15;
}

inline Json real_to_json(double x) {
    if (is_integral_value(x)) return Json(static_cast<std::int64_t>(x));
    return Json(x);
}

// bare number for reals, [re, im] otherwise
inline Json complex_to_json(Complex z) {
    if (z.imag() == 0.0) return real_to_json(z.real());
    return Json::array({real_to_json(z.real()), real_to_json(z.imag())});
}

// ---------------------------------------------------------------------------
// scalar parsing

inline double parse_real(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || end != begin + text.size())
        fail(ErrorCode::ParseError, "not a number: '" + text + "'");
    return value;
}

// Accepts "a", "bi", "a+bi", "a-bi" (also a lone "i" or "-i").
inline Complex parse_complex(std::string text) {
    std::erase_if(text, [](unsigned char ch) { return std::isspace(ch); });
    if (text.empty()) fail(ErrorCode::ParseError, "empty number");
    if (text.back() == 'i' || text.back() == 'I') {
        text.pop_back();
        // split the imaginary tail from an optional real head
        std::size_t split = std::string::npos;
        for (std::size_t k = text.size(); k-- > 1;) {
            if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        std::string head = split == std::string::npos ? "" : text.substr(0, split);
        std::string tail = split == std::string::npos ? text : text.substr(split);
        if (tail.empty() || tail == "+") tail = "1";
        if (tail == "-") tail = "-1";
        const double im = parse_real(tail);
        const double re = head.empty() ? 0.0 : parse_real(head);
        return {re, im};
    }
    return {parse_real(text), 0.0};
}

inline Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    fail(ErrorCode::ParseError, "expected a number or an [re, im] pair, got " + j.dump());
}

// "k0=v0,k1=v1,..." with complex values written as "re+imi"
inline SampleSet parse_samples(const std::string& text) {
    std::vector<std::pair<std::uint64_t, Complex>> pairs;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::ParseError, "sample entry '" + item + "' is not index=value");
        const std::string index_text = item.substr(0, eq);
        errno = 0;
        char* end = nullptr;
        const unsigned long long index = std::strtoull(index_text.c_str(), &end, 10);
        if (end == index_text.c_str() || *end != '\0' || errno != 0 ||
            index_text.find('-') != std::string::npos)
            fail(ErrorCode::ParseError, "sample index '" + index_text + "' is not a nonnegative integer");
        pairs.emplace_back(index, parse_complex(item.substr(eq + 1)));
    }
    if (pairs.empty()) fail(ErrorCode::ParseError, "no samples given");
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SampleSet samples;
    for (const auto& [index, value] : pairs) {
        if (!samples.indices.empty() && samples.indices.back() == index)
            fail(ErrorCode::ParseError, "duplicate sample index " + std::to_string(index));
        samples.indices.push_back(index);
        samples.values.push_back(value);
    }
    return samples;
}

inline std::vector<Complex> parse_terms(const std::string& text) {
    std::vector<Complex> terms;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) terms.push_back(parse_complex(item));
    if (terms.empty()) fail(ErrorCode::ParseError, "no terms given");
    return terms;
}

inline std::optional<std::vector<BigInt>> try_parse_integer_terms(const std::string& text) {
    std::vector<BigInt> terms;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        std::erase_if(item, [](unsigned char ch) { return std::isspace(ch); });
        if (item.empty()) return std::nullopt;
        std::size_t k = (item[0] == '+' || item[0] == '-') ? 1 : 0;
        if (k == item.size()) return std::nullopt;
        for (; k < item.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(item[k]))) return std::nullopt;
        terms.emplace_back(item);
    }
    if (terms.empty()) return std::nullopt;
    return terms;
}

// ---------------------------------------------------------------------------
// spec documents

// A parsed spec file.  Exactly one of the two defining forms is present;
// either way the other can be derived (roots via the root finder,
// coefficients by expanding the spectrum).
struct SpecDocument {
    std::optional<std::vector<Complex>> coefficients;
    std::optional<RootSpectrum> roots;
    std::vector<Complex> initial;
    Tolerances tolerances;
    std::optional<Recurrence<BigInt>> exact;  // set when every input is an integer

    int order() const {
        return coefficients ? static_cast<int>(coefficients->size()) : roots->order();
    }

    RecurrenceSpec spec() const {
        RecurrenceSpec s;
        s.order = order();
        s.coefficients = coefficients ? *coefficients : coeffs_from_spectrum(*roots);
        s.initial = initial;
        return validate_spec(std::move(s), tolerances);
    }

    RootSpectrum spectrum() const {
        if (roots) return *roots;
        return find_roots(char_poly(spec()), tolerances);
    }
};

inline SpecDocument parse_spec_document(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("spec file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorCode::ParseError, "spec file must be a JSON object");

    SpecDocument doc;
    const bool has_coefficients = j.contains("coefficients");
    const bool has_roots = j.contains("roots");
    if (has_coefficients == has_roots)
        fail(ErrorCode::ParseError, "spec must contain exactly one of 'coefficients' or 'roots'");

    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        if (!t.is_object()) fail(ErrorCode::ParseError, "'tolerances' must be an object");
        if (t.contains("zero")) doc.tolerances.zero = t["zero"].get<double>();
        if (t.contains("cluster")) doc.tolerances.cluster = t["cluster"].get<double>();
        if (t.contains("cond_max")) doc.tolerances.cond_max = t["cond_max"].get<double>();
    }

    if (!j.contains("initial") || !j["initial"].is_array())
        fail(ErrorCode::ParseError, "spec must contain an 'initial' array");
    bool integral = true;
    for (const Json& v : j["initial"]) {
        doc.initial.push_back(complex_from_json(v));
        integral = integral && v.is_number_integer();
    }

    if (has_coefficients) {
        if (!j["coefficients"].is_array())
            fail(ErrorCode::ParseError, "'coefficients' must be an array");
        std::vector<Complex> coeffs;
        for (const Json& v : j["coefficients"]) {
            coeffs.push_back(complex_from_json(v));
            integral = integral && v.is_number_integer();
        }
        doc.coefficients = std::move(coeffs);
        if (integral) {
            Recurrence<BigInt> exact;
            for (const Json& v : j["coefficients"]) exact.coefficients.emplace_back(v.get<std::int64_t>());
            for (const Json& v : j["initial"]) exact.initial.emplace_back(v.get<std::int64_t>());
            doc.exact = std::move(exact);
        }
    } else {
        if (!j["roots"].is_array()) fail(ErrorCode::ParseError, "'roots' must be an array");
        RootSpectrum spectrum;
        for (const Json& v : j["roots"]) spectrum.roots.push_back({complex_from_json(v), 1});
        if (j.contains("multiplicities")) {
            const Json& mults = j["multiplicities"];
            if (!mults.is_array() || mults.size() != spectrum.roots.size())
                fail(ErrorCode::ParseError, "'multiplicities' must match 'roots' in length");
            for (std::size_t k = 0; k < spectrum.roots.size(); ++k)
                spectrum.roots[k].multiplicity = mults[k].get<int>();
        }
        const int declared_order = spectrum.order();
        doc.roots = validate_spectrum(std::move(spectrum), declared_order, doc.tolerances);
    }

    if (j.contains("order")) {
        const int declared = j["order"].get<int>();
        if (declared != doc.order())
            fail(ErrorCode::ParseError, "declared order " + std::to_string(declared) +
                                            " does not match the given data");
    }
    if (static_cast<int>(doc.initial.size()) != doc.order())
        fail(ErrorCode::ParseError, "need exactly " + std::to_string(doc.order()) +
                                        " initial values, got " + std::to_string(doc.initial.size()));
    return doc;
}

inline SpecDocument load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open spec file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_spec_document(buffer.str());
}

// ---------------------------------------------------------------------------
// rendering

// "c0 + c1*h + c2*h^2" style polynomial in the given variable
inline std::string poly_text(std::span<const Complex> coefficients, const std::string& variable,
                             int significant = 12, bool latex = false) {
    std::string out;
    bool first = true;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const Complex c = coefficients[k];
        if (c == Complex(0.0, 0.0) && coefficients.size() > 1) continue;
        std::string piece = format_complex(c, significant);
        const bool compound = piece.find_first_of("+-", 1) != std::string::npos;
        if (k > 0) {
            if (piece == "1") piece.clear();
            else if (piece == "-1") piece = "-";
            else if (compound) piece = "(" + piece + ")" + (latex ? " " : "*");
            else piece += latex ? " " : "*";
            piece += variable;
            if (k > 1) piece += latex ? "^{" + std::to_string(k) + "}" : "^" + std::to_string(k);
        }
        if (!first) {
            if (!piece.empty() && piece[0] == '-') piece = " - " + piece.substr(1);
            else piece = " + " + piece;
        }
        out += piece;
        first = false;
    }
    if (out.empty()) out = "0";
    return out;
}

inline std::string closed_form_text(const ClosedForm& form, double zero_tol, int significant = 12) {
    const ClosedForm t = trimmed(form, zero_tol);
    std::string out = "u(h) = ";
    for (std::size_t i = 0; i < t.terms.size(); ++i) {
        if (i > 0) out += " + ";
        out += "(" + poly_text(t.terms[i].coefficients, "h", significant) + ")";
        out += "*(" + format_complex(t.terms[i].root, significant) + ")^h";
    }
    return out;
}

inline std::string closed_form_latex(const ClosedForm& form, double zero_tol) {
    const ClosedForm t = trimmed(form, zero_tol);
    std::string out = "u_h = ";
    for (std::size_t i = 0; i < t.terms.size(); ++i) {
        if (i > 0) out += " + ";
        std::string poly;
        bool first = true;
        for (std::size_t k = 0; k < t.terms[i].coefficients.size(); ++k) {
            const Complex c = t.terms[i].coefficients[k];
            if (c == Complex(0.0, 0.0) && t.terms[i].coefficients.size() > 1) continue;
            std::string piece = format_complex(c, 10);
            if (piece.find_first_of("+-", 1) != std::string::npos) piece = "(" + piece + ")";
            if (k >= 1) piece += " h";
            if (k > 1) piece += "^{" + std::to_string(k) + "}";
            if (!first) poly += " + ";
            poly += piece;
            first = false;
        }
        if (poly.empty()) poly = "0";
        out += "\\left(" + poly + "\\right) \\cdot \\left(" +
               format_complex(t.terms[i].root, 10) + "\\right)^{h}";
    }
    return out;
}

inline Json closed_form_json(const ClosedForm& form) {
    Json terms = Json::array();
    for (const auto& term : form.terms) {
        Json t;
        t["root"] = complex_to_json(term.root);
        Json coeffs = Json::array();
        for (const Complex& c : term.coefficients) coeffs.push_back(complex_to_json(c));
        t["coefficients"] = std::move(coeffs);
        terms.push_back(std::move(t));
    }
    Json out;
    out["terms"] = std::move(terms);
    return out;
}

inline std::string gf_text(const RationalGF& gf, int significant = 12) {
    return "(" + poly_text(gf.numerator, "x", significant) + ") / (" +
           poly_text(gf.denominator, "x", significant) + ")";
}

inline std::string gf_latex(const RationalGF& gf) {
    return "\\frac{" + poly_text(gf.numerator, "x", 10, true) + "}{" +
           poly_text(gf.denominator, "x", 10, true) + "}";
}

inline Json gf_json(const RationalGF& gf) {
    Json out;
    Json num = Json::array();
    for (const Complex& c : gf.numerator) num.push_back(complex_to_json(c));
    Json den = Json::array();
    for (const Complex& c : gf.denominator) den.push_back(complex_to_json(c));
    out["numerator"] = std::move(num);
    out["denominator"] = std::move(den);
    return out;
}

inline std::string spectrum_text(const RootSpectrum& spectrum, int significant = 12) {
    std::string out;
    for (const auto& entry : spectrum.roots) {
        out += format_complex(entry.root, significant);
        out += " multiplicity " + std::to_string(entry.multiplicity) + "\n";
    }
    return out;
}

// Emits a document fragment that, extended with the matching initial values,
// parses back as a roots-form spec document.
inline Json spectrum_json(const RootSpectrum& spectrum) {
    Json roots = Json::array();
    Json mults = Json::array();
    for (const auto& entry : spectrum.roots) {
        roots.push_back(complex_to_json(entry.root));
        mults.push_back(entry.multiplicity);
    }
    Json out;
    out["roots"] = std::move(roots);
    out["multiplicities"] = std::move(mults);
    return out;
}

}  // namespace cfinite
