#pragma once

// Characteristic polynomial chi(X) = X^n - sum_i s_i X^{n-i} and the two
// conversions between recurrence coefficients and root spectra: a
// simultaneous Aberth-Ehrlich root finder with post-hoc multiplicity
// clustering, and the expansion of a spectrum back into coefficients.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "cfinite/model.hpp"

namespace cfinite {

// Coefficients ascending by degree; coefficients.back() is the leading one.
struct Polynomial {
    std::vector<Complex> coefficients;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

inline Complex poly_eval(std::span<const Complex> coeffs, Complex x) {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline std::vector<Complex> poly_derivative(std::span<const Complex> coeffs) {
    std::vector<Complex> d;
    for (std::size_t k = 1; k < coeffs.size(); ++k) d.push_back(static_cast<double>(k) * coeffs[k]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

inline std::vector<Complex> poly_mul(std::span<const Complex> a, std::span<const Complex> b) {
    std::vector<Complex> out(a.size() + b.size() - 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// sum_k |c_k| |x|^k, the scale against which residuals of poly_eval are judged
inline double poly_scale_at(std::span<const Complex> coeffs, double mag) {
    double scale = 0.0;
    double power = 1.0;
    for (const Complex& c : coeffs) {
        scale += std::abs(c) * power;
        power *= mag;
    }
    return scale;
}

// chi(X) = X^n - s_1 X^{n-1} - ... - s_n, monic of degree n.
inline Polynomial char_poly(const RecurrenceSpec& spec) {
    const int n = spec.order;
    Polynomial p;
    p.coefficients.resize(static_cast<std::size_t>(n) + 1);
    p.coefficients[static_cast<std::size_t>(n)] = 1.0;
    for (int i = 1; i <= n; ++i)
        p.coefficients[static_cast<std::size_t>(n - i)] = -spec.coefficients[static_cast<std::size_t>(i - 1)];
    return p;
}

// Expands prod_i (X - alpha_i)^{n_i} and reads off s_1..s_n.
inline std::vector<Complex> coeffs_from_spectrum(const RootSpectrum& spectrum) {
    std::vector<Complex> poly{1.0};
    for (const auto& r : spectrum.roots) {
        const std::vector<Complex> factor{-r.root, 1.0};
        for (int k = 0; k < r.multiplicity; ++k) poly = poly_mul(poly, factor);
    }
    const int n = static_cast<int>(poly.size()) - 1;
    std::vector<Complex> s(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) s[static_cast<std::size_t>(i - 1)] = -poly[static_cast<std::size_t>(n - i)];
    return s;
}

namespace detail {

struct DisjointSet {
    std::vector<int> parent;

    explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void link(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace detail

// Aberth-Ehrlich iteration from deterministic perturbed-circle starting
// points, Newton polish, then clustering of converged iterates into
// multiplicities.  Iterates are linked when they sit within the caller's
// cluster radius or within each other's Newton inclusion radii
// n*|p(z)/p'(z)|, which is what the stall radius of a multiple root looks
// like; the merged root is the cluster centroid.
inline RootSpectrum find_roots(const Polynomial& p, const Tolerances& tol = {},
                               int max_iterations = 200) {
    tol.check();
    const int n = p.degree();
    if (n < 1) fail(ErrorCode::PreconditionViolated, "find_roots needs degree >= 1");
    const Complex lead = p.coefficients.back();
    if (std::abs(lead) <= tol.zero)
        fail(ErrorCode::PreconditionViolated, "leading coefficient must be nonzero");
    if (std::abs(p.coefficients.front()) <= tol.zero)
        fail(ErrorCode::ZeroRoot, "constant term is zero, so 0 is a root");

    std::vector<Complex> c(p.coefficients.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = p.coefficients[k] / lead;
    const std::vector<Complex> dc = poly_derivative(c);

    // all roots have geometric mean magnitude |c_0|^(1/n) for monic input
    const double radius = std::pow(std::abs(c.front()), 1.0 / n);
    std::vector<Complex> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n + 0.43;
        const double stagger = 1.0 + 0.12 * std::fmod(0.618 * (k + 1), 1.0);
        z[static_cast<std::size_t>(k)] = std::polar(radius * stagger, angle);
    }

    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<bool> settled(static_cast<std::size_t>(n), false);
    bool all_settled = false;
    for (int iter = 0; iter < max_iterations && !all_settled; ++iter) {
        all_settled = true;
        for (int k = 0; k < n; ++k) {
            const Complex zk = z[static_cast<std::size_t>(k)];
            const Complex pv = poly_eval(c, zk);
            const double noise = 4.0 * n * eps * poly_scale_at(c, std::abs(zk));
            if (std::abs(pv) <= noise) {
                settled[static_cast<std::size_t>(k)] = true;
                continue;
            }
            const Complex dv = poly_eval(dc, zk);
            Complex newton = std::abs(dv) > 0.0 ? pv / dv : Complex(1.0, 0.5) * (1.0 + std::abs(zk));
            Complex repulsion = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                const Complex diff = zk - z[static_cast<std::size_t>(j)];
                if (std::abs(diff) > 0.0) repulsion += 1.0 / diff;
            }
            const Complex denom = 1.0 - newton * repulsion;
            const Complex step = std::abs(denom) > 0.0 ? newton / denom : newton;
            z[static_cast<std::size_t>(k)] = zk - step;
            settled[static_cast<std::size_t>(k)] = false;
            all_settled = false;
        }
    }
    if (!all_settled)
        fail(ErrorCode::NoConvergence,
             "root iteration did not converge in " + std::to_string(max_iterations) + " sweeps");

    // Newton polish (a no-op at multiple-root stall points).
    for (auto& zk : z) {
        for (int step = 0; step < 2; ++step) {
            const Complex pv = poly_eval(c, zk);
            const Complex dv = poly_eval(dc, zk);
            if (std::abs(dv) == 0.0) break;
            const Complex delta = pv / dv;
            if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) break;
            zk -= delta;
        }
    }

    double max_mag = 0.0;
    for (const auto& zk : z) max_mag = std::max(max_mag, std::abs(zk));
    // Newton inclusion radius per iterate, with |p| floored at the Horner
    // noise level (a residual below the noise floor carries no information)
    // and the whole radius capped so a vanishing derivative cannot chain
    // distant roots together.
    std::vector<double> inclusion(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        const Complex zk = z[static_cast<std::size_t>(k)];
        const Complex pv = poly_eval(c, zk);
        const Complex dv = poly_eval(dc, zk);
        const double noise = 4.0 * n * eps * poly_scale_at(c, std::abs(zk));
        const double radius = n * std::max(std::abs(pv), noise) /
                              std::max(std::abs(dv), std::numeric_limits<double>::min());
        inclusion[static_cast<std::size_t>(k)] = std::min(radius, 0.002 * (1.0 + std::abs(zk)));
    }

    const double floor_radius = tol.cluster * max_mag;
    detail::DisjointSet clusters(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double dist = std::abs(z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
            const double link =
                std::max(floor_radius, 2.0 * (inclusion[static_cast<std::size_t>(i)] +
                                              inclusion[static_cast<std::size_t>(j)]));
            if (dist <= link) clusters.link(i, j);
        }

    RootSpectrum spectrum;
    std::vector<double> spread;  // max member distance from each centroid
    std::vector<int> representative(static_cast<std::size_t>(n), -1);
    for (int k = 0; k < n; ++k) {
        const int root_id = clusters.find(k);
        int& slot = representative[static_cast<std::size_t>(root_id)];
        if (slot < 0) {
            slot = static_cast<int>(spectrum.roots.size());
            spectrum.roots.push_back({Complex(0.0, 0.0), 0});
            spread.push_back(0.0);
        }
        auto& entry = spectrum.roots[static_cast<std::size_t>(slot)];
        entry.root += z[static_cast<std::size_t>(k)];
        entry.multiplicity += 1;
    }
    for (auto& entry : spectrum.roots) entry.root /= static_cast<double>(entry.multiplicity);
    for (int k = 0; k < n; ++k) {
        const int slot = representative[static_cast<std::size_t>(clusters.find(k))];
        auto& extent = spread[static_cast<std::size_t>(slot)];
        extent = std::max(extent, std::abs(z[static_cast<std::size_t>(k)] -
                                           spectrum.roots[static_cast<std::size_t>(slot)].root));
    }

    // An m-fold cluster stalls at radius ~ (eps * scale)^(1/m), so the
    // centroid alone cannot reach coefficient-level accuracy for m >= 3.
    // chi^(m-1) has a simple root at the cluster, which Newton pins to
    // machine precision from the centroid.
    for (std::size_t slot = 0; slot < spectrum.roots.size(); ++slot) {
        auto& entry = spectrum.roots[slot];
        if (entry.multiplicity < 2) continue;
        std::vector<Complex> d = c;
        for (int t = 1; t < entry.multiplicity; ++t) d = poly_derivative(d);
        const std::vector<Complex> dd = poly_derivative(d);
        Complex refined = entry.root;
        for (int step = 0; step < 40; ++step) {
            const Complex pv = poly_eval(d, refined);
            const Complex dv = poly_eval(dd, refined);
            if (std::abs(dv) == 0.0) break;
            const Complex delta = pv / dv;
            if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) break;
            refined -= delta;
            if (std::abs(delta) <= 4 * eps * (1.0 + std::abs(refined))) break;
        }
        const double guard = std::max(64.0 * spread[slot], 1e-4 * (1.0 + std::abs(entry.root)));
        if (std::isfinite(refined.real()) && std::isfinite(refined.imag()) &&
            std::abs(refined - entry.root) <= guard)
            entry.root = refined;
    }

    // For real input: surviving simple roots either sit on the axis (snap the
    // rounding residue away) or come in conjugate pairs (symmetrize them).
    bool real_input = true;
    for (const Complex& ck : c)
        if (std::abs(ck.imag()) > tol.zero * std::max(1.0, std::abs(ck.real()))) real_input = false;
    if (real_input) {
        const double snap = 0.5 * floor_radius;
        for (auto& entry : spectrum.roots)
            if (std::abs(entry.root.imag()) <= std::max(snap, 16 * eps * (1.0 + std::abs(entry.root.real()))))
                entry.root = Complex(entry.root.real(), 0.0);
        for (std::size_t i = 0; i < spectrum.roots.size(); ++i) {
            auto& a = spectrum.roots[i];
            if (a.root.imag() <= 0.0) continue;
            for (std::size_t j = 0; j < spectrum.roots.size(); ++j) {
                auto& b = spectrum.roots[j];
                if (b.root.imag() >= 0.0 || b.multiplicity != a.multiplicity) continue;
                if (std::abs(std::conj(b.root) - a.root) > std::max(floor_radius, 1e-7)) continue;
                a.root = 0.5 * (a.root + std::conj(b.root));
                b.root = std::conj(a.root);
                break;
            }
        }
    }

    sort_canonical(spectrum);
    return validate_spectrum(std::move(spectrum), n, tol);
}

}  // namespace cfinite
