#pragma once

// The Fuss-Catalan kernel: T_p solving z T^p - T + 1 = 0 with T(0) = 1, and the
// functions built on it,
//
//   F_p = 1 / (1 - p z T^{p-1}) = sum binom(pn, n) z^n,
//   S_p = log F_p,
//   E_p = F_p T^{p-1}.
//
// All of them are analytic on the cut plane C - [R_p, +inf) with
// R_p = (p-1)^{p-1} / p^p. Evaluation off the convergence disk follows the
// branch T(0) = 1 by predictor-corrector continuation along the ray from the
// origin, which never meets the cut.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "lve/combinatorics.hpp"
#include "lve/errors.hpp"

namespace lve {

using cplx = std::complex<double>;

/// Order p and coupling lambda of the model, plus the sector half-angle used
/// when fitting derivative bounds.
struct ModelSpec {
    int p = 2;
    cplx lambda = 0.0;
    double epsilon = 0.1;
};

/// Throws unless p >= 2, epsilon > 0 and lambda lies in |arg lambda| < pi - epsilon.
inline void validate(const ModelSpec& spec)
{
    detail::require_order(spec.p);
    if (!(spec.epsilon > 0.0)) throw contract_error("sector half-angle epsilon must be positive");
    if (spec.lambda != 0.0 && !(std::abs(std::arg(spec.lambda)) < std::numbers::pi - spec.epsilon))
        throw domain_error("coupling lies outside the pacman domain |arg lambda| < pi - epsilon");
}

/// R_p = (p-1)^{p-1} / p^p, the convergence radius of T_p, F_p and S_p.
inline double radius(int p)
{
    detail::require_order(p);
    auto exact = [](int q) {
        const BigRational r(boost::multiprecision::pow(BigInt(q - 1), static_cast<unsigned>(q - 1)),
                            boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(q)));
        return r.convert_to<double>();
    };
    static const std::array<double, 17> table = [&] {
        std::array<double, 17> t{};
        for (int q = 2; q < 17; ++q) t[static_cast<std::size_t>(q)] = exact(q);
        return t;
    }();
    return p < 17 ? table[static_cast<std::size_t>(p)] : exact(p);
}

enum class Region { inside_disk, cut_plane, on_cut };

struct CutPlanePoint {
    cplx z;
    Region region;
};

inline bool on_cut(int p, cplx z)
{
    return z.imag() == 0.0 && z.real() >= radius(p) - 1e-12;
}

inline CutPlanePoint classify(int p, cplx z)
{
    if (on_cut(p, z)) return {z, Region::on_cut};
    return {z, std::abs(z) < radius(p) ? Region::inside_disk : Region::cut_plane};
}

/// Euclidean distance from z to the half-line [R_p, +inf).
inline double distance_to_cut(int p, cplx z)
{
    const double r = radius(p);
    if (z.real() >= r) return std::abs(z.imag());
    return std::abs(z - r);
}

namespace detail {

inline cplx ipow(cplx x, int k)
{
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

/// log(1 + w) without cancellation for small |w|.
inline cplx log1p(cplx w)
{
    if (std::abs(w) < 1e-3) {
        cplx term = w, sum = 0.0;
        for (int k = 1; k <= 8; ++k) {
            sum += term / static_cast<double>(k);
            term *= -w;
        }
        return sum;
    }
    return std::log(1.0 + w);
}

inline void require_off_cut(int p, cplx z)
{
    if (on_cut(p, z))
        throw domain_error("argument z = " + std::to_string(z.real()) + "+" + std::to_string(z.imag()) +
                           "i lies on the cut [R_p, +inf)");
}

/// Scaled series sum for |z| well inside the disk, truncated once terms drop below 1e-17.
inline cplx t_series_auto(int p, cplx z)
{
    const double r = radius(p);
    const auto& c = scaled_fuss_catalan(p, 256);
    const cplx x = z / r;
    cplx power = 1.0, sum = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        const cplx term = c[n] * power;
        sum += term;
        if (n > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
        power *= x;
    }
    return sum;
}

struct NewtonResult {
    cplx t;
    bool converged;
};

inline NewtonResult newton(int p, cplx z, cplx t)
{
    for (int it = 0; it < 50; ++it) {
        const cplx tp1 = ipow(t, p - 1);
        const cplx g = z * tp1 * t - t + 1.0;
        const cplx dg = static_cast<double>(p) * z * tp1 - 1.0;
        const cplx step = g / dg;
        t -= step;
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) return {t, false};
        if (std::abs(step) <= 1e-14 * std::abs(t)) {
            // one polishing step past the tolerance
            const cplx q = ipow(t, p - 1);
            const cplx dgq = static_cast<double>(p) * z * q - 1.0;
            if (std::abs(dgq) > 0.0) t -= (z * q * t - t + 1.0) / dgq;
            return {t, true};
        }
    }
    return {t, false};
}

} // namespace detail

struct SeriesValue {
    cplx value;
    bool slow_convergence; // |z| >= 0.9 R_p
};

/// Partial sum sum_{n < n_terms} C_n^(p) z^n.
inline SeriesValue t_series(int p, cplx z, int n_terms)
{
    detail::require_order(p);
    if (n_terms < 0) throw contract_error("n_terms must be non-negative");
    const double r = radius(p);
    const auto& c = scaled_fuss_catalan(p, n_terms);
    const cplx x = z / r;
    cplx power = 1.0, sum = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        sum += c[static_cast<std::size_t>(n)] * power;
        power *= x;
    }
    return {sum, std::abs(z) >= 0.9 * r};
}

/// T, F, S, E at one point together with the residual |z T^p - T + 1|.
struct KernelEval {
    cplx t;
    cplx f;
    cplx s;
    cplx e;
    double residual = 0.0;
    bool degraded = false; // within 1e-6 of the branch point R_p
};

inline KernelEval make_eval(int p, cplx z, cplx t)
{
    KernelEval k;
    const cplx tp1 = detail::ipow(t, p - 1);
    const cplx w = static_cast<double>(p) * z * tp1; // 1 - 1/F
    k.t = t;
    k.f = 1.0 / (1.0 - w);
    k.s = -detail::log1p(-w);
    k.e = k.f * tp1;
    k.residual = std::abs(z * tp1 * t - t + 1.0);
    k.degraded = std::abs(z - radius(p)) < 1e-6;
    return k;
}

/// Analytic branch of T_p at z (T(0) = 1), plus F, S, E.
inline KernelEval t_solve(int p, cplx z)
{
    detail::require_order(p);
    detail::require_off_cut(p, z);
    const double r = radius(p);
    if (z == 0.0) return make_eval(p, z, 1.0);

    if (std::abs(z) <= 0.5 * r) {
        auto nr = detail::newton(p, z, detail::t_series_auto(p, z));
        if (!nr.converged) throw numerical_error("Newton polish failed inside the convergence disk");
        return make_eval(p, z, nr.t);
    }

    cplx c = 0.4 * r * (z / std::abs(z));
    cplx t = detail::t_series_auto(p, c);
    double shrink = 1.0;
    int steps = 0;
    while (c != z) {
        if (++steps > 100000) throw numerical_error("continuation exceeded the step budget");
        const double limit = shrink * std::min(0.5 * std::abs(c), 0.5 * std::abs(c - r));
        cplx next = z;
        if (std::abs(z - c) > limit) next = c + (z - c) * (limit / std::abs(z - c));

        const cplx tp1 = detail::ipow(t, p - 1);
        const cplx slope = tp1 * t / (1.0 - static_cast<double>(p) * c * tp1);
        const cplx predicted = t + slope * (next - c);
        const auto nr = detail::newton(p, next, predicted);
        if (!nr.converged || std::abs(nr.t - predicted) > 0.1 * std::abs(nr.t)) {
            shrink *= 0.5;
            if (shrink < 1e-12)
                throw numerical_error("continuation stalled at z = " + std::to_string(c.real()) + "+" +
                                      std::to_string(c.imag()) + "i");
            continue;
        }
        c = next;
        t = nr.t;
        shrink = std::min(1.0, 2.0 * shrink);
    }
    return make_eval(p, z, t);
}

inline cplx f_eval(int p, cplx z) { return t_solve(p, z).f; }
inline cplx s_eval(int p, cplx z) { return t_solve(p, z).s; }
inline cplx e_eval(int p, cplx z) { return t_solve(p, z).e; }

namespace detail {

/// Radical formula for T_4 with branches fixed by matching the series at
/// |z| = 0.05 R_4 and then continued radical by radical along the ray.
class QuarticRadicals {
public:
    static constexpr int count = 8;

    // r1 = z^{1/3}, s = sqrt(1 - 256 z / 27), c1 = (1 + s)^{1/3}, c2 = (1 - s)^{1/3},
    // q4 = (1 + 4v)^{1/4}, q2 = (1 + 4v)^{1/2}, o = (2 - q2)^{1/2}, d = (v z)^{1/4}
    static constexpr std::array<int, count> degree{3, 2, 3, 3, 4, 2, 2, 4};

    using Values = std::array<cplx, count>;

    template <class Pick>
    static cplx evaluate(cplx z, Pick&& pick, Values& chosen)
    {
        chosen[0] = pick(0, z);
        chosen[1] = pick(1, 1.0 - 256.0 * z / 27.0);
        chosen[2] = pick(2, 1.0 + chosen[1]);
        chosen[3] = pick(3, 1.0 - chosen[1]);
        const cplx v = chosen[0] / std::cbrt(2.0) * (chosen[2] + chosen[3]);
        chosen[4] = pick(4, 1.0 + 4.0 * v);
        chosen[5] = pick(5, 1.0 + 4.0 * v);
        chosen[6] = pick(6, 2.0 - chosen[5]);
        chosen[7] = pick(7, v * z);
        return (chosen[4] - chosen[6]) / (2.0 * chosen[7]);
    }

    static cplx root(cplx w, int k, int branch)
    {
        if (w == 0.0) return 0.0;
        const cplx principal = std::pow(w, 1.0 / k);
        return principal * std::polar(1.0, 2.0 * std::numbers::pi * branch / k);
    }
};

inline cplx t_closed_form_quartic(cplx z)
{
    using Q = QuarticRadicals;
    const double r = radius(4);
    const cplx start = 0.05 * r * (z / std::abs(z));
    const cplx reference = t_series_auto(4, start);

    Q::Values prev{};
    double best = std::numeric_limits<double>::infinity();
    std::array<int, Q::count> idx{};
    // enumerate all branch combinations at the start point
    const int total = 3 * 2 * 3 * 3 * 4 * 2 * 2 * 4;
    for (int code = 0; code < total; ++code) {
        int rem = code;
        for (int i = 0; i < Q::count; ++i) {
            idx[static_cast<std::size_t>(i)] = rem % Q::degree[static_cast<std::size_t>(i)];
            rem /= Q::degree[static_cast<std::size_t>(i)];
        }
        Q::Values vals{};
        const cplx t = Q::evaluate(
            start,
            [&](int i, cplx w) { return Q::root(w, Q::degree[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i)]); },
            vals);
        const double err = std::abs(t - reference);
        if (err < best) {
            best = err;
            prev = vals;
        }
    }
    if (!(best < 1e-10)) throw numerical_error("no branch of the quartic radical formula matches the series");

    cplx t = reference;
    double s = 0.0, h = 0.02;
    while (s < 1.0) {
        h = std::min(h, 1.0 - s);
        const cplx at = start + (z - start) * (s + h);
        bool ambiguous = false;
        Q::Values vals{};
        const cplx candidate = Q::evaluate(
            at,
            [&](int i, cplx w) {
                const int k = Q::degree[static_cast<std::size_t>(i)];
                double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
                cplx pickv = 0.0;
                for (int b = 0; b < k; ++b) {
                    const cplx c = Q::root(w, k, b);
                    const double d = std::abs(c - prev[static_cast<std::size_t>(i)]);
                    if (d < d1) {
                        d2 = d1;
                        d1 = d;
                        pickv = c;
                    } else if (d < d2) {
                        d2 = d;
                    }
                }
                if (d1 > 0.25 * d2) ambiguous = true;
                return pickv;
            },
            vals);
        if (ambiguous) {
            h *= 0.5;
            if (h < 1e-12) throw numerical_error("radical branch tracking stalled");
            continue;
        }
        s += h;
        prev = vals;
        t = candidate;
        h = std::min(0.05, 1.5 * h);
    }
    return t;
}

} // namespace detail

/// Radical formulas for T_p, p in {2, 3, 4}.
inline cplx t_closed_form(int p, cplx z)
{
    detail::require_order(p);
    if (p > 4) throw invalid_order_error("closed forms exist only for p in {2, 3, 4}");
    detail::require_off_cut(p, z);
    if (z == 0.0) return 1.0;
    switch (p) {
    case 2:
        // (1 - sqrt(1 - 4z)) / (2z), rationalized
        return 2.0 / (1.0 + std::sqrt(1.0 - 4.0 * z));
    case 3: {
        // Cardano with u = -27 z / 4; Delta_+ Delta_- = 1 and sqrt(-3z) = (2/3) sqrt(u)
        const cplx u = -27.0 * z / 4.0;
        const cplx dp = std::pow(std::sqrt(1.0 + u) + std::sqrt(u), 1.0 / 3.0);
        const cplx dm = 1.0 / dp;
        return 1.5 * (dp - dm) / std::sqrt(u);
    }
    default:
        return detail::t_closed_form_quartic(z);
    }
}

/// Cardano building blocks for p = 3 at u = -27 z / 4.
struct CardanoParts {
    cplx delta_plus;
    cplx delta_minus;
    cplx h; // 1 / sqrt(1 + u)
    cplx sqrt_u;
};

inline CardanoParts cardano_parts(cplx u)
{
    CardanoParts c;
    c.sqrt_u = std::sqrt(u);
    c.delta_plus = std::pow(std::sqrt(1.0 + u) + c.sqrt_u, 1.0 / 3.0);
    c.delta_minus = 1.0 / c.delta_plus;
    c.h = 1.0 / std::sqrt(1.0 + u);
    return c;
}

/// F_3 = h (Delta_+ + Delta_-) / 2.
inline cplx f3_closed_form(cplx z)
{
    const auto c = cardano_parts(-27.0 * z / 4.0);
    return c.h * (c.delta_plus + c.delta_minus) / 2.0;
}

} // namespace lve
