#pragma once

// Verification suites: every structural property of the kernel, the derivative
// engine, the exact combinatorics, the quadrature references and the loop
// vertex expansion, checked numerically. Each check reports its measured
// worst case so a failure says by how much it missed.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "lve/combinatorics.hpp"
#include "lve/derivatives.hpp"
#include "lve/kernel.hpp"
#include "lve/lve.hpp"
#include "lve/numdiff.hpp"
#include "lve/oracle.hpp"
#include "lve/record.hpp"

namespace lve::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Options {
    bool quick = false;
    /// Coefficient provider under test; replaced by fixtures to exercise the failure path.
    std::function<BigInt(int, int)> fuss_catalan = [](int p, int n) { return fuss_catalan_number(p, n); };
};

/// Options whose Fuss-Catalan provider is off by one at n = 3.
inline Options with_coefficient_fault(Options o)
{
    o.fuss_catalan = [](int p, int n) {
        BigInt c = fuss_catalan_number(p, n);
        return n == 3 ? BigInt(c + 1) : c;
    };
    return o;
}

namespace detail {

inline std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

inline CheckResult check_max(std::string name, double worst, double limit)
{
    return {std::move(name), worst < limit, "worst " + sci(worst) + " (limit " + sci(limit) + ")"};
}

/// Low-discrepancy points in the cut plane: |z| from 1e-2 R_p to 1e4, both half planes,
/// plus points hugging both sides of the cut.
inline std::vector<cplx> cut_plane_grid(int p, int count)
{
    const double r = radius(p);
    std::vector<cplx> g;
    const double phi1 = 0.6180339887498949, phi2 = 0.7548776662466927;
    const int near = count / 10;
    for (int k = 0; k < count - near; ++k) {
        const double u = std::fmod(0.5 + k * phi1, 1.0);
        const double v = std::fmod(0.5 + k * phi2, 1.0);
        const double mag = r * std::pow(10.0, -2.0 + u * (4.0 - std::log10(r) + 2.0));
        const double theta = (0.01 + 0.99 * v) * std::numbers::pi * (k % 2 ? -1.0 : 1.0);
        g.push_back(std::polar(mag, theta));
    }
    for (int k = 0; k < near; ++k) {
        const double x = r * (1.0 + 0.5 * k);
        g.push_back({x, (k % 2 ? -1.0 : 1.0) * 1e-3 * r});
    }
    return g;
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

} // namespace detail

// ---------------------------------------------------------------------------
// kernel and derivative engine
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> kernel_suite(const Options& o)
{
    std::vector<CheckResult> out;
    const int n_grid = o.quick ? 60 : 200;

    {
        double worst = 0.0;
        for (int p = 2; p <= 6; ++p)
            for (cplx z : detail::cut_plane_grid(p, n_grid)) worst = std::max(worst, t_solve(p, z).residual);
        out.push_back(detail::check_max("kernel.residual", worst, 1e-12));
    }
    {
        double worst = 0.0;
        for (int p = 2; p <= 6; ++p)
            for (cplx z : detail::cut_plane_grid(p, n_grid / 2)) {
                const auto a = t_solve(p, z), b = t_solve(p, std::conj(z));
                for (auto [x, y] : {std::pair{a.t, b.t}, {a.f, b.f}, {a.s, b.s}, {a.e, b.e}})
                    worst = std::max(worst, std::abs(std::conj(x) - y) / std::max(1.0, std::abs(x)));
            }
        out.push_back(detail::check_max("kernel.schwarz_reflection", worst, 1e-12));
    }
    {
        double worst = 0.0;
        for (int p = 2; p <= 6; ++p) {
            const double r = radius(p);
            for (int k = 0; k < 40; ++k) {
                const cplx z = std::polar(0.5 * r * (k + 1) / 40.0, 2.0 * std::numbers::pi * k * 0.618);
                worst = std::max(worst, std::abs(t_solve(p, z).t - t_series(p, z, 200).value));
            }
        }
        out.push_back(detail::check_max("kernel.series_agreement", worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (int p = 2; p <= 4; ++p)
            for (cplx z : detail::cut_plane_grid(p, o.quick ? 30 : 100))
                worst = std::max(worst, std::abs(t_solve(p, z).t - t_closed_form(p, z)));
        out.push_back(detail::check_max("kernel.closed_form_agreement", worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (int p = 2; p <= 6; ++p)
            for (cplx z : detail::cut_plane_grid(p, n_grid / 2)) {
                const auto k = t_solve(p, z);
                if (k.degraded) continue;
                const cplx dt = k.e * k.t;
                worst = std::max(worst, detail::rel(static_cast<double>(p - 1) * z * dt + k.t, k.f));
            }
        out.push_back(detail::check_max("kernel.f_consistency", worst, 1e-10));
    }
    {
        // |F| (1+|z|)^{1/p} and |E| (1+|z|) settle to constants along sector rays
        double worst = 0.0;
        bool finite = true;
        for (int p = 2; p <= 5; ++p)
            for (double theta : {0.3, 1.0, 2.0, std::numbers::pi}) {
                const cplx d = std::polar(1.0, theta);
                const auto a = t_solve(p, 1e5 * d), b = t_solve(p, 1e6 * d);
                const double fa = std::abs(a.f) * std::pow(1.0 + 1e5, 1.0 / p), fb = std::abs(b.f) * std::pow(1.0 + 1e6, 1.0 / p);
                const double ea = std::abs(a.e) * (1.0 + 1e5), eb = std::abs(b.e) * (1.0 + 1e6);
                finite = finite && std::isfinite(fb) && std::isfinite(eb);
                worst = std::max({worst, std::abs(fa - fb) / fb, std::abs(ea - eb) / eb});
            }
        out.push_back({"kernel.decay", finite && worst < 0.05, "relative drift between |z|=1e5 and 1e6: " + detail::sci(worst)});
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 60; ++k) {
            const cplx u = std::polar(0.01 * std::pow(1e5, k / 59.0), (k % 7) * 0.4 - 1.2);
            const auto c = cardano_parts(u);
            const cplx lhs = (c.delta_plus - c.delta_minus) / (c.delta_plus + c.delta_minus);
            const cplx rhs = c.h * (c.sqrt_u - (c.delta_plus - c.delta_minus));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        out.push_back(detail::check_max("kernel.cardano_quotient", worst, 1e-10));
    }
    {
        // jets against sampled derivatives: central differences for q <= 2, circle differences up to q = 5
        double worst = 0.0;
        for (int p = 2; p <= 4; ++p) {
            const double r = radius(p);
            for (cplx z : {cplx(-0.5 * r, 0.0), cplx(0.3 * r, 0.4 * r), cplx(-2.0, 1.0), cplx(5.0, -3.0), cplx(0.5 * r, -0.6 * r)}) {
                const double scale = std::min(distance_to_cut(p, z), std::abs(z) + r);
                const auto d = s_derivatives(p, z, 5);
                auto s = [p](cplx w) { return s_eval(p, w); };
                for (int q = 1; q <= 2; ++q)
                    worst = std::max(worst, detail::rel(numdiff::central(s, z, q, 0.05 * scale), d[static_cast<std::size_t>(q - 1)]));
                for (int q = 1; q <= 5; ++q)
                    worst = std::max(worst, detail::rel(numdiff::circle(s, z, q, 0.4 * scale), d[static_cast<std::size_t>(q - 1)]));
            }
        }
        out.push_back(detail::check_max("derivatives.finite_difference", worst, 1e-6));
    }
    {
        double worst = 0.0;
        for (int p = 2; p <= 3; ++p) {
            const ModelSpec spec{p, 0.1};
            for (auto [phi, a, b] : {std::tuple{cplx(0.7, 0.2), 1, 1}, {cplx(1.1, -0.4), 2, 1}, {cplx(0.5, 0.5), 2, 2},
                                     {cplx(0.9, 0.1), 0, 3}, {cplx(1.3, 0.2), 1, 3}}) {
                auto f = [&](cplx x, cplx y) { return s_eval(p, -spec.lambda * lve::detail::ipow(x * y, p - 1)); };
                const cplx exact = corner_derivative(spec, phi, std::conj(phi), a, b);
                const cplx fd = numdiff::circle2(f, phi, std::conj(phi), a, b, 0.3);
                worst = std::max(worst, std::abs(fd - exact) / std::max(1e-3, std::abs(exact)));
            }
        }
        out.push_back(detail::check_max("derivatives.corner_finite_difference", worst, 1e-5));
    }
    {
        // |S^(q)| (1+|z|)^q / (q-1)! stays bounded along rays: spread over |z| = 1e2 .. 1e8
        double worst = 1.0;
        bool finite = true;
        for (int p = 2; p <= 5; ++p)
            for (double theta : {0.3, 1.5, std::numbers::pi}) {
                double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
                for (int e = 2; e <= 8; ++e) {
                    const double rr = std::pow(10.0, e);
                    const auto d = s_derivatives(p, std::polar(rr, theta), 8);
                    double m = 0.0, fact = 1.0;
                    for (int q = 1; q <= 8; ++q) {
                        if (q > 1) fact *= q - 1;
                        m = std::max(m, std::abs(d[static_cast<std::size_t>(q - 1)]) * std::pow(1.0 + rr, q) / fact);
                    }
                    finite = finite && std::isfinite(m);
                    lo = std::min(lo, m);
                    hi = std::max(hi, m);
                }
                worst = std::max(worst, hi / lo);
            }
        out.push_back({"derivatives.bound_structure", finite && worst < 2.0, "max/min of the scaled bound over 1e2..1e8: " + detail::sci(worst)});
    }
    {
        double worst = 0.0;
        const int npts = o.quick ? 20 : 50;
        for (int k = 0; k < npts; ++k) {
            const int p = 2 + k % 4;
            const cplx z = detail::cut_plane_grid(p, npts)[static_cast<std::size_t>(k)];
            if (distance_to_cut(p, z) < 1e-2 * radius(p)) continue;
            auto integrand = [&](double t) {
                const auto kk = t_solve(p, t * z);
                return z * static_cast<double>(p) * kk.e * (1.0 + static_cast<double>(p - 1) * t * z * kk.e);
            };
            const cplx integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, 1e-13);
            worst = std::max(worst, std::abs(integral - s_eval(p, z)) / std::max(1.0, std::abs(s_eval(p, z))));
        }
        out.push_back(detail::check_max("derivatives.integral_identity", worst, 1e-10));
    }
    return out;
}

// ---------------------------------------------------------------------------
// exact combinatorics
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> combinatorics_suite(const Options& o)
{
    std::vector<CheckResult> out;
    {
        bool ok = true;
        for (int p = 2; p <= 8 && ok; ++p)
            for (int n = 0; n <= 40 && ok; ++n)
                ok = BigInt((p - 1) * n + 1) * o.fuss_catalan(p, n) == binom_pn_n(p, n);
        out.push_back({"combinatorics.divisibility", ok, "((p-1)n+1) C_n = binom(pn, n), p <= 8, n <= 40"});
    }
    {
        bool ok = true;
        for (int p = 2; p <= 8 && ok; ++p)
            for (int n = 0; n <= 40 && ok; ++n) ok = o.fuss_catalan(p, n) == fuss_catalan_number_alt(p, n);
        out.push_back({"combinatorics.two_formulas", ok, "binom(pn+1, n)/(pn+1) = binom(pn, n)/((p-1)n+1)"});
    }
    {
        const std::vector<int> c2{1, 1, 2, 5, 14, 42, 132}, c3{1, 1, 3, 12, 55};
        bool ok = true;
        for (std::size_t n = 0; n < c2.size(); ++n) ok = ok && o.fuss_catalan(2, static_cast<int>(n)) == c2[n];
        for (std::size_t n = 0; n < c3.size(); ++n) ok = ok && o.fuss_catalan(3, static_cast<int>(n)) == c3[n];
        out.push_back({"combinatorics.known_values", ok, "Catalan 1,1,2,5,14,42,132 and p=3: 1,1,3,12,55"});
    }
    {
        // T' = E T and F = exp(S) turn the jets at z = 0 into the Taylor coefficients of T and F
        double worst_t = 0.0, worst_f = 0.0;
        const int order = 20;
        for (int p = 2; p <= 5; ++p) {
            const CJet e = e_jet(p, 0.0, order);
            const CJet s = s_jet(p, 0.0, order);
            std::vector<cplx> t(order + 1), f(order + 1);
            t[0] = 1.0;
            f[0] = 1.0;
            for (int k = 0; k < order; ++k) {
                cplx acc = 0.0, accf = 0.0;
                for (int j = 0; j <= k; ++j) {
                    acc += e[static_cast<std::size_t>(j)] * t[static_cast<std::size_t>(k - j)];
                    accf += static_cast<double>(j + 1) * s[static_cast<std::size_t>(j + 1)] * f[static_cast<std::size_t>(k - j)];
                }
                t[static_cast<std::size_t>(k + 1)] = acc / static_cast<double>(k + 1);
                f[static_cast<std::size_t>(k + 1)] = accf / static_cast<double>(k + 1);
            }
            for (int n = 0; n <= order; ++n) {
                const double ct = o.fuss_catalan(p, n).convert_to<double>();
                const double cf = binom_pn_n(p, n).convert_to<double>();
                worst_t = std::max(worst_t, std::abs(t[static_cast<std::size_t>(n)] - ct) / ct);
                worst_f = std::max(worst_f, std::abs(f[static_cast<std::size_t>(n)] - cf) / cf);
            }
        }
        out.push_back(detail::check_max("combinatorics.t_series_coefficients", worst_t, 1e-10));
        out.push_back(detail::check_max("combinatorics.f_series_coefficients", worst_f, 1e-10));
    }
    {
        // G = Z_1 / Z_0 to first order: c(0,1)/c(0,0) + [c(1,1)/c(0,0) - c(0,1) c(1,0)/c(0,0)^2] lambda
        bool ok = true;
        std::string detail_text;
        for (auto [p, expected] : {std::pair{2, -4}, {3, -18}}) {
            const BigRational c00 = z_series_coefficient(p, 0, 0), c10 = z_series_coefficient(p, 1, 0);
            const BigRational c01 = z_series_coefficient(p, 0, 1), c11 = z_series_coefficient(p, 1, 1);
            const BigRational slope = c11 / c00 - c01 * c10 / (c00 * c00);
            ok = ok && c01 / c00 == 1 && slope == expected;
            detail_text += "p=" + std::to_string(p) + ": slope " + slope.str() + " ";
        }
        out.push_back({"combinatorics.two_point_first_order", ok, detail_text});
    }
    {
        bool ok = true;
        for (int n = 2; n <= 8; ++n) {
            BigInt sum = 0;
            for (const auto& d : tree_degree_sequences(n)) sum += trees_with_degrees(d);
            ok = ok && sum == cayley_count(n);
        }
        out.push_back({"combinatorics.cayley_degree_refinement", ok, "sum_d (n-2)!/prod(d_i-1)! = n^{n-2}, n <= 8"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// quadrature references
// ---------------------------------------------------------------------------

inline double richardson_slope(int p, double h)
{
    auto d = [&](double l) { return (g2_oracle(ModelSpec{p, l}, 1e-14).value.real() - 1.0) / l; };
    const double d1 = d(h), d2 = d(h / 2), d3 = d(h / 4);
    const double r1 = 2.0 * d2 - d1, r2 = 2.0 * d3 - d2;
    return (4.0 * r2 - r1) / 3.0;
}

inline std::vector<cplx> identity_couplings(bool quick)
{
    std::vector<cplx> l{0.01, 0.05, 0.1, 0.5, 1.0};
    if (quick) l = {0.05, 1.0};
    for (double th : {std::numbers::pi / 3, -std::numbers::pi / 3}) l.push_back(std::polar(0.1, th));
    if (!quick)
        for (double th : {2 * std::numbers::pi / 3, -2 * std::numbers::pi / 3}) l.push_back(std::polar(0.1, th));
    return l;
}

inline std::vector<CheckResult> oracle_suite(const Options& o)
{
    std::vector<CheckResult> out;
    {
        double worst = 0.0;
        double fact = 1.0;
        for (int k = 0; k <= 20; ++k) {
            if (k > 0) fact *= k;
            worst = std::max(worst, std::abs(radial_moment(k).value - fact) / fact);
        }
        out.push_back(detail::check_max("oracle.moments", worst, 1e-10));
    }
    {
        double worst_z = 0.0, worst_g = 0.0;
        for (int p = 2; p <= 4; ++p)
            for (cplx l : identity_couplings(o.quick)) {
                const ModelSpec s{p, l};
                worst_z = std::max(worst_z, std::abs(z_lvr(s).value - z_oracle(s).value));
                worst_g = std::max(worst_g, std::abs(g2_lvr(s).value - g2_oracle(s).value));
            }
        out.push_back(detail::check_max("oracle.lvr_identity", worst_z, 1e-8));
        out.push_back(detail::check_max("oracle.cumulant_identity", worst_g, 1e-8));
    }
    {
        double worst = 0.0;
        for (int p = 2; p <= 3; ++p) {
            const double expected = -static_cast<double>(p) * std::tgamma(p + 1.0);
            worst = std::max(worst, std::abs(richardson_slope(p, 1e-3) - expected) / std::abs(expected));
        }
        out.push_back(detail::check_max("oracle.cumulant_slopes", worst, 1e-2));
    }
    {
        // (Z - P_3) / lambda^4 against twice the next exact coefficient, lambda in [1e-3, 1e-2]
        double worst = 0.0;
        const double next = std::abs(z_series_coefficient(2, 4, 0).convert_to<double>());
        for (int k = 0; k <= 10; ++k) {
            const double l = 1e-3 * std::pow(10.0, k / 10.0);
            const double z = z_oracle(ModelSpec{2, l}, 1e-14).value.real();
            const double ratio = std::abs(z - perturbative_partial_sum(2, l, 3, 0).real()) / std::pow(l, 4);
            worst = std::max(worst, ratio / (2.0 * next));
        }
        out.push_back(detail::check_max("oracle.series_asymptoticity", worst, 1.0));
    }
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        int done = 0;
        while (done < (o.quick ? 30 : 100)) {
            const int p = 2 + done % 4;
            const cplx g(u(rng), u(rng)), phi(u(rng), u(rng)), phibar(u(rng), u(rng));
            const cplx z = lve::detail::ipow(g, p) * lve::detail::ipow(phi * phibar, p - 1);
            if (distance_to_cut(p, z) < 1e-3) continue;
            const cplx lhs = s_of_fields(p, g, phi, phibar);
            const cplx rhs = gallavotti_free_energy(p, lve::detail::ipow(g, p) * lve::detail::ipow(phibar, p - 1), phi);
            worst = std::max(worst, std::abs(lhs - rhs));
            ++done;
        }
        out.push_back(detail::check_max("oracle.gallavotti_substitution", worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (int p = 2; p <= 3; ++p)
            for (double l : {0.1, 0.05}) {
                const ModelSpec s{p, l};
                worst = std::max(worst, std::abs(order_one_ibp_check(s).value - order_one_direct(s).value));
            }
        out.push_back(detail::check_max("oracle.order_one_ibp", worst, 1e-8));
    }
    return out;
}

// ---------------------------------------------------------------------------
// loop vertex expansion
// ---------------------------------------------------------------------------

inline bool oracle_budget_met(const LveResult& r, cplx reference)
{
    const double budget = std::max(3.0 * r.cumulative.std_error, std::abs(r.orders.back().value));
    return std::abs(r.cumulative.value - reference) <= budget;
}

inline std::vector<CheckResult> lve_suite(const Options& o)
{
    std::vector<CheckResult> out;
    {
        bool ok = true;
        for (int n = 1; n <= 6; ++n) {
            const auto trees = enumerate_trees(n);
            std::size_t oriented = 0;
            for (const auto& t : trees) oriented += std::size_t{1} << t.edges.size();
            ok = ok && BigInt(trees.size()) == cayley_count(n) &&
                 BigInt(oriented) == cayley_count(n) * (BigInt(1) << (n - 1));
        }
        out.push_back({"lve.tree_counts", ok, "n^{n-2} trees and n^{n-2} 2^{n-1} oriented trees, n <= 6"});
    }
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 1.0;
        for (int n = 2; n <= 6; ++n) {
            const auto trees = enumerate_trees(n);
            for (int k = 0; k < (o.quick ? 200 : 1000); ++k) {
                const auto& t = trees[rng() % trees.size()];
                std::vector<double> w(t.edges.size());
                for (auto& x : w) x = u(rng);
                worst = std::min(worst, covariance(t, w).min_eigenvalue());
            }
        }
        out.push_back({"lve.covariance_psd", worst >= -1e-10, "smallest eigenvalue " + detail::sci(worst)});
    }
    {
        const ModelSpec s{2, 0.05};
        LveConfig a;
        a.n_max = 3;
        a.mc_samples = 600;
        a.threads = 1;
        LveConfig b = a;
        b.threads = 3;
        const auto ra = log_z_partial(s, a), rb = log_z_partial(s, b);
        bool same = ra.cumulative.value == rb.cumulative.value && ra.cumulative.std_error == rb.cumulative.std_error;
        for (std::size_t k = 0; k < ra.orders.size(); ++k) same = same && ra.orders[k].value == rb.orders[k].value;
        out.push_back({"lve.determinism", same, "1 vs 3 worker threads, same seed"});
    }
    {
        const ModelSpec s{2, 0.05};
        LveConfig c;
        c.n_max = o.quick ? 3 : 4;
        c.mc_samples = o.quick ? 4000 : 40000;
        const auto r = log_z_partial(s, c);
        const cplx ref = std::log(z_oracle(s).value);
        out.push_back({"lve.oracle_agreement", oracle_budget_met(r, ref),
                       "|sum - log Z| = " + detail::sci(std::abs(r.cumulative.value - ref)) + ", stderr " +
                           detail::sci(r.cumulative.std_error) + ", last order " + detail::sci(std::abs(r.orders.back().value))});

        const double k = fit_majorant_constant(2, 0.05, r.orders);
        const auto maj = majorant_partial_sum(2, 0.05, k, c.n_max);
        bool dominated = std::isfinite(k);
        for (int n = 1; n <= c.n_max; ++n)
            dominated = dominated && std::abs(r.orders[static_cast<std::size_t>(n - 1)].value) <= maj.terms[static_cast<std::size_t>(n - 1)] * (1 + 1e-12);
        out.push_back({"lve.majorant_domination", dominated, "fitted K = " + detail::sci(k)});
    }
    {
        // d log Z / d lambda between 0.01 and 0.02 against the exact series -2 lambda + 10 lambda^2 - ...
        LveConfig c;
        c.n_max = 4;
        c.mc_samples = o.quick ? 3000 : 20000;
        const auto r1 = log_z_partial(ModelSpec{2, 0.01}, c), r2 = log_z_partial(ModelSpec{2, 0.02}, c);
        const auto series = log_z_series(2, 5);
        auto poly = [&](double l, int order) {
            double s = 0.0;
            for (int k = 1; k <= order; ++k) s += series[static_cast<std::size_t>(k)].convert_to<double>() * std::pow(l, k);
            return s;
        };
        const double quotient = (r2.cumulative.value.real() - r1.cumulative.value.real()) / 0.01;
        const double expected = (poly(0.02, 4) - poly(0.01, 4)) / 0.01;
        const double truncation = 2.0 * std::abs(series[5].convert_to<double>()) * (std::pow(0.02, 5) + std::pow(0.01, 5)) / 0.01;
        const double noise = 3.0 * std::hypot(r1.cumulative.std_error, r2.cumulative.std_error) / 0.01;
        out.push_back({"lve.perturbative_slope", std::abs(quotient - expected) <= noise + truncation,
                       "quotient " + detail::sci(quotient) + " vs series " + detail::sci(expected) + " (budget " +
                           detail::sci(noise + truncation) + ")"});
    }
    return out;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, const Options& o)
{
    std::vector<CheckResult> all;
    auto append = [&](std::vector<CheckResult> v) { all.insert(all.end(), v.begin(), v.end()); };
    if (suite == "kernel" || suite == "all") append(kernel_suite(o));
    if (suite == "combinatorics" || suite == "all") append(combinatorics_suite(o));
    if (suite == "oracle" || suite == "all") append(oracle_suite(o));
    if (suite == "lve" || suite == "all") append(lve_suite(o));
    if (all.empty()) throw contract_error("unknown verification suite '" + suite + "'");
    return all;
}

inline bool all_passed(const std::vector<CheckResult>& r)
{
    for (const auto& c : r)
        if (!c.passed) return false;
    return true;
}

inline nlohmann::ordered_json summary_json(const std::string& suite, const std::vector<CheckResult>& r)
{
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["passed"] = all_passed(r);
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return j;
}

} // namespace lve::verify
