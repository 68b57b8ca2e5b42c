#pragma once

// Exact combinatorics for the (phibar phi)^p model: Fuss-Catalan numbers,
// the binomials binom(pn, n) that define F_p, coefficients of the perturbative
// expansion of Z_p, Cayley counts and the tree majorant used to certify
// convergence of the loop vertex expansion.
//
// Everything is computed with arbitrary precision integers or rationals and
// converted to floating point only when a caller asks for a number.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "lve/errors.hpp"

namespace lve {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace detail {

inline void require_order(int p)
{
    if (p < 2) throw invalid_order_error("interaction order p must be >= 2, got " + std::to_string(p));
}

inline void require_non_negative(long long v, const char* what)
{
    if (v < 0) throw contract_error(std::string(what) + " must be non-negative");
}

} // namespace detail

inline BigInt factorial(unsigned n)
{
    BigInt r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

inline BigInt binomial(unsigned n, unsigned k)
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    // r stays integral at each step: r = binom(n - k + i, i)
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

/// binom(pn, n), the n-th Taylor coefficient of F_p.
inline BigInt binom_pn_n(int p, int n)
{
    detail::require_order(p);
    detail::require_non_negative(n, "n");
    return binomial(static_cast<unsigned>(p * n), static_cast<unsigned>(n));
}

/// C_n^(p) = binom(pn, n) / ((p-1)n + 1).
inline BigInt fuss_catalan_number(int p, int n)
{
    detail::require_order(p);
    detail::require_non_negative(n, "n");
    const BigInt b = binom_pn_n(p, n);
    const unsigned den = static_cast<unsigned>((p - 1) * n + 1);
    if (b % den != 0) throw numerical_error("Fuss-Catalan divisibility violated");
    return b / den;
}

/// The alternative form C_n^(p) = binom(pn + 1, n) / (pn + 1).
inline BigInt fuss_catalan_number_alt(int p, int n)
{
    detail::require_order(p);
    detail::require_non_negative(n, "n");
    const unsigned m = static_cast<unsigned>(p * n + 1);
    const BigInt b = binomial(m, static_cast<unsigned>(n));
    if (b % m != 0) throw numerical_error("Fuss-Catalan divisibility violated");
    return b / m;
}

/// Coefficient of lambda^n (Jbar J)^q in Z_p(lambda, Jbar, J):
/// (-1)^n (pn + q)! / (n! (q!)^2).
inline BigRational z_series_coefficient(int p, int n, int q)
{
    detail::require_order(p);
    detail::require_non_negative(n, "n");
    detail::require_non_negative(q, "q");
    BigRational c(factorial(static_cast<unsigned>(p * n + q)));
    const BigInt qf = factorial(static_cast<unsigned>(q));
    c /= BigRational(factorial(static_cast<unsigned>(n)) * qf * qf);
    return (n % 2 == 0) ? c : BigRational(-c);
}

/// Sum_{n <= n_max} z_series_coefficient(p, n, q) lambda^n. Coefficients stay
/// exact until the final multiplication by powers of lambda.
inline std::complex<double> perturbative_partial_sum(int p, std::complex<double> lambda, int n_max, int q)
{
    detail::require_order(p);
    detail::require_non_negative(n_max, "n_max");
    std::complex<double> sum = 0.0;
    std::complex<double> power = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        sum += z_series_coefficient(p, n, q).convert_to<double>() * power;
        power *= lambda;
    }
    return sum;
}

/// Number of labeled trees on n vertices, n^(n-2) (1 for n = 1).
inline BigInt cayley_count(int n)
{
    if (n < 1) throw contract_error("cayley_count requires n >= 1");
    if (n == 1) return 1;
    return boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(n - 2));
}

/// Degree sequences (d_1..d_n), d_i >= 1, summing to 2n - 2: the possible
/// vertex degrees of a labeled tree on n >= 2 vertices.
inline std::vector<std::vector<int>> tree_degree_sequences(int n)
{
    std::vector<std::vector<int>> out;
    if (n < 2) return out;
    std::vector<int> d(static_cast<std::size_t>(n), 1);
    // distribute the n - 2 excess units as a composition with parts >= 0
    const int excess = n - 2;
    auto rec = [&](auto& self, int pos, int left) -> void {
        if (pos == n - 1) {
            d[static_cast<std::size_t>(pos)] = 1 + left;
            out.push_back(d);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            d[static_cast<std::size_t>(pos)] = 1 + k;
            self(self, pos + 1, left - k);
        }
    };
    rec(rec, 0, excess);
    return out;
}

/// Number of labeled trees with a prescribed degree sequence, (n-2)! / prod (d_i - 1)!.
inline BigInt trees_with_degrees(const std::vector<int>& degrees)
{
    const int n = static_cast<int>(degrees.size());
    if (n == 1) return 1;
    BigInt den = 1;
    for (int d : degrees) den *= factorial(static_cast<unsigned>(d - 1));
    return factorial(static_cast<unsigned>(n - 2)) / den;
}

struct MajorantSum {
    std::vector<double> terms; // terms[n-1] is the order-n contribution
    double total = 0.0;
};

/// Tree majorant of the loop vertex expansion:
///   sum_n 1/n! sum_{degree sequences} #trees(d) prod_i (d_i - 1)! K^{d_i} |lambda|^{d_i/(2p-2)}.
/// The single-vertex term uses the surrogate K |lambda|^{1/(2p-2)}.
inline MajorantSum majorant_partial_sum(int p, double abs_lambda, double K, int n_max)
{
    detail::require_order(p);
    if (!(K > 0.0) || !(abs_lambda > 0.0)) throw contract_error("majorant requires K > 0 and |lambda| > 0");
    if (n_max < 1) throw contract_error("majorant requires n_max >= 1");

    static std::mutex memo_mutex;
    static std::map<int, BigInt> memo; // n -> sum over degree sequences of #trees * prod (d_i - 1)!

    const double scale = std::pow(abs_lambda, 1.0 / (2.0 * p - 2.0));
    MajorantSum out;
    out.terms.push_back(K * scale);
    for (int n = 2; n <= n_max; ++n) {
        BigInt weight;
        {
            std::lock_guard lock(memo_mutex);
            auto it = memo.find(n);
            if (it == memo.end()) {
                BigInt acc = 0;
                for (const auto& d : tree_degree_sequences(n)) {
                    BigInt corner = 1;
                    for (int di : d) corner *= factorial(static_cast<unsigned>(di - 1));
                    acc += trees_with_degrees(d) * corner;
                }
                it = memo.emplace(n, acc).first;
            }
            weight = it->second;
        }
        const double w = BigRational(weight, factorial(static_cast<unsigned>(n))).convert_to<double>();
        out.terms.push_back(w * std::pow(K * scale, 2.0 * n - 2.0));
    }
    for (double t : out.terms) out.total += t;
    return out;
}

/// Coefficients C_n^(p) R_p^n for n < count. Scaling by the convergence radius
/// keeps every entry O(1) so the series can be summed in double precision.
inline const std::vector<double>& scaled_fuss_catalan(int p, int count)
{
    detail::require_order(p);
    static std::mutex cache_mutex;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard lock(cache_mutex);
    auto& v = cache[p];
    if (static_cast<int>(v.size()) < count) {
        const BigRational radius(boost::multiprecision::pow(BigInt(p - 1), static_cast<unsigned>(p - 1)),
                                 boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(p)));
        BigRational rn = 1;
        std::vector<double> fresh;
        fresh.reserve(static_cast<std::size_t>(count));
        for (int n = 0; n < count; ++n) {
            fresh.push_back((BigRational(fuss_catalan_number(p, n)) * rn).convert_to<double>());
            rn *= radius;
        }
        v = std::move(fresh);
    }
    return v;
}

/// Formal logarithm of the q = 0 perturbative series: coefficients of lambda^k
/// (k = 0..order) in log Z_p(lambda). Exact rationals.
inline std::vector<BigRational> log_z_series(int p, int order)
{
    detail::require_order(p);
    std::vector<BigRational> a;
    for (int n = 0; n <= order; ++n) a.push_back(z_series_coefficient(p, n, 0));
    // l' = a'/a with a_0 = 1:  k l_k = k a_k - sum_{j=1}^{k-1} j l_j a_{k-j}
    std::vector<BigRational> l(static_cast<std::size_t>(order) + 1, BigRational(0));
    for (int k = 1; k <= order; ++k) {
        BigRational acc = BigRational(k) * a[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) acc -= BigRational(j) * l[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(k - j)];
        l[static_cast<std::size_t>(k)] = acc / k;
    }
    return l;
}

} // namespace lve
