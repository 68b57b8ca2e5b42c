#pragma once

// Exact high-order derivatives of S_p.
//
// E = F T^{p-1} obeys E' = E^2 [(2p - 1) + p (p - 1) z E], so its Taylor jet at
// any point of the cut plane follows from E(z) alone. S' = F'/F = p E (1 + (p-1) z E)
// then gives the jet of S, and composing that jet with the polynomial
// z(phi, phibar) = -lambda (phi phibar)^{p-1} gives the mixed field derivatives
// that a loop vertex receives from the tree edges hooked to it.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "lve/jet.hpp"
#include "lve/kernel.hpp"

namespace lve {

using CJet = UnivariateJet<cplx>;
using CJet2 = BivariateJet<cplx>;

inline constexpr int max_derivative_order = 64;

namespace detail {

inline void require_derivative_order(int q)
{
    if (q < 0 || q > max_derivative_order)
        throw contract_error("derivative order must lie in [0, " + std::to_string(max_derivative_order) + "]");
}

inline CJet e_jet_from(int p, cplx z, cplx e0, int order)
{
    CJet c(z, order);
    c[0] = e0;
    std::vector<cplx> e2(static_cast<std::size_t>(order) + 1), e3(static_cast<std::size_t>(order) + 1);
    const double a = 2.0 * p - 1.0;
    const double b = static_cast<double>(p) * (p - 1);
    for (int k = 0; k < order; ++k) {
        const auto K = static_cast<std::size_t>(k);
        cplx s2 = 0.0, s3 = 0.0;
        for (std::size_t i = 0; i <= K; ++i) s2 += c[i] * c[K - i];
        e2[K] = s2;
        for (std::size_t i = 0; i <= K; ++i) s3 += e2[i] * c[K - i];
        e3[K] = s3;
        // [E^2 (a + b (z + h) E)]_k
        cplx rhs = a * e2[K] + b * z * e3[K];
        if (k > 0) rhs += b * e3[K - 1];
        c[K + 1] = rhs / static_cast<double>(k + 1);
    }
    return c;
}

} // namespace detail

/// Taylor jet of E_p at z: coefficients E^(k)(z) / k! for k = 0..order.
inline CJet e_jet(int p, cplx z, int order)
{
    detail::require_derivative_order(order);
    return detail::e_jet_from(p, z, t_solve(p, z).e, order);
}

/// Taylor jet of S_p at z from an already evaluated kernel point.
inline CJet s_jet(int p, cplx z, const KernelEval& k, int order)
{
    detail::require_derivative_order(order);
    CJet s(z, order);
    s[0] = k.s;
    if (order == 0) return s;
    // S' = p E (1 + (p-1)(z + h) E)
    const CJet e = detail::e_jet_from(p, z, k.e, order - 1);
    const CJet x = CJet::variable(z, order - 1);
    const CJet one = CJet::constant(z, order - 1, 1.0);
    const CJet ds = static_cast<double>(p) * e * (one + static_cast<double>(p - 1) * (x * e));
    for (int k1 = 0; k1 < order; ++k1)
        s[static_cast<std::size_t>(k1 + 1)] = ds[static_cast<std::size_t>(k1)] / static_cast<double>(k1 + 1);
    return s;
}

inline CJet s_jet(int p, cplx z, int order)
{
    return s_jet(p, z, t_solve(p, z), order);
}

/// S^(1)(z) .. S^(q_max)(z).
inline std::vector<cplx> s_derivatives(int p, cplx z, int q_max)
{
    if (q_max < 1) throw contract_error("q_max must be >= 1");
    const CJet s = s_jet(p, z, q_max);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(q_max));
    for (int q = 1; q <= q_max; ++q) out.push_back(s.derivative(q));
    return out;
}

/// Table D(a, b) = d^a/dphi^a d^b/dphibar^b S_p(-lambda (phi phibar)^{p-1}) for
/// a <= order_phi, b <= order_phibar, with phi and phibar independent variables.
/// Only entries with a + b <= max_total are filled correctly (max_total < 0: all).
inline CJet2 corner_table(const ModelSpec& spec, cplx phi, cplx phibar, int order_phi, int order_phibar,
                          int max_total = -1)
{
    detail::require_derivative_order(order_phi + order_phibar);
    const int p = spec.p;
    const int m = p - 1;
    const cplx z0 = -spec.lambda * detail::ipow(phi * phibar, m);
    detail::require_off_cut(p, z0);
    const int total = max_total < 0 ? order_phi + order_phibar : std::min(max_total, order_phi + order_phibar);

    // (phi + u)^{p-1} and (phibar + v)^{p-1} as truncated polynomials
    CJet2 pu(phi, phibar, order_phi, order_phibar), pv(phi, phibar, order_phi, order_phibar);
    double binom = 1.0;
    for (int k = 0; k <= m; ++k) {
        if (k <= order_phi) pu(k, 0) = binom * detail::ipow(phi, m - k);
        if (k <= order_phibar) pv(0, k) = binom * detail::ipow(phibar, m - k);
        binom = binom * (m - k) / (k + 1);
    }
    CJet2 delta = (-spec.lambda) * (pu * pv);
    delta.shift(-z0);
    delta(0, 0) = 0.0;

    const CJet s = s_jet(p, z0, total);
    // Horner in delta, which has no constant term
    CJet2 acc(phi, phibar, order_phi, order_phibar);
    acc(0, 0) = s[static_cast<std::size_t>(total)];
    for (int k = total - 1; k >= 0; --k) {
        acc = acc * delta;
        acc(0, 0) += s[static_cast<std::size_t>(k)];
    }
    for (int a = 0; a <= order_phi; ++a) {
        double fa = 1.0;
        for (int i = 2; i <= a; ++i) fa *= i;
        for (int b = 0; b <= order_phibar; ++b) {
            double fb = 1.0;
            for (int i = 2; i <= b; ++i) fb *= i;
            acc(a, b) *= fa * fb;
        }
    }
    return acc;
}

/// d^a/dphi^a d^b/dphibar^b S_p(-lambda (phi phibar)^{p-1}) at (phi, phibar).
inline cplx corner_derivative(const ModelSpec& spec, cplx phi, cplx phibar, int a, int b)
{
    if (a < 0 || b < 0) throw contract_error("derivative counts must be non-negative");
    return corner_table(spec, phi, phibar, a, b)(a, b);
}

/// Smallest K with |S^(q)(z)| <= (q-1)! [K / (1 + |z|)]^q on every grid point and
/// every 1 <= q <= q_max. Grid points must avoid the sector |arg z| < epsilon.
inline double bound_constant(const ModelSpec& spec, const std::vector<cplx>& z_grid, int q_max)
{
    detail::require_order(spec.p);
    if (q_max < 1) throw contract_error("q_max must be >= 1");
    double k_max = 0.0;
    for (const cplx z : z_grid) {
        if (z != 0.0 && std::abs(std::arg(z)) < spec.epsilon * (1.0 - 1e-12))
            throw domain_error("grid point lies in the excluded sector |arg z| < epsilon");
        const auto d = s_derivatives(spec.p, z, q_max);
        double fact = 1.0; // (q-1)!
        for (int q = 1; q <= q_max; ++q) {
            if (q > 1) fact *= (q - 1);
            const double ratio = std::abs(d[static_cast<std::size_t>(q - 1)]) / fact;
            const double k = (1.0 + std::abs(z)) * std::pow(ratio, 1.0 / q);
            if (!std::isfinite(k)) throw numerical_error("non-finite derivative bound");
            k_max = std::max(k_max, k);
        }
    }
    return k_max;
}

/// Points |z| = r e^{i theta} with r log-spaced in [r_min, r_max] and theta spread
/// over the allowed sector epsilon <= |theta| <= pi.
inline std::vector<cplx> sector_grid(double epsilon, double r_min, double r_max, int n_radii, int n_angles)
{
    std::vector<cplx> g;
    for (int i = 0; i < n_radii; ++i) {
        const double t = n_radii == 1 ? 0.0 : static_cast<double>(i) / (n_radii - 1);
        const double r = r_min * std::pow(r_max / r_min, t);
        for (int j = 0; j < n_angles; ++j) {
            const double s = n_angles == 1 ? 1.0 : static_cast<double>(j) / (n_angles - 1);
            const double theta = epsilon + s * (std::numbers::pi - epsilon);
            g.push_back(std::polar(r, theta));
            if (j + 1 < n_angles) g.push_back(std::polar(r, -theta));
        }
    }
    return g;
}

} // namespace lve
