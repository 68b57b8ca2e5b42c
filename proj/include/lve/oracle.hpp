#pragma once

// Quadrature references for the zero-dimensional model.
//
// For any G, the normalized complex Gaussian reduces to a Laplace integral,
//   int dmu(phi, phibar) G(phibar phi) = int_0^inf e^{-t} G(t) dt,
// which is what every routine here evaluates. For complex lambda the half-line
// is rotated to t = e^{i alpha} s with alpha = -arg(lambda) / p, which makes
// lambda t^p real and positive along the contour.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <complex>
#include <functional>
#include <limits>
#include <string>

#include "lve/derivatives.hpp"
#include "lve/kernel.hpp"

namespace lve {

struct QuadratureResult {
    cplx value;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

namespace detail {

/// Integrates g(t) dt over the ray t = e^{i alpha} s, s in [0, inf). The ray is
/// truncated where e^{-s cos(alpha)} (1 + s)^{growth} * bound drops below
/// rel_tol / 1000 and the tail bound is added to the error estimate.
template <class G>
QuadratureResult integrate_ray(G&& g, double alpha, double rel_tol, double growth, double bound = 1.0)
{
    const cplx dir = std::polar(1.0, alpha);
    const double damping = std::cos(alpha);
    if (!(damping > 0.0)) throw domain_error("integration ray does not decay");

    auto envelope = [&](double s) { return std::exp(-s * damping + growth * std::log1p(s)) * bound; };
    double s_max = 8.0;
    // the envelope peaks near s = growth / damping; search past it
    while (s_max < growth / damping || envelope(s_max) > rel_tol * 1e-3) s_max *= 1.25;

    QuadratureResult out;
    double l1 = 0.0;
    auto f = [&](double s) {
        ++out.evaluations;
        return dir * g(dir * s);
    };
    // GK floors each leaf error near eps times the integrand size, so tighter panel tolerances only multiply leaves
    const double panel_tol = std::max(rel_tol * 1e-2, 10.0 * std::numeric_limits<double>::epsilon());
    double a = 0.0, b = 0.5;
    while (a < s_max) {
        b = std::min(b, s_max);
        double err = 0.0, panel_l1 = 0.0;
        const cplx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 18, panel_tol, &err,
                                                                                       &panel_l1);
        out.value += v;
        out.abs_error_estimate += err;
        l1 += panel_l1;
        a = b;
        b = 2.0 * b + 0.5;
    }
    // tail: int_{s_max}^inf e^{-s c}(1+s)^k ds <= envelope(s_max) / (c - k / (1 + s_max))
    out.abs_error_estimate += envelope(s_max) / std::max(damping - growth / (1.0 + s_max), 1e-3 * damping);
    (void)l1;
    return out;
}

/// Adaptive GK over [a, b] after mapping onto [0, 1]. The Boost error estimate is
/// floored at a few eps times the integrand size, not scaled by the width, so
/// short intervals would otherwise never meet a relative tolerance.
template <class F>
cplx integrate_unit(F&& f, double a, double b, double rel_tol, unsigned depth = 12)
{
    const double w = b - a;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate([&](double y) { return w * f(a + w * y); }, 0.0,
                                                                         1.0, depth, rel_tol);
}

inline double ray_angle(const ModelSpec& spec)
{
    return spec.lambda == 0.0 ? 0.0 : -std::arg(spec.lambda) / spec.p;
}

inline void require_accuracy(const QuadratureResult& r, double tol, const char* what)
{
    if (!(r.abs_error_estimate <= tol * std::max(1.0, std::abs(r.value))) || !std::isfinite(r.value.real()) ||
        !std::isfinite(r.value.imag())) {
        char buf[160];
        std::snprintf(buf, sizeof buf, ": tolerance %.1e not reached (estimate %.17g%+.17gi, error %.3e)", tol,
                      r.value.real(), r.value.imag(), r.abs_error_estimate);
        throw numerical_error(what + std::string(buf));
    }
}

} // namespace detail

/// int_0^inf t^k e^{-t} dt, which must equal k! if the radial reduction is right.
inline QuadratureResult radial_moment(int k, double tol = 1e-13)
{
    return detail::integrate_ray([k](cplx t) { return detail::ipow(t, k) * std::exp(-t); }, 0.0, tol, k);
}

/// Z_p(lambda) = int_0^inf e^{-t - lambda t^p} dt.
inline QuadratureResult z_oracle(const ModelSpec& spec, double tol = 1e-12)
{
    validate(spec);
    if (spec.lambda == 0.0) return {1.0, 0.0, 0};
    const int p = spec.p;
    const cplx lam = spec.lambda;
    auto r = detail::integrate_ray([&](cplx t) { return std::exp(-t - lam * detail::ipow(t, p)); },
                                   detail::ray_angle(spec), tol, 0.0);
    detail::require_accuracy(r, tol, "z_oracle");
    return r;
}

/// G^c_{p,1}(lambda) = int t e^{-t - lambda t^p} dt / Z_p(lambda).
inline QuadratureResult g2_oracle(const ModelSpec& spec, double tol = 1e-12)
{
    validate(spec);
    if (spec.lambda == 0.0) return {1.0, 0.0, 0};
    const int p = spec.p;
    const cplx lam = spec.lambda;
    const auto z = z_oracle(spec, tol);
    auto num = detail::integrate_ray([&](cplx t) { return t * std::exp(-t - lam * detail::ipow(t, p)); },
                                     detail::ray_angle(spec), tol, 1.0);
    detail::require_accuracy(num, tol, "g2_oracle");
    QuadratureResult r;
    r.value = num.value / z.value;
    r.abs_error_estimate =
        std::abs(r.value) * (num.abs_error_estimate / std::abs(num.value) + z.abs_error_estimate / std::abs(z.value));
    r.evaluations = num.evaluations + z.evaluations;
    return r;
}

/// Z_p(lambda) through the loop vertex representation, int_0^inf e^{-t} F_p(-lambda t^{p-1}) dt.
inline QuadratureResult z_lvr(const ModelSpec& spec, double tol = 1e-12)
{
    validate(spec);
    if (spec.lambda == 0.0) return {1.0, 0.0, 0};
    const int p = spec.p;
    const cplx lam = spec.lambda;
    auto r = detail::integrate_ray([&](cplx t) { return std::exp(-t) * f_eval(p, -lam * detail::ipow(t, p - 1)); },
                                   detail::ray_angle(spec), tol, 0.0);
    detail::require_accuracy(r, tol, "z_lvr");
    return r;
}

/// G^c_{p,1} through the loop vertex representation:
///   1 + (1/Z) int_0^inf e^{-t} p z S'(z) F(z) dt,  z = -lambda t^{p-1},
/// using g dS/dg = p z S'(z).
inline QuadratureResult g2_lvr(const ModelSpec& spec, double tol = 1e-12)
{
    validate(spec);
    if (spec.lambda == 0.0) return {1.0, 0.0, 0};
    const int p = spec.p;
    const cplx lam = spec.lambda;
    const auto z = z_lvr(spec, tol);
    auto num = detail::integrate_ray(
        [&](cplx t) {
            const cplx zz = -lam * detail::ipow(t, p - 1);
            const KernelEval k = t_solve(p, zz);
            const cplx ds = static_cast<double>(p) * k.e * (1.0 + static_cast<double>(p - 1) * zz * k.e);
            return std::exp(-t) * static_cast<double>(p) * zz * ds * k.f;
        },
        detail::ray_angle(spec), tol, 0.0);
    detail::require_accuracy(num, tol, "g2_lvr");
    QuadratureResult r;
    r.value = 1.0 + num.value / z.value;
    r.abs_error_estimate = num.abs_error_estimate / std::abs(z.value) +
                           std::abs(num.value / z.value) * z.abs_error_estimate / std::abs(z.value);
    r.evaluations = num.evaluations + z.evaluations;
    return r;
}

/// Free energy of the Gallavotti theory, A_p(lambda, J) = log F_p(lambda J^{p-1}).
inline cplx gallavotti_free_energy(int p, cplx lambda, cplx J)
{
    detail::require_order(p);
    return s_eval(p, lambda * detail::ipow(J, p - 1));
}

/// S_p as a function of the coupling root g and the fields: S_p(g^p (phi phibar)^{p-1}).
inline cplx s_of_fields(int p, cplx g, cplx phi, cplx phibar)
{
    return s_eval(p, detail::ipow(g, p) * detail::ipow(phi * phibar, p - 1));
}

/// The single loop vertex, int_0^inf e^{-t} S_p(-lambda t^{p-1}) dt, on the real half-line.
inline QuadratureResult order_one_direct(const ModelSpec& spec, double tol = 1e-12)
{
    validate(spec);
    if (spec.lambda == 0.0) return {0.0, 0.0, 0};
    const int p = spec.p;
    const cplx lam = spec.lambda;
    // S grows logarithmically, the growth exponent 1 covers it
    auto r = detail::integrate_ray([&](cplx t) { return std::exp(-t) * s_eval(p, -lam * detail::ipow(t, p - 1)); },
                                   0.0, tol, 1.0);
    detail::require_accuracy(r, tol, "order_one_direct");
    return r;
}

/// The single loop vertex through S(z) = int_0^1 z S'(u z) du:
///   int_0^inf e^{-t} int_0^1 z S'(u z) du dt,  z = -lambda t^{p-1}.
/// The inner integral runs over r = u |z| on panels [0, 1], [1, 4], ... since
/// S'(w) varies on the scale |w| ~ 1.
inline QuadratureResult order_one_ibp_check(const ModelSpec& spec, double tol = 1e-12)
{
    validate(spec);
    if (spec.lambda == 0.0) return {0.0, 0.0, 0};
    const int p = spec.p;
    const cplx lam = spec.lambda;
    long inner_evals = 0;
    auto r = detail::integrate_ray(
        [&](cplx t) {
            const cplx z = -lam * detail::ipow(t, p - 1);
            const double m = std::abs(z);
            if (m == 0.0) return cplx(0.0);
            const cplx dir = z / m;
            auto inner = [&](double x) {
                ++inner_evals;
                const cplx w = x * dir;
                const KernelEval k = t_solve(p, w);
                return dir * static_cast<double>(p) * k.e * (1.0 + static_cast<double>(p - 1) * w * k.e);
            };
            cplx sum = 0.0;
            double a = 0.0, b = std::min(1.0, m);
            while (a < m) {
                sum += detail::integrate_unit(inner, a, b, std::max(tol * 1e-2, 1e-13));
                a = b;
                b = std::min(m, 4.0 * b);
            }
            return std::exp(-t) * sum;
        },
        0.0, tol, 1.0);
    r.evaluations += inner_evals;
    detail::require_accuracy(r, tol, "order_one_ibp_check");
    return r;
}

} // namespace lve
