#pragma once

// Numerical differentiation used to cross-check the jet engine. Both routines
// only sample the function, never its jets.

#include <cmath>
#include <complex>
#include <numbers>

namespace lve::numdiff {

using cplx = std::complex<double>;

/// Central difference with two Richardson levels for q in {1, 2}.
template <class F>
cplx central(F&& f, cplx z, int q, double h)
{
    auto d = [&](double s) -> cplx {
        if (q == 1) return (f(z + s) - f(z - s)) / (2.0 * s);
        return (f(z + s) - 2.0 * f(z) + f(z - s)) / (s * s);
    };
    const cplx d1 = d(h), d2 = d(h / 2), d3 = d(h / 4);
    const cplx r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d3 - d2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

/// q-th derivative from N samples on the circle |w - z| = r (symmetric
/// differences in the complex plane); exact up to aliasing of order (r / rho)^N.
template <class F>
cplx circle(F&& f, cplx z, int q, double r, int n = 48)
{
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
        acc += f(z + r * w) * std::pow(w, -q);
    }
    double fact = 1.0;
    for (int i = 2; i <= q; ++i) fact *= i;
    return acc * fact / (static_cast<double>(n) * std::pow(r, q));
}

/// Mixed derivative d^a/dx^a d^b/dy^b of f(x, y) from nested circle samples.
template <class F>
cplx circle2(F&& f, cplx x, cplx y, int a, int b, double r, int n = 32)
{
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx wj = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
        for (int k = 0; k < n; ++k) {
            const cplx wk = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
            acc += f(x + r * wj, y + r * wk) * std::pow(wj, -a) * std::pow(wk, -b);
        }
    }
    double fa = 1.0, fb = 1.0;
    for (int i = 2; i <= a; ++i) fa *= i;
    for (int i = 2; i <= b; ++i) fb *= i;
    return acc * fa * fb / (static_cast<double>(n) * n * std::pow(r, a + b));
}

} // namespace lve::numdiff
