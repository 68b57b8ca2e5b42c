#include <gtest/gtest.h>

#include <cmath>

#include "lve/combinatorics.hpp"
#include "lve/derivatives.hpp"
#include "lve/jet.hpp"
#include "lve/numdiff.hpp"

using lve::cplx;
using lve::CJet;
using lve::CJet2;

TEST(Jet, SquareOfLinear)
{
    CJet a = CJet::constant(0.0, 2, 1.0) + CJet::variable(0.0, 2);
    a[0] = 1.0;
    const CJet sq = a * a;
    EXPECT_EQ(sq[0], cplx(1.0));
    EXPECT_EQ(sq[1], cplx(2.0));
    EXPECT_EQ(sq[2], cplx(1.0));
}

TEST(Jet, TruncatesAtOrder)
{
    CJet a(0.0, 1);
    a[0] = 1.0;
    a[1] = 1.0;
    const CJet sq = a * a;
    EXPECT_EQ(sq.order(), 1);
    EXPECT_EQ(sq[0], cplx(1.0));
    EXPECT_EQ(sq[1], cplx(2.0));
}

TEST(Jet, ScaleByZero)
{
    CJet a = CJet::variable(0.5, 3);
    a[2] = 7.0;
    const CJet z = 0.0 * a;
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(z[static_cast<std::size_t>(k)], cplx(0.0));
}

TEST(Jet, MismatchIsContractError)
{
    EXPECT_THROW(CJet::variable(0.0, 2) + CJet::variable(0.0, 3), lve::contract_error);
    EXPECT_THROW(CJet::variable(0.0, 2) * CJet::variable(1.0, 2), lve::contract_error);
    EXPECT_THROW(CJet(0.0, -1), lve::contract_error);
    EXPECT_THROW(CJet2(0.0, 0.0, 1, 1) * CJet2(0.0, 0.0, 2, 1), lve::contract_error);
    EXPECT_THROW(CJet2(0.0, 0.0, 1, 1) + CJet2(1.0, 0.0, 1, 1), lve::contract_error);
}

TEST(Jet, BivariateProduct)
{
    // (1 + u)(1 + v) = 1 + u + v + uv, truncated to the (1, 1) rectangle
    CJet2 a(0.0, 0.0, 1, 1), b(0.0, 0.0, 1, 1);
    a(0, 0) = 1.0;
    a(1, 0) = 1.0;
    b(0, 0) = 1.0;
    b(0, 1) = 1.0;
    const CJet2 c = a * b;
    EXPECT_EQ(c(0, 0), cplx(1.0));
    EXPECT_EQ(c(1, 0), cplx(1.0));
    EXPECT_EQ(c(0, 1), cplx(1.0));
    EXPECT_EQ(c(1, 1), cplx(1.0));
    const CJet2 sq = c * c;
    EXPECT_EQ(sq(1, 1), cplx(4.0));
}

TEST(EJet, FirstCoefficientAtOrigin)
{
    for (int p = 2; p <= 7; ++p) {
        const CJet e = lve::e_jet(p, 0.0, 2);
        EXPECT_EQ(e[0], cplx(1.0));
        EXPECT_NEAR(e[1].real(), 2.0 * p - 1.0, 1e-14);
    }
}

TEST(EJet, MatchesProductSeries)
{
    // E = F T^{p-1} and T' = E T give E = T' / T; compare with the exact series of F T^{p-1}
    for (int p = 2; p <= 5; ++p) {
        const int order = 8;
        std::vector<double> t(order + 1), f(order + 1);
        for (int n = 0; n <= order; ++n) {
            t[static_cast<std::size_t>(n)] = lve::fuss_catalan_number(p, n).convert_to<double>();
            f[static_cast<std::size_t>(n)] = lve::binom_pn_n(p, n).convert_to<double>();
        }
        std::vector<double> prod = f;
        for (int k = 0; k < p - 1; ++k) {
            std::vector<double> next(order + 1, 0.0);
            for (int i = 0; i <= order; ++i)
                for (int j = 0; i + j <= order; ++j)
                    next[static_cast<std::size_t>(i + j)] += prod[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(j)];
            prod = next;
        }
        const CJet e = lve::e_jet(p, 0.0, order);
        for (int n = 0; n <= order; ++n)
            EXPECT_NEAR(e[static_cast<std::size_t>(n)].real(), prod[static_cast<std::size_t>(n)], 1e-9 * prod[static_cast<std::size_t>(n)])
                << "p=" << p << " n=" << n;
    }
}

TEST(EJet, QuadraticSecondCoefficient)
{
    // E_2 = (1 - 4z)^{-1/2} (1 - sqrt(1 - 4z)) / (2z) = 1 + 3z + 10z^2 + 35z^3 + ...
    const CJet e = lve::e_jet(2, 0.0, 3);
    EXPECT_NEAR(e[2].real(), 10.0, 1e-12);
    EXPECT_NEAR(e.derivative(2).real(), 20.0, 1e-12);
    EXPECT_NEAR(e[3].real(), 35.0, 1e-12);
}

TEST(SDerivatives, OriginSlope)
{
    for (int p = 2; p <= 6; ++p) EXPECT_NEAR(lve::s_derivatives(p, 0.0, 1)[0].real(), p, 1e-14);
}

TEST(SDerivatives, QuadraticNegativeAxis)
{
    const auto d = lve::s_derivatives(2, -1.0, 12);
    double fact = 1.0;
    for (int q = 1; q <= 12; ++q) {
        if (q > 1) fact *= q - 1;
        const double exact = fact * std::pow(4.0, q) / (2.0 * std::pow(5.0, q));
        EXPECT_NEAR(d[static_cast<std::size_t>(q - 1)].real(), exact, 1e-12 * exact) << "q=" << q;
    }
}

TEST(SDerivatives, FirstDerivativeFormula)
{
    for (int p = 2; p <= 5; ++p)
        for (cplx z : {cplx(-3.0, 1.0), cplx(0.02, 0.05), cplx(1.0, -4.0)}) {
            const auto k = lve::t_solve(p, z);
            const cplx expected = static_cast<double>(p) * k.e * (1.0 + static_cast<double>(p - 1) * z * k.e);
            EXPECT_LT(std::abs(lve::s_derivatives(p, z, 1)[0] - expected), 1e-13 * std::abs(expected));
        }
}

TEST(SDerivatives, AgainstCircleDifferences)
{
    for (int p = 2; p <= 5; ++p) {
        const cplx z(-0.7, 0.9);
        const auto d = lve::s_derivatives(p, z, 6);
        auto s = [p](cplx w) { return lve::s_eval(p, w); };
        const double r = 0.4 * lve::distance_to_cut(p, z);
        for (int q = 1; q <= 6; ++q) {
            const cplx fd = lve::numdiff::circle(s, z, q, r, 64);
            EXPECT_LT(std::abs(fd - d[static_cast<std::size_t>(q - 1)]) / std::abs(fd), 1e-7) << "p=" << p << " q=" << q;
        }
    }
}

TEST(SDerivatives, Contract)
{
    EXPECT_THROW(lve::s_derivatives(2, 0.0, 0), lve::contract_error);
    EXPECT_THROW(lve::s_derivatives(2, 0.0, 65), lve::contract_error);
    EXPECT_THROW(lve::s_derivatives(2, 0.5, 3), lve::domain_error);
}

TEST(CornerDerivative, ZerothOrderIsKernel)
{
    const lve::ModelSpec spec{3, cplx(0.2, 0.1)};
    const cplx phi(0.8, -0.3);
    const cplx z = -spec.lambda * std::pow(phi * std::conj(phi), 2);
    EXPECT_LT(std::abs(lve::corner_derivative(spec, phi, std::conj(phi), 0, 0) - lve::s_eval(3, z)), 1e-15);
}

TEST(CornerDerivative, Origin)
{
    for (int p = 3; p <= 5; ++p) EXPECT_EQ(lve::corner_derivative(lve::ModelSpec{p, 0.1}, 0.0, 0.0, 1, 1), cplx(0.0));
    EXPECT_NEAR(std::abs(lve::corner_derivative(lve::ModelSpec{2, 0.1}, 0.0, 0.0, 1, 1) - cplx(-0.2)), 0.0, 1e-15);
    const cplx l(0.03, -0.02);
    EXPECT_NEAR(std::abs(lve::corner_derivative(lve::ModelSpec{2, l}, 0.0, 0.0, 1, 1) + 2.0 * l), 0.0, 1e-15);
}

TEST(CornerDerivative, QuadraticClosedForm)
{
    // S = -1/2 log(1 + 4 lambda phi phibar): d/dphi = -2 lambda phibar / (1 + 4 lambda phi phibar)
    const cplx l = 0.07;
    const lve::ModelSpec spec{2, l};
    const cplx phi(0.6, 0.9), phibar(0.4, -1.1);
    const cplx den = 1.0 + 4.0 * l * phi * phibar;
    EXPECT_LT(std::abs(lve::corner_derivative(spec, phi, phibar, 1, 0) + 2.0 * l * phibar / den), 1e-15);
    EXPECT_LT(std::abs(lve::corner_derivative(spec, phi, phibar, 0, 1) + 2.0 * l * phi / den), 1e-15);
    EXPECT_LT(std::abs(lve::corner_derivative(spec, phi, phibar, 2, 0) - 8.0 * l * l * phibar * phibar / (den * den)), 1e-14);
    EXPECT_LT(std::abs(lve::corner_derivative(spec, phi, phibar, 1, 1) + 2.0 * l / (den * den)), 1e-14);
}

TEST(CornerDerivative, NestedDifferences)
{
    for (int p = 2; p <= 4; ++p) {
        const lve::ModelSpec spec{p, cplx(0.05, 0.02)};
        const cplx phi(0.9, 0.3);
        auto f = [&](cplx x, cplx y) { return lve::s_eval(p, -spec.lambda * std::pow(x * y, p - 1)); };
        for (int a = 0; a <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b) {
                const cplx exact = lve::corner_derivative(spec, phi, std::conj(phi), a, b);
                const cplx fd = lve::numdiff::circle2(f, phi, std::conj(phi), a, b, 0.3);
                EXPECT_LT(std::abs(fd - exact), 1e-5 * std::max(1e-3, std::abs(exact))) << "p=" << p << " a=" << a << " b=" << b;
            }
    }
}

TEST(CornerDerivative, Contract)
{
    EXPECT_THROW(lve::corner_derivative(lve::ModelSpec{2, 0.1}, 1.0, 1.0, -1, 0), lve::contract_error);
    EXPECT_THROW(lve::corner_derivative(lve::ModelSpec{2, -1.0}, 1.0, 1.0, 1, 1), lve::domain_error);
}

TEST(BoundConstant, QuadraticNegativeAxis)
{
    std::vector<cplx> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(-1e-4 * std::pow(1e8, i / 200.0));
    const double k = lve::bound_constant(lve::ModelSpec{2, 0.0, 0.3}, grid, 8);
    EXPECT_LE(k, 4.01);
    EXPECT_GE(k, 2.0);
}

TEST(BoundConstant, SmallArgumentLowerBound)
{
    for (int p = 2; p <= 5; ++p) {
        const double k = lve::bound_constant(lve::ModelSpec{p, 0.0, 0.3}, {cplx(-1e-9), cplx(0.0, 1e-9)}, 1);
        EXPECT_GE(k, p * (1 - 1e-6));
    }
}

TEST(BoundConstant, FiniteOnSectors)
{
    for (int p : {2, 3, 5}) {
        const double k = lve::bound_constant(lve::ModelSpec{p, 0.0, 0.3}, lve::sector_grid(0.3, 1e-3, 1e4, 15, 9), 8);
        EXPECT_TRUE(std::isfinite(k)) << p;
    }
    EXPECT_TRUE(std::isfinite(lve::bound_constant(lve::ModelSpec{3, 0.0, 0.5}, lve::sector_grid(0.5, 1e-2, 1e3, 10, 7), 8)));
}

TEST(BoundConstant, ForbiddenSector)
{
    EXPECT_THROW(lve::bound_constant(lve::ModelSpec{2, 0.0, 0.3}, {cplx(1.0, 0.1)}, 3), lve::domain_error);
    EXPECT_THROW(lve::bound_constant(lve::ModelSpec{2, 0.0, 0.3}, {cplx(-1.0)}, 0), lve::contract_error);
}
