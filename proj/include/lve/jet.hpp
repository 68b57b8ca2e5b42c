#pragma once

// Truncated Taylor jets. A univariate jet of order Q around a base point holds
// c_k = f^(k)(base) / k! for k = 0..Q; a bivariate jet of orders (A, B) holds
// the coefficients of u^a v^b for a <= A, b <= B. Products truncate to the
// same orders, so a jet behaves like the exact Taylor polynomial modulo the
// discarded monomials.

#include <complex>
#include <cstddef>
#include <vector>

#include "lve/errors.hpp"

namespace lve {

template <class Scalar>
class UnivariateJet {
public:
    UnivariateJet(Scalar base, int order) : base_(base), coeffs_(static_cast<std::size_t>(order) + 1, Scalar(0))
    {
        if (order < 0) throw contract_error("jet order must be non-negative");
    }

    UnivariateJet(Scalar base, std::vector<Scalar> coeffs) : base_(base), coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) throw contract_error("jet needs at least one coefficient");
    }

    /// The identity jet x = base + h.
    static UnivariateJet variable(Scalar base, int order)
    {
        UnivariateJet j(base, order);
        j[0] = base;
        if (order >= 1) j[1] = Scalar(1);
        return j;
    }

    static UnivariateJet constant(Scalar base, int order, Scalar value)
    {
        UnivariateJet j(base, order);
        j[0] = value;
        return j;
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    Scalar base() const { return base_; }
    const std::vector<Scalar>& coeffs() const { return coeffs_; }

    Scalar& operator[](std::size_t k) { return coeffs_[k]; }
    const Scalar& operator[](std::size_t k) const { return coeffs_[k]; }

    /// k-th derivative at the base point, k! c_k.
    Scalar derivative(int k) const
    {
        Scalar f = coeffs_.at(static_cast<std::size_t>(k));
        for (int i = 2; i <= k; ++i) f *= static_cast<double>(i);
        return f;
    }

    UnivariateJet& operator+=(const UnivariateJet& o)
    {
        check(o);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        return *this;
    }

    UnivariateJet& operator*=(Scalar s)
    {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }

    friend UnivariateJet operator+(UnivariateJet a, const UnivariateJet& b) { return a += b; }
    friend UnivariateJet operator*(UnivariateJet a, Scalar s) { return a *= s; }
    friend UnivariateJet operator*(Scalar s, UnivariateJet a) { return a *= s; }

    friend UnivariateJet operator*(const UnivariateJet& a, const UnivariateJet& b)
    {
        a.check(b);
        UnivariateJet r(a.base_, a.order());
        const std::size_t n = a.coeffs_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (a.coeffs_[i] == Scalar(0)) continue;
            for (std::size_t j = 0; i + j < n; ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return r;
    }

private:
    void check(const UnivariateJet& o) const
    {
        if (o.coeffs_.size() != coeffs_.size()) throw contract_error("jet order mismatch");
        if (o.base_ != base_) throw contract_error("jet base point mismatch");
    }

    Scalar base_;
    std::vector<Scalar> coeffs_;
};

template <class Scalar>
class BivariateJet {
public:
    BivariateJet(Scalar base_u, Scalar base_v, int order_u, int order_v)
        : base_u_(base_u), base_v_(base_v), order_u_(order_u), order_v_(order_v),
          coeffs_(static_cast<std::size_t>((order_u + 1) * (order_v + 1)), Scalar(0))
    {
        if (order_u < 0 || order_v < 0) throw contract_error("jet orders must be non-negative");
    }

    int order_u() const { return order_u_; }
    int order_v() const { return order_v_; }
    Scalar base_u() const { return base_u_; }
    Scalar base_v() const { return base_v_; }

    Scalar& operator()(int a, int b) { return coeffs_[index(a, b)]; }
    const Scalar& operator()(int a, int b) const { return coeffs_[index(a, b)]; }

    BivariateJet& operator+=(const BivariateJet& o)
    {
        check(o);
        for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        return *this;
    }

    BivariateJet& operator*=(Scalar s)
    {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }

    /// Adds s to the constant coefficient.
    BivariateJet& shift(Scalar s)
    {
        coeffs_[0] += s;
        return *this;
    }

    friend BivariateJet operator+(BivariateJet a, const BivariateJet& b) { return a += b; }
    friend BivariateJet operator*(BivariateJet a, Scalar s) { return a *= s; }
    friend BivariateJet operator*(Scalar s, BivariateJet a) { return a *= s; }

    friend BivariateJet operator*(const BivariateJet& x, const BivariateJet& y)
    {
        x.check(y);
        BivariateJet r(x.base_u_, x.base_v_, x.order_u_, x.order_v_);
        for (int a1 = 0; a1 <= x.order_u_; ++a1)
            for (int b1 = 0; b1 <= x.order_v_; ++b1) {
                const Scalar c = x(a1, b1);
                if (c == Scalar(0)) continue;
                for (int a2 = 0; a1 + a2 <= x.order_u_; ++a2)
                    for (int b2 = 0; b1 + b2 <= x.order_v_; ++b2) r(a1 + a2, b1 + b2) += c * y(a2, b2);
            }
        return r;
    }

private:
    std::size_t index(int a, int b) const
    {
        return static_cast<std::size_t>(a * (order_v_ + 1) + b);
    }

    void check(const BivariateJet& o) const
    {
        if (o.order_u_ != order_u_ || o.order_v_ != order_v_) throw contract_error("jet order mismatch");
        if (o.base_u_ != base_u_ || o.base_v_ != base_v_) throw contract_error("jet base point mismatch");
    }

    Scalar base_u_;
    Scalar base_v_;
    int order_u_;
    int order_v_;
    std::vector<Scalar> coeffs_;
};

} // namespace lve
