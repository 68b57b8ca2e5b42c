#pragma once

// Loop vertex expansion of log Z_p:
//
//   log Z = sum_n 1/n! sum_{trees T on n labeled vertices} sum_{orientations of T}
//           int_[0,1]^{n-1} dw  int dmu_{T,w}(phi, phibar)  d_T prod_i S_p(z_i),
//
// with z_i = -lambda (phi_i phibar_i)^{p-1}. The replica fields are a complex
// Gaussian vector whose covariance X_ij is the smallest w along the tree path
// from i to j (X_ii = 1). An oriented edge i -> j differentiates vertex i in
// phibar_i and vertex j in phi_j.
//
// Each undirected tree is one work unit with its own random stream, so the
// result depends only on the master seed, never on the thread count.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "lve/combinatorics.hpp"
#include "lve/derivatives.hpp"
#include "lve/oracle.hpp"

namespace lve {

inline constexpr int max_tree_vertices = 8;
inline constexpr int max_lve_order = 6;

struct Edge {
    int a;
    int b;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Labeled tree on vertices 0..n-1.
struct Tree {
    int n = 1;
    std::vector<Edge> edges;

    std::vector<int> degrees() const
    {
        std::vector<int> d(static_cast<std::size_t>(n), 0);
        for (const auto& e : edges) {
            ++d[static_cast<std::size_t>(e.a)];
            ++d[static_cast<std::size_t>(e.b)];
        }
        return d;
    }
};

/// Tree with each edge directed tail -> head.
struct OrientedTree {
    int n = 1;
    std::vector<Edge> edges; // (tail, head)
    std::vector<int> in_degree;
    std::vector<int> out_degree;
};

/// Decodes a Pruefer sequence of length n - 2 (entries in 0..n-1).
inline Tree decode_pruefer(int n, std::span<const int> seq)
{
    Tree t;
    t.n = n;
    if (n == 1) return t;
    if (static_cast<int>(seq.size()) != n - 2) throw contract_error("Pruefer sequence must have length n - 2");
    std::vector<int> degree(static_cast<std::size_t>(n), 1);
    for (int s : seq) {
        if (s < 0 || s >= n) throw contract_error("Pruefer entry out of range");
        ++degree[static_cast<std::size_t>(s)];
    }
    for (int s : seq) {
        int leaf = 0;
        while (degree[static_cast<std::size_t>(leaf)] != 1) ++leaf;
        t.edges.push_back({std::min(leaf, s), std::max(leaf, s)});
        --degree[static_cast<std::size_t>(leaf)];
        --degree[static_cast<std::size_t>(s)];
    }
    int u = -1, v = -1;
    for (int i = 0; i < n; ++i)
        if (degree[static_cast<std::size_t>(i)] == 1) (u < 0 ? u : v) = i;
    t.edges.push_back({u, v});
    return t;
}

/// All n^{n-2} labeled trees on n vertices (the single vertex tree for n = 1).
inline std::vector<Tree> enumerate_trees(int n)
{
    if (n < 1) throw contract_error("tree size must be >= 1");
    if (n > max_tree_vertices) throw size_error("tree enumeration is capped at n = 8");
    std::vector<Tree> out;
    if (n <= 2) {
        Tree t;
        t.n = n;
        if (n == 2) t.edges.push_back({0, 1});
        out.push_back(t);
        return out;
    }
    std::vector<int> seq(static_cast<std::size_t>(n - 2), 0);
    while (true) {
        out.push_back(decode_pruefer(n, seq));
        std::size_t k = 0;
        while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
        if (k == seq.size()) break;
    }
    return out;
}

/// Bit k of orientation_index reverses edge k.
inline OrientedTree orient_tree(const Tree& tree, std::uint32_t orientation_index)
{
    const std::size_t m = tree.edges.size();
    if (m < 32 && orientation_index >= (std::uint32_t{1} << m)) throw contract_error("orientation index out of range");
    OrientedTree ot;
    ot.n = tree.n;
    ot.in_degree.assign(static_cast<std::size_t>(tree.n), 0);
    ot.out_degree.assign(static_cast<std::size_t>(tree.n), 0);
    for (std::size_t k = 0; k < m; ++k) {
        Edge e = tree.edges[k];
        if ((orientation_index >> k) & 1u) std::swap(e.a, e.b);
        ot.edges.push_back(e);
        ++ot.out_degree[static_cast<std::size_t>(e.a)];
        ++ot.in_degree[static_cast<std::size_t>(e.b)];
    }
    return ot;
}

struct ReplicaCovariance {
    Eigen::MatrixXd x;

    double min_eigenvalue() const
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

/// X_ii = 1, X_ij = min of w over the tree path i -> j.
inline ReplicaCovariance covariance(const Tree& tree, std::span<const double> w)
{
    if (w.size() != tree.edges.size()) throw contract_error("need one weight per tree edge");
    for (double wl : w)
        if (!(wl >= 0.0 && wl <= 1.0)) throw contract_error("interpolation weights must lie in [0, 1]");
    const int n = tree.n;
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < tree.edges.size(); ++k) {
        adj[static_cast<std::size_t>(tree.edges[k].a)].push_back({tree.edges[k].b, w[k]});
        adj[static_cast<std::size_t>(tree.edges[k].b)].push_back({tree.edges[k].a, w[k]});
    }
    ReplicaCovariance c{Eigen::MatrixXd::Identity(n, n)};
    std::vector<std::pair<int, double>> stack;
    std::vector<char> seen(static_cast<std::size_t>(n));
    for (int root = 0; root < n; ++root) {
        std::fill(seen.begin(), seen.end(), 0);
        seen[static_cast<std::size_t>(root)] = 1;
        stack.assign(1, {root, 1.0});
        while (!stack.empty()) {
            auto [v, m] = stack.back();
            stack.pop_back();
            c.x(root, v) = (v == root) ? 1.0 : m;
            for (auto [u, wl] : adj[static_cast<std::size_t>(v)]) {
                if (seen[static_cast<std::size_t>(u)]) continue;
                seen[static_cast<std::size_t>(u)] = 1;
                stack.push_back({u, std::min(m, wl)});
            }
        }
    }
    return c;
}

/// Symmetric square root factor L with L L^T = X; eigenvalues in [-1e-10, 0) are clipped.
inline Eigen::MatrixXd replica_factor(const ReplicaCovariance& cov)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.x);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-10) throw numerical_error("replica covariance is not positive semidefinite");
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
    return es.eigenvectors() * ev.asDiagonal();
}

/// Complex Gaussian replicas with E[phi_i conj(phi_j)] = X_ij and E[phi_i phi_j] = 0.
template <class Rng>
std::vector<cplx> sample_replicas(const Eigen::MatrixXd& factor, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const Eigen::Index n = factor.rows();
    Eigen::VectorXd re(n), im(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        re(k) = normal(rng);
        im(k) = normal(rng);
    }
    const Eigen::VectorXd a = factor * re;
    const Eigen::VectorXd b = factor * im;
    std::vector<cplx> phi(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) phi[static_cast<std::size_t>(k)] = {a(k), b(k)};
    return phi;
}

template <class Rng>
std::vector<cplx> sample_replicas(const ReplicaCovariance& cov, Rng& rng)
{
    return sample_replicas(replica_factor(cov), rng);
}

/// prod_i d^{in_i}/dphi_i^{in_i} d^{out_i}/dphibar_i^{out_i} S_p(z_i) with phibar_i = conj(phi_i).
inline cplx tree_integrand(const ModelSpec& spec, const OrientedTree& ot, std::span<const cplx> phi)
{
    cplx prod = 1.0;
    for (int i = 0; i < ot.n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        prod *= corner_derivative(spec, phi[k], std::conj(phi[k]), ot.in_degree[k], ot.out_degree[k]);
    }
    return prod;
}

/// Precomputed orientation bookkeeping for one undirected tree.
class OrientationSum {
public:
    explicit OrientationSum(const Tree& tree) : n_(tree.n), degree_(tree.degrees())
    {
        const std::uint32_t count = std::uint32_t{1} << tree.edges.size();
        for (std::uint32_t idx = 0; idx < count; ++idx) in_degrees_.push_back(orient_tree(tree, idx).in_degree);
    }

    std::size_t orientations() const { return in_degrees_.size(); }

    /// Sum over all orientations of the tree integrand at one field configuration.
    cplx operator()(const ModelSpec& spec, std::span<const cplx> phi) const
    {
        tables_.clear();
        for (int i = 0; i < n_; ++i) {
            const auto k = static_cast<std::size_t>(i);
            tables_.push_back(corner_table(spec, phi[k], std::conj(phi[k]), degree_[k], degree_[k], degree_[k]));
        }
        cplx sum = 0.0;
        for (const auto& in : in_degrees_) {
            cplx prod = 1.0;
            for (int i = 0; i < n_; ++i) {
                const auto k = static_cast<std::size_t>(i);
                prod *= tables_[k](in[k], degree_[k] - in[k]);
            }
            sum += prod;
        }
        return sum;
    }

private:
    int n_;
    std::vector<int> degree_;
    std::vector<std::vector<int>> in_degrees_;
    mutable std::vector<CJet2> tables_;
};

struct MCEstimate {
    cplx value;
    double std_error = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
};

enum class WRule { tensor_quadrature, joint_mc };

struct LveConfig {
    long mc_samples = 20000;
    WRule w_rule = WRule::tensor_quadrature;
    std::uint64_t master_seed = 42;
    int n_max = 4;
    unsigned threads = 0; // 0: hardware concurrency
};

inline void validate(const LveConfig& c)
{
    if (c.mc_samples < 100) throw contract_error("mc_samples must be >= 100");
    if (c.n_max < 1) throw contract_error("n_max must be >= 1");
}

namespace detail {

/// Compensated (Neumaier) complex accumulator.
class CompensatedSum {
public:
    void add(cplx x)
    {
        re_.add(x.real());
        im_.add(x.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    struct Real {
        double sum = 0.0, c = 0.0;
        void add(double x)
        {
            const double t = sum + x;
            c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
            sum = t;
        }
        double value() const { return sum + c; }
    };
    Real re_, im_;
};

/// Running mean and variance of complex samples (variance of |f - mean|).
class Moments {
public:
    void add(cplx x)
    {
        ++n_;
        const cplx d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += std::norm(d) * (static_cast<double>(n_ - 1) / static_cast<double>(n_));
    }
    long count() const { return n_; }
    cplx mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

private:
    long n_ = 0;
    cplx mean_ = 0.0;
    double m2_ = 0.0;
};

inline std::mt19937_64 stream(std::uint64_t master, std::uint64_t n, std::uint64_t tree, std::uint64_t node)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(tree), static_cast<std::uint32_t>(node),
                      static_cast<std::uint32_t>(node >> 32)};
    return std::mt19937_64(seq);
}

/// Gauss-Legendre nodes and weights of order 8 mapped to [0, 1].
inline std::vector<std::pair<double, double>> legendre8_unit()
{
    using G = boost::math::quadrature::gauss<double, 8>;
    std::vector<std::pair<double, double>> out;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.push_back({0.5 * (1.0 + x[i]), 0.5 * w[i]});
        if (x[i] != 0.0) out.push_back({0.5 * (1.0 - x[i]), 0.5 * w[i]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool near_cut(const ModelSpec& spec, std::span<const cplx> phi)
{
    for (const cplx f : phi) {
        const cplx z = -spec.lambda * ipow(cplx(std::norm(f)), spec.p - 1);
        if (distance_to_cut(spec.p, z) < 1e-12) return true;
    }
    return false;
}

struct UnitResult {
    MCEstimate estimate;
    long redraws = 0;
};

/// Draws accepted field samples at a fixed covariance factor, redrawing configurations that touch the cut.
template <class Rng>
void accumulate_fields(const ModelSpec& spec, const OrientationSum& osum, const Eigen::MatrixXd& factor, Rng& rng,
                       long count, Moments& m, long& redraws)
{
    for (long s = 0; s < count; ++s) {
        auto phi = sample_replicas(factor, rng);
        while (near_cut(spec, phi)) {
            ++redraws;
            if (redraws * 10000 > std::max(count, 1L)) throw numerical_error("too many samples landed on the cut");
            phi = sample_replicas(factor, rng);
        }
        m.add(osum(spec, phi));
    }
}

} // namespace detail

/// Integral over w and the replica fields of the orientation-summed tree
/// integrand. Single vertex trees reduce to a radial quadrature.
inline MCEstimate tree_term(const ModelSpec& spec, const Tree& tree, std::uint64_t tree_index, const LveConfig& config,
                            long* redraws_out = nullptr)
{
    validate(spec);
    validate(config);
    MCEstimate est;
    est.seed = config.master_seed;
    if (spec.lambda == 0.0) return est;
    if (tree.n == 1) {
        const auto q = order_one_direct(spec, 1e-12);
        est.value = q.value;
        est.samples = q.evaluations;
        return est;
    }

    const OrientationSum osum(tree);
    const std::size_t edges = tree.edges.size();
    long redraws = 0;

    if (config.w_rule == WRule::tensor_quadrature && tree.n <= 4) {
        const auto rule = detail::legendre8_unit();
        std::size_t nodes = 1;
        for (std::size_t k = 0; k < edges; ++k) nodes *= rule.size();
        const long per_node = std::max<long>(2, (config.mc_samples + static_cast<long>(nodes) - 1) / static_cast<long>(nodes));
        detail::CompensatedSum value;
        double variance = 0.0;
        std::vector<double> w(edges);
        for (std::size_t node = 0; node < nodes; ++node) {
            double weight = 1.0;
            std::size_t rem = node;
            for (std::size_t k = 0; k < edges; ++k) {
                w[k] = rule[rem % rule.size()].first;
                weight *= rule[rem % rule.size()].second;
                rem /= rule.size();
            }
            const Eigen::MatrixXd factor = replica_factor(covariance(tree, w));
            auto rng = detail::stream(config.master_seed, static_cast<std::uint64_t>(tree.n), tree_index, node);
            detail::Moments m;
            detail::accumulate_fields(spec, osum, factor, rng, per_node, m, redraws);
            value.add(weight * m.mean());
            variance += weight * weight * m.variance() / static_cast<double>(m.count());
            est.samples += m.count();
        }
        est.value = value.value();
        est.std_error = std::sqrt(variance);
    } else {
        auto rng = detail::stream(config.master_seed, static_cast<std::uint64_t>(tree.n), tree_index, ~std::uint64_t{0});
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        std::vector<double> w(edges);
        detail::Moments m;
        for (long s = 0; s < config.mc_samples; ++s) {
            for (auto& wl : w) wl = uniform(rng);
            const Eigen::MatrixXd factor = replica_factor(covariance(tree, w));
            detail::accumulate_fields(spec, osum, factor, rng, 1, m, redraws);
        }
        est.value = m.mean();
        est.std_error = std::sqrt(m.variance() / static_cast<double>(m.count()));
        est.samples = m.count();
    }
    if (redraws_out) *redraws_out += redraws;
    return est;
}

struct LveResult {
    std::vector<MCEstimate> orders; // orders[n-1]: (1/n!) sum over trees on n vertices
    MCEstimate cumulative;
    long redraws = 0;
};

/// Partial sums of the loop vertex expansion of log Z_p up to config.n_max.
inline LveResult log_z_partial(const ModelSpec& spec, const LveConfig& config)
{
    validate(spec);
    validate(config);
    if (config.n_max > max_lve_order) throw size_error("log_z_partial supports n_max <= 6");

    LveResult out;
    detail::CompensatedSum total;
    double total_var = 0.0;
    for (int n = 1; n <= config.n_max; ++n) {
        const auto trees = enumerate_trees(n);
        std::vector<MCEstimate> terms(trees.size());
        std::vector<long> redraws(trees.size(), 0);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < trees.size(); i = next++) {
                try {
                    terms[i] = tree_term(spec, trees[i], i, config, &redraws[i]);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, trees.size()));
        if (threads <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        }
        if (failure) std::rethrow_exception(failure);

        double nfact = 1.0;
        for (int k = 2; k <= n; ++k) nfact *= k;
        detail::CompensatedSum order;
        double var = 0.0;
        MCEstimate est;
        est.seed = config.master_seed;
        for (std::size_t i = 0; i < trees.size(); ++i) {
            order.add(terms[i].value);
            var += terms[i].std_error * terms[i].std_error;
            est.samples += terms[i].samples;
            out.redraws += redraws[i];
        }
        est.value = order.value() / nfact;
        est.std_error = std::sqrt(var) / nfact;
        out.orders.push_back(est);
        total.add(est.value);
        total_var += est.std_error * est.std_error;
        out.cumulative.samples += est.samples;
    }
    out.cumulative.value = total.value();
    out.cumulative.std_error = std::sqrt(total_var);
    out.cumulative.seed = config.master_seed;
    return out;
}

/// Smallest K for which every |order-n term| is dominated by the order-n majorant term.
inline double fit_majorant_constant(int p, double abs_lambda, const std::vector<MCEstimate>& orders)
{
    const int n_max = static_cast<int>(orders.size());
    const auto unit = majorant_partial_sum(p, abs_lambda, 1.0, n_max);
    const double scale = std::pow(abs_lambda, 1.0 / (2.0 * p - 2.0));
    double k = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double mag = std::abs(orders[static_cast<std::size_t>(n - 1)].value);
        if (n == 1) {
            k = std::max(k, mag / scale);
        } else {
            // term_n(K) = term_n(1) K^{2n-2}
            const double w = unit.terms[static_cast<std::size_t>(n - 1)];
            k = std::max(k, std::pow(mag / w, 1.0 / (2.0 * n - 2.0)));
        }
    }
    return k;
}

} // namespace lve
