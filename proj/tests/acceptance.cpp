// Acceptance gate: one PASS/FAIL line per criterion, with the measured quantity,
// its tolerance and the wall time against the runtime budget.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lve/combinatorics.hpp"
#include "lve/derivatives.hpp"
#include "lve/kernel.hpp"
#include "lve/lve.hpp"
#include "lve/oracle.hpp"
#include "lve/record.hpp"
#include "lve/verify.hpp"

namespace {

using lve::cplx;
using lve::ModelSpec;
namespace fs = std::filesystem;

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < budget_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %2d %-28s %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), s,
                budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
}

std::string sci(double x)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.3e", x);
    return b;
}

int run_cli(const std::string& args)
{
    const std::string cmd = "'" + std::string(LVECLI_PATH) + "' " + args + " > /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct FlagshipCase {
    int p;
    const char* lambda;
    int n_max;
    std::string file;
};

std::string flagship_args(const FlagshipCase& c, const std::string& path)
{
    return "lve -p " + std::to_string(c.p) + " -l " + c.lambda + " -n " + std::to_string(c.n_max) +
           " -s 200000 --seed 42 --json '" + path + "'";
}

Outcome check_flagship_record(const lve::RunRecord& r, int n_max)
{
    cplx cumulative = 0.0, reference = 0.0, last = 0.0;
    double stderr_total = 0.0;
    for (const auto& n : r.results) {
        if (n.name == "cumulative") {
            cumulative = n.value;
            stderr_total = n.error;
        }
        if (n.name == "log_z_oracle") reference = n.value;
        if (n.name == "order[" + std::to_string(n_max) + "]") last = n.value;
    }
    const double gap = std::abs(cumulative - reference);
    const double budget = std::max(3.0 * stderr_total, std::abs(last));
    return {gap <= budget, "p=" + std::to_string(r.spec.p) + " gap " + sci(gap) + " <= budget " + sci(budget)};
}

} // namespace

int main()
{
    const fs::path work = fs::temp_directory_path() / "lve_acceptance";
    fs::create_directories(work);

    criterion(1, "kernel residual", 5.0, [] {
        double worst = 0.0;
        for (int p = 2; p <= 6; ++p)
            for (cplx z : lve::verify::detail::cut_plane_grid(p, 200)) worst = std::max(worst, lve::t_solve(p, z).residual);
        return Outcome{worst < 1e-12, "max |zT^p - T + 1| " + sci(worst) + " < 1e-12"};
    });

    criterion(2, "closed-form agreement", 5.0, [] {
        double worst = 0.0;
        for (int p = 2; p <= 4; ++p)
            for (cplx z : lve::verify::detail::cut_plane_grid(p, 100))
                worst = std::max(worst, std::abs(lve::t_solve(p, z).t - lve::t_closed_form(p, z)));
        return Outcome{worst < 1e-10, "max |t_solve - t_closed_form| " + sci(worst) + " < 1e-10"};
    });

    criterion(3, "Fuss-Catalan exactness", 1.0, [] {
        bool ok = true;
        const std::vector<int> c2{1, 1, 2, 5, 14, 42, 132}, c3{1, 1, 3, 12, 55};
        for (std::size_t n = 0; n < c2.size(); ++n) ok = ok && lve::fuss_catalan_number(2, static_cast<int>(n)) == c2[n];
        for (std::size_t n = 0; n < c3.size(); ++n) ok = ok && lve::fuss_catalan_number(3, static_cast<int>(n)) == c3[n];
        // T_3 = 1 + z + 3z^2 + ...: read the coefficients back from the truncated series
        const double h = 1e-3;
        const cplx t = lve::t_series(3, h, 3).value;
        ok = ok && std::abs(t.real() - (1.0 + h + 3.0 * h * h)) < 1e-15;
        for (int p = 2; p <= 8; ++p)
            for (int n = 0; n <= 40; ++n) ok = ok && lve::binom_pn_n(p, n) % lve::BigInt((p - 1) * n + 1) == 0;
        return Outcome{ok, "sequences, T_3 head and divisibility for p <= 8, n <= 40"};
    });

    criterion(4, "derivative bound constant", 30.0, [] {
        bool finite = true;
        std::string detail;
        for (int p : {2, 3, 5}) {
            const double k = lve::bound_constant(ModelSpec{p, 0.0, 0.3}, lve::sector_grid(0.3, 1e-3, 1e4, 30, 15), 8);
            finite = finite && std::isfinite(k);
            detail += "K_" + std::to_string(p) + "=" + sci(k) + " ";
        }
        std::vector<cplx> axis;
        for (int i = 0; i <= 200; ++i) axis.push_back(-1e-3 * std::pow(1e7, i / 200.0));
        const double k2 = lve::bound_constant(ModelSpec{2, 0.0, 0.3}, axis, 8);
        return Outcome{finite && k2 <= 4.01, detail + "negative axis K_2=" + sci(k2) + " <= 4.01"};
    });

    criterion(5, "LVR identity", 30.0, [] {
        double wz = 0.0, wg = 0.0;
        std::vector<cplx> couplings{0.01, 0.05, 0.1, 0.5, 1.0, std::polar(0.1, std::numbers::pi / 3), std::polar(0.1, -std::numbers::pi / 3)};
        for (int p = 2; p <= 4; ++p)
            for (cplx l : couplings) {
                const ModelSpec s{p, l};
                wz = std::max(wz, std::abs(lve::z_lvr(s).value - lve::z_oracle(s).value));
                wg = std::max(wg, std::abs(lve::g2_lvr(s).value - lve::g2_oracle(s).value));
            }
        return Outcome{wz < 1e-8 && wg < 1e-8, "max |z_lvr - z_oracle| " + sci(wz) + ", max |g2_lvr - g2_oracle| " + sci(wg) + " < 1e-8"};
    });

    criterion(6, "cumulant slopes", 10.0, [] {
        const double s2 = lve::verify::richardson_slope(2, 1e-3), s3 = lve::verify::richardson_slope(3, 1e-3);
        const bool ok = std::abs(s2 + 4.0) <= 0.04 && std::abs(s3 + 18.0) <= 0.18;
        return Outcome{ok, "slope p=2 " + std::to_string(s2) + " (-4), p=3 " + std::to_string(s3) + " (-18), 1%"};
    });

    criterion(7, "perturbative asymptoticity", 10.0, [] {
        double worst = 0.0;
        for (int k = 0; k <= 20; ++k) {
            const double l = 1e-3 * std::pow(10.0, k / 20.0);
            const double z = lve::z_oracle(ModelSpec{2, l}, 1e-14).value.real();
            worst = std::max(worst, std::abs(z - lve::perturbative_partial_sum(2, l, 3, 0).real()) / std::pow(l, 4));
        }
        return Outcome{worst <= 2.0 * 1680.0, "max |Z - P_3| / lambda^4 " + sci(worst) + " <= 3360"};
    });

    const std::vector<FlagshipCase> flagship{{2, "0.05", 4, "flagship_p2.json"}, {3, "0.02", 3, "flagship_p3.json"}};

    criterion(8, "LVE flagship", 600.0, [&] {
        bool ok = true;
        std::string detail;
        for (const auto& c : flagship) {
            const std::string path = (work / c.file).string();
            const int code = run_cli(flagship_args(c, path));
            const auto o = check_flagship_record(lve::load_json(path), c.n_max);
            ok = ok && o.ok && code == 0;
            detail += o.detail + "; ";
        }
        return Outcome{ok, detail};
    });

    criterion(9, "tree enumeration and PSD", 30.0, [] {
        bool ok = true;
        const std::vector<std::size_t> counts{1, 1, 3, 16, 125, 1296};
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 1.0;
        for (int n = 1; n <= 6; ++n) {
            const auto trees = lve::enumerate_trees(n);
            ok = ok && trees.size() == counts[static_cast<std::size_t>(n - 1)];
            for (int k = 0; k < 1000; ++k) {
                std::vector<double> w(static_cast<std::size_t>(n - 1));
                for (auto& x : w) x = u(rng);
                worst = std::min(worst, lve::covariance(trees[rng() % trees.size()], w).min_eigenvalue());
            }
        }
        return Outcome{ok && worst >= -1e-10, "counts 1,1,3,16,125,1296; min eigenvalue " + sci(worst) + " >= -1e-10"};
    });

    criterion(10, "determinism", 1200.0, [&] {
        bool ok = true;
        for (const auto& c : flagship) {
            const std::string rerun = (work / ("rerun_" + c.file)).string();
            ok = ok && run_cli(flagship_args(c, rerun)) == 0;
            ok = ok && lve::read_text((work / c.file).string()) == lve::read_text(rerun);
        }
        return Outcome{ok, "reruns with seed 42 produce byte-identical JSON records"};
    });

    criterion(11, "identity suite", 10.0, [] {
        double wi = 0.0;
        int used = 0;
        for (int k = 0; used < 50; ++k) {
            const int p = 2 + k % 4;
            const cplx z = lve::verify::detail::cut_plane_grid(p, 200)[static_cast<std::size_t>(k)];
            if (lve::distance_to_cut(p, z) < 1e-2 * lve::radius(p)) continue;
            auto integrand = [&](double t) {
                const auto e = lve::t_solve(p, t * z).e;
                return z * static_cast<double>(p) * e * (1.0 + static_cast<double>(p - 1) * t * z * e);
            };
            const cplx integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, 1e-13);
            wi = std::max(wi, std::abs(integral - lve::s_eval(p, z)));
            ++used;
        }
        double wb = 0.0;
        for (int p = 2; p <= 4; ++p)
            for (double l : {0.02, 0.1, 0.5}) {
                const ModelSpec s{p, l};
                wb = std::max(wb, std::abs(lve::order_one_ibp_check(s).value - lve::order_one_direct(s).value));
            }
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double wg = 0.0;
        for (int k = 0; k < 100;) {
            const int p = 2 + k % 4;
            const cplx g(u(rng), u(rng)), phi(u(rng), u(rng)), phibar(u(rng), u(rng));
            if (lve::distance_to_cut(p, std::pow(g, p) * std::pow(phi * phibar, p - 1)) < 1e-3) continue;
            wg = std::max(wg, std::abs(lve::s_of_fields(p, g, phi, phibar) -
                                       lve::gallavotti_free_energy(p, std::pow(g, p) * std::pow(phibar, p - 1), phi)));
            ++k;
        }
        return Outcome{wi < 1e-10 && wb < 1e-8 && wg < 1e-10,
                       "integral " + sci(wi) + " < 1e-10, ibp " + sci(wb) + " < 1e-8, substitution " + sci(wg) + " < 1e-10"};
    });

    fs::remove_all(work);
    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
