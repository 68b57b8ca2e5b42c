// lvecli: command line front end for the kernel, the quadrature references,
// the loop vertex expansion and the verification suites.
//
// Exit codes: 0 success, 2 domain error, 3 numerical failure, 4 verification failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lve/combinatorics.hpp"
#include "lve/derivatives.hpp"
#include "lve/kernel.hpp"
#include "lve/lve.hpp"
#include "lve/oracle.hpp"
#include "lve/record.hpp"
#include "lve/verify.hpp"

namespace {

constexpr int exit_domain = 2;
constexpr int exit_numerical = 3;
constexpr int exit_verification = 4;

struct Common {
    int p = 2;
    std::string z = "0";
    std::string lambda = "0";
    int n_max = 4;
    long samples = 20000;
    std::uint64_t seed = 42;
    int qmax = 4;
    double tol = 1e-12;
    double eps = 0.1;
    unsigned threads = 0;
    bool quick = false;
    bool timing = false;
    std::string json_path;
    std::string csv_path;
    std::string fault;
};

lve::cplx parse_or_throw(const std::string& s, const char* what)
{
    const auto v = lve::parse_complex(s);
    if (!v) throw lve::domain_error(std::string("cannot parse ") + what + " '" + s + "' as a complex number");
    return *v;
}

/// Relative paths land in $LVE_OUTPUT_DIR when it is set.
std::string output_path(const std::string& path)
{
    const char* dir = std::getenv("LVE_OUTPUT_DIR");
    if (!dir || !*dir || std::filesystem::path(path).is_absolute()) return path;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / path).string();
}

void emit(lve::RunRecord& r, const Common& c, double seconds)
{
    std::printf("%-28s %-48s %s\n", "name", "value", "error");
    for (const auto& n : r.results)
        std::printf("%-28s %-48s %s\n", n.name.c_str(), lve::format_complex(n.value).c_str(), lve::format_real(n.error).c_str());
    std::printf("wall_time %.3f s\n", seconds);
    if (c.timing) r.wall_time = seconds;
    if (!c.json_path.empty()) lve::save_json(r, output_path(c.json_path));
    if (!c.csv_path.empty()) lve::save_csv(r, output_path(c.csv_path));
}

lve::RunRecord base_record(const std::string& command, const Common& c, lve::cplx lambda)
{
    lve::RunRecord r;
    r.command = command;
    r.spec = {c.p, lambda, c.eps};
    return r;
}

int cmd_kernel(const Common& c)
{
    const lve::cplx z = parse_or_throw(c.z, "z");
    auto r = base_record("kernel", c, 0.0);
    r.config = {{"z", lve::format_complex(z)}, {"qmax", c.qmax}};
    const auto k = lve::t_solve(c.p, z);
    r.add("T", k.t);
    r.add("F", k.f);
    r.add("S", k.s);
    r.add("E", k.e);
    r.add("residual", k.residual);
    r.add("degraded", k.degraded ? 1.0 : 0.0);
    if (c.qmax >= 1) {
        const auto d = lve::s_derivatives(c.p, z, c.qmax);
        for (int q = 1; q <= c.qmax; ++q) r.add("S^(" + std::to_string(q) + ")", d[static_cast<std::size_t>(q - 1)]);
    }
    emit(r, c, 0.0);
    return 0;
}

int cmd_series(const Common& c)
{
    const lve::cplx lambda = parse_or_throw(c.lambda, "lambda");
    auto r = base_record("series", c, lambda);
    r.config = {{"n_max", c.n_max}};
    for (int n = 0; n <= c.n_max; ++n) {
        r.add("fuss_catalan[" + std::to_string(n) + "]", lve::fuss_catalan_number(c.p, n).convert_to<double>());
        r.add("binom_pn_n[" + std::to_string(n) + "]", lve::binom_pn_n(c.p, n).convert_to<double>());
        r.add("z_coefficient[" + std::to_string(n) + "]", lve::z_series_coefficient(c.p, n, 0).convert_to<double>());
    }
    if (lambda != 0.0) r.add("perturbative_partial_sum", lve::perturbative_partial_sum(c.p, lambda, c.n_max, 0));
    if (c.z != "0") {
        const lve::cplx z = parse_or_throw(c.z, "z");
        r.config["z"] = lve::format_complex(z);
        const auto s = lve::t_series(c.p, z, std::max(c.n_max, 1) + 1);
        r.add("t_series", s.value);
        r.add("slow_convergence", s.slow_convergence ? 1.0 : 0.0);
    }
    emit(r, c, 0.0);
    return 0;
}

int cmd_oracle(const Common& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    const lve::cplx lambda = parse_or_throw(c.lambda, "lambda");
    auto r = base_record("oracle", c, lambda);
    r.config = {{"tol", lve::format_real(c.tol)}};
    lve::validate(r.spec);
    const auto z = lve::z_oracle(r.spec, c.tol), g = lve::g2_oracle(r.spec, c.tol);
    const auto zl = lve::z_lvr(r.spec, c.tol), gl = lve::g2_lvr(r.spec, c.tol);
    r.add("z_oracle", z.value, z.abs_error_estimate);
    r.add("g2_oracle", g.value, g.abs_error_estimate);
    r.add("z_lvr", zl.value, zl.abs_error_estimate);
    r.add("g2_lvr", gl.value, gl.abs_error_estimate);
    r.add("|z_lvr-z_oracle|", std::abs(zl.value - z.value));
    r.add("|g2_lvr-g2_oracle|", std::abs(gl.value - g.value));
    emit(r, c, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

int cmd_lve(const Common& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    const lve::cplx lambda = parse_or_throw(c.lambda, "lambda");
    auto r = base_record("lve", c, lambda);
    lve::validate(r.spec);
    lve::LveConfig cfg;
    cfg.n_max = c.n_max;
    cfg.mc_samples = c.samples;
    cfg.master_seed = c.seed;
    cfg.threads = c.threads;
    r.seed = c.seed;
    r.config = {{"n_max", c.n_max}, {"mc_samples", c.samples}, {"w_rule", "tensor_quadrature"}};

    const auto res = lve::log_z_partial(r.spec, cfg);
    for (std::size_t n = 0; n < res.orders.size(); ++n)
        r.add("order[" + std::to_string(n + 1) + "]", res.orders[n].value, res.orders[n].std_error);
    r.add("cumulative", res.cumulative.value, res.cumulative.std_error);
    const auto oracle = lve::z_oracle(r.spec);
    const lve::cplx reference = std::log(oracle.value);
    r.add("log_z_oracle", reference, oracle.abs_error_estimate / std::abs(oracle.value));
    const double budget = std::max(3.0 * res.cumulative.std_error, std::abs(res.orders.back().value));
    const double gap = std::abs(res.cumulative.value - reference);
    const bool pass = gap <= budget;
    r.add("|cumulative-log_z_oracle|", gap);
    r.add("budget", budget);
    r.add("redraws", static_cast<double>(res.redraws));
    r.add("pass", pass ? 1.0 : 0.0);
    emit(r, c, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::printf("%s: |sum - log Z| = %.3e, budget %.3e\n", pass ? "PASS" : "FAIL", gap, budget);
    return pass ? 0 : exit_verification;
}

int cmd_verify(const Common& c, const std::string& suite)
{
    const auto t0 = std::chrono::steady_clock::now();
    lve::verify::Options opts;
    opts.quick = c.quick;
    if (c.fault == "coefficient") opts = lve::verify::with_coefficient_fault(opts);
    else if (!c.fault.empty()) throw lve::contract_error("unknown fault '" + c.fault + "'");

    const auto checks = lve::verify::run_suite(suite, opts);
    auto r = base_record("verify", c, 0.0);
    r.config = {{"suite", suite}, {"quick", c.quick}};
    for (const auto& ch : checks) {
        std::printf("[%s] %-40s %s\n", ch.passed ? "PASS" : "FAIL", ch.name.c_str(), ch.detail.c_str());
        r.add(ch.name, ch.passed ? 1.0 : 0.0);
    }
    const bool ok = lve::verify::all_passed(checks);
    lve::write_text(output_path("verify_" + suite + ".json"), lve::verify::summary_json(suite, checks).dump(2) + "\n");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("wall_time %.3f s\n", seconds);
    if (c.timing) r.wall_time = seconds;
    if (!c.json_path.empty()) lve::save_json(r, output_path(c.json_path));
    if (!c.csv_path.empty()) lve::save_csv(r, output_path(c.csv_path));
    if (!ok) {
        std::fprintf(stderr, "verification failed:");
        for (const auto& ch : checks)
            if (!ch.passed) std::fprintf(stderr, " %s", ch.name.c_str());
        std::fprintf(stderr, "\n");
    }
    return ok ? 0 : exit_verification;
}

int cmd_bound_fit(const Common& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    auto r = base_record("bound-fit", c, 0.0);
    r.config = {{"qmax", c.qmax}, {"epsilon", lve::format_real(c.eps)}};
    const auto sector = lve::sector_grid(c.eps, 1e-3, 1e4, c.quick ? 15 : 40, c.quick ? 9 : 25);
    std::vector<lve::cplx> negative;
    for (int i = 0; i < (c.quick ? 30 : 200); ++i) negative.push_back(-1e-3 * std::pow(1e7, i / (c.quick ? 29.0 : 199.0)));
    r.add("K_sector", lve::bound_constant(r.spec, sector, c.qmax));
    r.add("K_negative_axis", lve::bound_constant(r.spec, negative, c.qmax));
    emit(r, c, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Loop vertex representation and expansion of the zero-dimensional (phibar phi)^p model"};
    app.require_subcommand(1);
    Common c;

    auto add_output = [&](CLI::App* s) {
        s->add_option("--json", c.json_path, "Write the run record as JSON");
        s->add_option("--csv", c.csv_path, "Write one CSV row per named result");
        s->add_flag("--timing", c.timing, "Store wall_time in the record (breaks byte-identical reruns)");
        s->add_option("--eps", c.eps, "Sector margin epsilon")->check(CLI::PositiveNumber);
    };
    auto add_p = [&](CLI::App* s) { s->add_option("-p", c.p, "Interaction order p >= 2")->check(CLI::Range(2, 64)); };

    auto* kernel = app.add_subcommand("kernel", "T, F, S, E and S derivatives at z");
    add_p(kernel);
    kernel->add_option("-z", c.z, "Point in the cut plane, as a+bi")->required();
    kernel->add_option("--qmax", c.qmax, "Highest derivative of S")->check(CLI::Range(0, lve::max_derivative_order));
    add_output(kernel);

    auto* series = app.add_subcommand("series", "Exact coefficients and partial sums");
    add_p(series);
    series->add_option("-n", c.n_max, "Highest order")->check(CLI::Range(0, 400));
    series->add_option("-z", c.z, "Evaluate the truncated T series at z");
    series->add_option("-l", c.lambda, "Evaluate the perturbative partial sum of Z at lambda");
    add_output(series);

    auto* oracle = app.add_subcommand("oracle", "Quadrature references for Z and the two-point function");
    add_p(oracle);
    oracle->add_option("-l", c.lambda, "Coupling lambda, as a+bi")->required();
    oracle->add_option("--tol", c.tol, "Relative tolerance")->check(CLI::PositiveNumber);
    add_output(oracle);

    auto* lve_cmd = app.add_subcommand("lve", "Loop vertex expansion of log Z against the oracle");
    add_p(lve_cmd);
    lve_cmd->add_option("-l", c.lambda, "Coupling lambda, as a+bi")->required();
    lve_cmd->add_option("-n", c.n_max, "Highest tree order")->check(CLI::Range(1, lve::max_lve_order));
    lve_cmd->add_option("-s", c.samples, "Field samples per tree term")->check(CLI::Range(100L, 1000000000L));
    lve_cmd->add_option("--seed", c.seed, "Master seed");
    lve_cmd->add_option("--threads", c.threads, "Worker threads (0: all cores); does not change results");
    add_output(lve_cmd);

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("suite", suite, "kernel, combinatorics, oracle, lve or all")
        ->check(CLI::IsMember({"kernel", "combinatorics", "oracle", "lve", "all"}));
    verify->add_flag("--quick", c.quick, "Reduced grids");
    verify->add_option("--inject-fault", c.fault)->group("");
    add_output(verify);

    auto* bound = app.add_subcommand("bound-fit", "Fit the derivative bound constant K over the sector");
    add_p(bound);
    bound->add_option("--qmax", c.qmax, "Highest derivative order")->check(CLI::Range(1, lve::max_derivative_order));
    bound->add_flag("--quick", c.quick, "Reduced grid");
    add_output(bound);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*kernel) return cmd_kernel(c);
        if (*series) return cmd_series(c);
        if (*oracle) return cmd_oracle(c);
        if (*lve_cmd) return cmd_lve(c);
        if (*verify) return cmd_verify(c, suite);
        if (*bound) return cmd_bound_fit(c);
    } catch (const lve::numerical_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return exit_numerical;
    } catch (const lve::error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return exit_domain;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numerical;
    }
    return 0;
}
