// heston_xpand: single-price queries, figure sweeps, timing benchmarks, and
// oracle checks for the Heston expansion library.
//
// Exit codes: 0 ok, 1 check failure, 2 usage/validation, 3 precondition.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hestonx/hestonx.hpp"
#include "hestonx/io.hpp"
#include "hestonx/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;

// HESTON_XPAND_THREADS overrides the default; an explicit --threads flag wins.
int resolve_threads(int flag_value, bool flag_set) {
    if (flag_set) return flag_value;
    if (const char* env = std::getenv("HESTON_XPAND_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    }
    return flag_value;
}

hestonx::Method parse_method(const std::string& name) {
    if (name == "ref") return hestonx::Method::ref_fourier;
    if (name == "o2") return hestonx::Method::approx_o2;
    if (name == "o3") return hestonx::Method::approx_o3;
    if (name == "o4") return hestonx::Method::approx_o4;
    if (name == "zc") return hestonx::Method::approx_zero_corr;
    throw hestonx::DomainError("method", "method must be one of ref|o2|o3|o4|zc");
}

int cmd_price(const std::string& params_file, double strike, double maturity,
              const std::string& method_name) {
    const hestonx::HestonParams p = hestonx::params_from_file(params_file);
    const hestonx::OptionSpec opt(strike, maturity);
    const hestonx::Method m = parse_method(method_name);

    hestonx::PriceResult result;
    switch (m) {
        case hestonx::Method::ref_fourier:
            result = hestonx::price_reference(p, opt);
            break;
        case hestonx::Method::approx_o2:
            result = hestonx::price_o2(p, opt);
            break;
        case hestonx::Method::approx_o3:
            result = hestonx::price_o3(p, opt);
            break;
        case hestonx::Method::approx_o4:
            result = hestonx::price_o4(p, opt);
            break;
        case hestonx::Method::approx_zero_corr:
            result = hestonx::price_zero_corr(p, opt);
            break;
        default:
            throw hestonx::DomainError("method", "unsupported pricing method");
    }
    std::printf("%s,%.12g,%.6g,%.6g\n", hestonx::method_name(result.method),
                result.price, result.error_indicator, result.elapsed);
    return kExitOk;
}

int cmd_sweep(int figure, const std::string& out_dir) {
    const hestonx::SweepSpec spec = hestonx::figure_sweep(figure);
    const hestonx::SweepReport report = hestonx::run_sweep(spec);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path path =
        std::filesystem::path(out_dir) / ("fig" + std::to_string(figure) + ".csv");
    std::ofstream out(path);
    if (!out) throw hestonx::DomainError("out", "cannot open " + path.string());
    hestonx::write_sweep_csv(report, out);
    std::printf("wrote %s (%zu rows)\n", path.string().c_str(),
                report.rows.size());
    return kExitOk;
}

int cmd_bench(int task, std::uint64_t seed, const std::string& out_dir) {
    hestonx::TimingTask t;
    switch (task) {
        case 1: t.task_id = hestonx::TimingTask::Id::t1_100; break;
        case 2: t.task_id = hestonx::TimingTask::Id::t2_1000; break;
        case 3: t.task_id = hestonx::TimingTask::Id::t3_10000; break;
        default: throw hestonx::DomainError("task", "task must be 1, 2, or 3");
    }
    t.sampler_seed = seed;

    const auto sets = hestonx::sample_parameter_sets(t.n_param_sets(), seed);
    std::printf("task %s: %d parameter sets, hash %016llx\n", t.name(),
                t.n_param_sets(),
                static_cast<unsigned long long>(hestonx::parameter_set_hash(sets)));

    const auto rows = hestonx::run_timing(
        t, {hestonx::Method::approx_o2, hestonx::Method::approx_o3,
            hestonx::Method::approx_o4});
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path path =
        std::filesystem::path(out_dir) / ("timing_task" + std::to_string(task) + ".csv");
    std::ofstream out(path);
    if (!out) throw hestonx::DomainError("out", "cannot open " + path.string());
    hestonx::write_timing_csv(rows, out);
    hestonx::write_timing_csv(rows, std::cout);
    return kExitOk;
}

bool check_terms() {
    const auto sets = hestonx::sample_parameter_sets(100, 987654321ULL);
    const double taus[4] = {0.1, 0.5, 1.0, 3.0};
    double worst = 0.0;
    int i = 0;
    for (const auto& p : sets) {
        const double tau = taus[i++ % 4];
        const hestonx::TermSet t = hestonx::term_set(p, tau);
        const double checks[7][2] = {
            {t.U, hestonx::oracle::term_U(p, tau)},
            {t.R, hestonx::oracle::term_R(p, tau)},
            {t.LWLWM, hestonx::oracle::term_LWLWM(p, tau)},
            {t.LW_R, hestonx::oracle::term_LW_R(p, tau)},
            {t.DM_LWM, hestonx::oracle::term_DM_LWM(p, tau)},
            {t.LWLWLWM, hestonx::oracle::term_LWLWLWM(p, tau)},
            {t.DM_R, hestonx::oracle::term_DM_R(p, tau)},
        };
        for (const auto& c : checks) {
            const double denom = std::max(std::abs(c[1]), 1e-300);
            worst = std::max(worst, std::abs(c[0] - c[1]) / denom);
        }
    }
    std::printf("terms: worst relative deviation %.3e (tol 1e-10): %s\n", worst,
                worst < 1e-10 ? "pass" : "FAIL");
    return worst < 1e-10;
}

bool check_derivs() {
    double worst = 0.0;
    for (double strike : {80.0, 90.0, 100.0, 110.0, 120.0}) {
        for (double tau : {0.25, 0.5, 1.0, 3.0}) {
            for (double y : {0.2, 0.3, 0.47, 0.6}) {
                const hestonx::BsState st(std::log(100.0), y, tau, strike, 0.001);
                for (int a = 0; a <= 8; ++a) {
                    for (int b = 0; a + 2 * b <= 8; ++b) {
                        const double v = hestonx::lambda_gamma_bs(st, {a, b});
                        const double f = hestonx::oracle::lambda_gamma_bs_fd(st, a, b);
                        worst = std::max(worst,
                                         std::abs(v - f) / (1.0 + std::abs(f)));
                    }
                }
            }
        }
    }
    std::printf("derivs: worst relative deviation %.3e (tol 1e-6): %s\n", worst,
                worst < 1e-6 ? "pass" : "FAIL");
    return worst < 1e-6;
}

bool check_mc(int threads) {
    const hestonx::HestonParams p(1.5, 0.2, 0.05, -0.2, 0.25, 0.001, 100.0);
    const hestonx::OptionSpec opt(100.0, 1.0);
    hestonx::McConfig cfg;
    cfg.n_paths = 400000;
    cfg.n_steps_per_year = 100;
    cfg.seed = 424242;
    cfg.n_threads = threads;
    const hestonx::McResult mc = hestonx::mc_price(p, opt, cfg);
    const double ref = hestonx::price_reference(p, opt).price;
    const double sigmas = std::abs(mc.price - ref) / mc.std_error;
    std::printf("mc: price %.6f vs ref %.6f (%.2f std errors, tol 3): %s\n",
                mc.price, ref, sigmas, sigmas < 3.0 ? "pass" : "FAIL");
    return sigmas < 3.0;
}

int cmd_check(const std::string& suite, int threads) {
    bool ok = true;
    if (suite == "terms" || suite == "all") ok = check_terms() && ok;
    if (suite == "derivs" || suite == "all") ok = check_derivs() && ok;
    if (suite == "mc" || suite == "all") ok = check_mc(threads) && ok;
    return ok ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heston small vol-of-vol expansion pricer"};
    app.require_subcommand(1);

    std::string params_file, method = "ref", suite, out_dir = ".";
    double strike = 100.0, maturity = 1.0;
    int figure = 0, task = 1, threads = 1;
    std::uint64_t seed = 20240101ULL;

    auto* price = app.add_subcommand("price", "Price a single European call");
    price->add_option("--params", params_file, "JSON parameter file")->required();
    price->add_option("--strike", strike, "Strike")->required();
    price->add_option("--maturity", maturity, "Maturity in years")->required();
    price->add_option("--method", method, "ref|o2|o3|o4|zc")->required();

    auto* sweep = app.add_subcommand("sweep", "Run a figure-preset error sweep");
    sweep->add_option("--figure", figure, "Figure preset 1..6")->required();
    sweep->add_option("--out", out_dir, "Output directory");

    auto* bench = app.add_subcommand("bench", "Run a timing benchmark task");
    bench->add_option("--task", task, "Task 1|2|3 (100/1000/10000 param sets)");
    bench->add_option("--seed", seed, "Parameter sampler seed");
    bench->add_option("--out", out_dir, "Output directory");
    auto* bench_threads = bench->add_option("--threads", threads, "Thread count");

    auto* check = app.add_subcommand("check", "Run oracle comparison suites");
    check->add_option("--suite", suite, "terms|derivs|mc|all")
        ->required()
        ->check(CLI::IsMember({"terms", "derivs", "mc", "all"}));
    auto* check_threads = check->add_option("--threads", threads, "Thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (price->parsed()) return cmd_price(params_file, strike, maturity, method);
        if (sweep->parsed()) return cmd_sweep(figure, out_dir);
        if (bench->parsed())
            return cmd_bench(task, seed, out_dir);
        if (check->parsed()) {
            const bool flag_set = check_threads->count() > 0 ||
                                  bench_threads->count() > 0;
            return cmd_check(suite, resolve_threads(threads, flag_set));
        }
    } catch (const hestonx::RhoNotZero& e) {
        std::fprintf(stderr, "precondition: %s\n", e.what());
        return kExitPrecondition;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailure;
    }
    return kExitUsage;
}
