// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Tolerances are pinned here and are not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "hestonx/hestonx.hpp"
#include "hestonx/oracle.hpp"

using namespace hestonx;

namespace {

int g_failures = 0;

void report(int idx, const char* label, bool pass, const char* detail) {
    std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", idx,
                label, detail);
    if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

HestonParams figure_params(int fig) {
    const double rhos[6] = {-0.2, -0.8, -0.2, -0.8, 0.0, 0.0};
    const double nus[6] = {0.05, 0.05, 0.5, 0.5, 0.05, 0.5};
    return HestonParams(1.5, 0.2, nus[fig - 1], rhos[fig - 1], 0.25, 0.001, 100.0);
}

// --- 1. Closed-form expansion terms vs nested quadrature, 1e-10 rel. ------
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sets = sample_parameter_sets(100, 24680ULL);
    const double taus[5] = {0.05, 0.25, 0.5, 1.0, 3.0};
    double worst = 0.0;
    int i = 0;
    for (const auto& p : sets) {
        const double tau = taus[i++ % 5];
        const TermSet t = term_set(p, tau);
        const double pairs[7][2] = {
            {t.U, oracle::term_U(p, tau)},
            {t.R, oracle::term_R(p, tau)},
            {t.LWLWM, oracle::term_LWLWM(p, tau)},
            {t.LW_R, oracle::term_LW_R(p, tau)},
            {t.DM_LWM, oracle::term_DM_LWM(p, tau)},
            {t.LWLWLWM, oracle::term_LWLWLWM(p, tau)},
            {t.DM_R, oracle::term_DM_R(p, tau)},
        };
        for (const auto& pr : pairs)
            worst = std::max(worst, std::abs(pr[0] - pr[1]) /
                                        std::max(std::abs(pr[1]), 1e-300));
    }
    const double secs = elapsed_s(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "worst rel %.3e (tol 1e-10) over 100 sets, %.1fs (limit 60s)",
                  worst, secs);
    report(1, "terms vs quadrature oracle", worst < 1e-10 && secs < 60.0, buf);
}

// --- 2. Derivative engine vs Richardson FD + vega identity. ---------------
void criterion_2() {
    double worst_fd = 0.0, worst_vega = 0.0;
    for (double strike : {80.0, 90.0, 100.0, 110.0, 120.0}) {
        for (double tau : {0.25, 0.5, 1.0, 3.0}) {
            for (double y : {0.2, 0.3, 0.47, 0.6}) {
                const BsState st(std::log(100.0), y, tau, strike, 0.001);
                for (int a = 0; a <= 8; ++a) {
                    for (int b = 0; a + 2 * b <= 8; ++b) {
                        const double v = lambda_gamma_bs(st, {a, b});
                        const double f = oracle::lambda_gamma_bs_fd(st, a, b);
                        worst_fd = std::max(
                            worst_fd, std::abs(v - f) / (1.0 + std::abs(f)));
                    }
                }
                const double vega = oracle::vega_fd(st);
                const double identity = st.y * st.tau * lambda_gamma_bs(st, {0, 1});
                worst_vega = std::max(worst_vega, std::abs(vega - identity) /
                                                      (1.0 + std::abs(vega)));
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "worst FD rel %.3e (tol 1e-6), vega identity %.3e (tol 1e-7)",
                  worst_fd, worst_vega);
    report(2, "Lambda^a Gamma^b engine", worst_fd < 1e-6 && worst_vega < 1e-7, buf);
}

// --- 3. Order-scaling slopes in nu. ---------------------------------------
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> nus = {0.0125, 0.025, 0.05, 0.1};
    std::vector<double> strikes;
    for (double k = 70.0; k <= 130.0 + 1e-9; k += 2.5) strikes.push_back(k);

    auto max_err = [&](double nu, double rho, int which) {
        const HestonParams p(1.5, 0.2, nu, rho, 0.25, 0.001, 100.0);
        double worst = 0.0;
        for (double strike : strikes) {
            const OptionSpec opt(strike, 1.0);
            // Long-double reference: zc errors at small nu sit below the
            // double-precision quadrature noise floor.
            const long double ref = reference_call_hp<long double>(p, opt);
            const double approx = which == 0   ? price_o3(p, opt).price
                                  : which == 1 ? price_o4(p, opt).price
                                               : price_zero_corr(p, opt).price;
            worst = std::max(
                worst, std::abs(static_cast<double>(
                           static_cast<long double>(approx) - ref)));
        }
        return worst;
    };

    std::vector<double> e3, e4, ezc;
    for (double nu : nus) {
        e3.push_back(max_err(nu, -0.8, 0));
        e4.push_back(max_err(nu, -0.8, 1));
        ezc.push_back(max_err(nu, 0.0, 2));
    }
    const double s3 = loglog_slope(nus, e3);
    const double s4 = loglog_slope(nus, e4);
    const double szc = loglog_slope(nus, ezc);
    const double secs = elapsed_s(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "slopes o3 %.2f (>=2.7), o4 %.2f (>=3.6), zc %.2f (>=5.4), "
                  "%.0fs (limit 300s)",
                  s3, s4, szc, secs);
    report(3, "order scaling in nu", s3 >= 2.7 && s4 >= 3.6 && szc >= 5.4 && secs < 300.0, buf);
}

// --- 4. Figure 2 error bands. ---------------------------------------------
void criterion_4() {
    const HestonParams p = figure_params(2);
    double worst_o3 = -99.0, worst_o4 = -99.0;
    for (double strike = 80.0; strike <= 120.0 + 1e-9; strike += 2.5) {
        for (double tau : {0.25, 0.5, 1.0, 3.0}) {
            const OptionSpec opt(strike, tau);
            const double ref = price_reference(p, opt).price;
            const double l3 =
                std::log10(std::abs(price_o3(p, opt).price - ref) / ref);
            const double l4 =
                std::log10(std::abs(price_o4(p, opt).price - ref) / ref);
            worst_o3 = std::max(worst_o3, l3);
            worst_o4 = std::max(worst_o4, l4);
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max log10 rel err o3 %.2f (<= -4), o4 %.2f (<= -6.5)",
                  worst_o3, worst_o4);
    report(4, "figure-band reproduction", worst_o3 <= -4.0 && worst_o4 <= -6.5, buf);
}

// --- 5. Zero-corr dominance at rho = 0. -----------------------------------
void criterion_5() {
    bool ok = true;
    double worst_gap = 0.0;
    int nodes = 0;
    // Same error-comparison band as criterion 4 (K in [80, 120]); the
    // long-double reference keeps the tiny nu=5% errors above quadrature noise.
    for (int fig : {5, 6}) {
        const HestonParams p = figure_params(fig);
        for (double strike = 80.0; strike <= 120.0 + 1e-9; strike += 2.5) {
            for (double tau : {0.25, 0.5, 1.0, 3.0}) {
                const OptionSpec opt(strike, tau);
                const long double ref = reference_call_hp<long double>(p, opt, 384);
                const double e_zc = std::abs(static_cast<double>(
                    static_cast<long double>(price_zero_corr(p, opt).price) - ref));
                const double e_o2 = std::abs(static_cast<double>(
                    static_cast<long double>(price_o2(p, opt).price) - ref));
                ++nodes;
                if (e_zc > e_o2) {
                    ok = false;
                    worst_gap = std::max(worst_gap, e_zc - e_o2);
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "zc error <= o2 error at all %d grid nodes%s", nodes,
                  ok ? "" : " VIOLATED");
    report(5, "zero-corr dominance", ok, buf);
}

// --- 6. Reference pricer validity. ----------------------------------------
void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_parity = 0.0, worst_doubling = 0.0;
    for (int fig = 1; fig <= 6; ++fig) {
        const HestonParams p = figure_params(fig);
        for (double strike : {80.0, 100.0, 120.0}) {
            for (double tau : {0.25, 1.0, 3.0}) {
                const OptionSpec opt(strike, tau);
                const double call = price_reference(p, opt).price;
                const double put = reference_put(p, opt);
                const double rhs = p.s0 - strike * std::exp(-p.r * tau);
                worst_parity = std::max(
                    worst_parity,
                    std::abs(call - put - rhs) / (1.0 + std::abs(rhs)));
                QuadratureConfig q768;
                q768.n_nodes = 768;
                const double dbl = price_reference(p, opt, q768).price;
                worst_doubling = std::max(
                    worst_doubling, std::abs(call - dbl) / (1.0 + std::abs(dbl)));
            }
        }
    }

    double worst_sigmas = 0.0;
    for (int fig = 1; fig <= 6; ++fig) {
        const HestonParams p = figure_params(fig);
        const OptionSpec opt(100.0, 1.0);
        McConfig c;
        c.n_paths = 10000000;
        c.n_steps_per_year = 200;
        c.seed = 31415 + static_cast<std::uint64_t>(fig);
        const McResult mc = mc_price(p, opt, c);
        const double ref = price_reference(p, opt).price;
        worst_sigmas =
            std::max(worst_sigmas, std::abs(mc.price - ref) / mc.std_error);
    }
    const double secs = elapsed_s(t0);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "parity %.2e (tol 1e-10), node doubling %.2e (tol 1e-10), "
                  "MC worst %.2f sigma (tol 3), %.0fs (limit 900s)",
                  worst_parity, worst_doubling, worst_sigmas, secs);
    report(6, "reference pricer validity",
           worst_parity < 1e-10 && worst_doubling < 1e-10 &&
               worst_sigmas < 3.0 && secs < 900.0,
           buf);
}

// --- 7. Timing speed-ups on task 1. ---------------------------------------
void criterion_7() {
    TimingTask task;  // task 1: 100 parameter sets
    const auto rows = run_timing(task, {Method::approx_o2, Method::approx_o3,
                                        Method::approx_o4},
                                 /*repetitions=*/15);
    double o2_s = 0.0, o4_s = 0.0, min_speedup = 1e300;
    for (const auto& row : rows) {
        if (row.method == Method::ref_fourier) continue;
        min_speedup = std::min(min_speedup, row.speedup);
        if (row.method == Method::approx_o2) o2_s = row.seconds;
        if (row.method == Method::approx_o4) o4_s = row.seconds;
    }
    const double ratio = o4_s / o2_s;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "speedups o2 %.1fx o3 %.1fx o4 %.1fx (each >= 10x), "
                  "o4/o2 cost ratio %.2f (in [1.0, 1.6])",
                  rows[1].speedup, rows[2].speedup, rows[3].speedup, ratio);
    report(7, "timing", min_speedup >= 10.0 && ratio >= 1.0 && ratio <= 1.6, buf);
}

// --- 8. Degenerate limit nu -> 0. -----------------------------------------
void criterion_8() {
    const HestonParams p(1.5, 0.2, 1e-6, -0.5, 0.25, 0.001, 100.0);
    const OptionSpec opt(100.0, 1.0);
    const double bs = bs_price(
        BsState(std::log(100.0), std::sqrt(v_squared(p, 1.0)), 1.0, 100.0, 0.001));

    const double deterministic[4] = {
        price_reference(p, opt).price, price_o2(p, opt).price,
        price_o3(p, opt).price, price_o4(p, opt).price};
    double worst = 0.0;
    for (double v : deterministic)
        worst = std::max(worst, std::abs(v - bs) / bs);

    McConfig c;
    c.n_paths = 1000000;
    c.n_steps_per_year = 200;
    c.seed = 2718;
    const McResult mc = mc_price(p, opt, c);
    const double mc_sigmas = std::abs(mc.price - bs) / mc.std_error;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "worst deterministic rel %.2e (tol 1e-6), MC %.2f sigma (tol 3)",
                  worst, mc_sigmas);
    report(8, "degenerate limit", worst < 1e-6 && mc_sigmas < 3.0, buf);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures == 0) {
        std::printf("acceptance: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
