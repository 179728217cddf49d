#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hestonx/approx.hpp"
#include "hestonx/model.hpp"
#include "hestonx/montecarlo.hpp"
#include "hestonx/reference.hpp"

namespace hestonx {

struct SweepSpec {
    std::vector<double> strikes;    // ascending
    std::vector<double> maturities;
    HestonParams params;
    std::vector<Method> methods;
    QuadratureConfig quad{};

    void validate() const {
        if (strikes.empty() || maturities.empty() || methods.empty())
            throw DomainError("sweep", "strikes/maturities/methods must be non-empty");
        if (!std::is_sorted(strikes.begin(), strikes.end()))
            throw DomainError("strikes", "strikes must be ascending");
    }
};

struct SweepRow {
    double strike = 0.0;
    double maturity = 0.0;
    Method method = Method::approx_o2;
    double price = 0.0;
    double ref_price = 0.0;
    double log10_rel_err = 0.0;
    bool failed = false;
};

struct SweepReport {
    std::vector<SweepRow> rows;
};

// Per (K, tau): one reference evaluation shared across methods; per-cell
// failures are recorded without aborting the sweep.
inline SweepReport run_sweep(const SweepSpec& s) {
    s.validate();
    SweepReport report;
    report.rows.reserve(s.strikes.size() * s.maturities.size() * s.methods.size());
    for (double tau : s.maturities) {
        for (double strike : s.strikes) {
            const OptionSpec opt(strike, tau);
            double ref = std::nan("");
            bool ref_ok = true;
            try {
                ref = price_reference(s.params, opt, s.quad).price;
            } catch (const std::exception&) {
                ref_ok = false;
            }
            for (Method m : s.methods) {
                SweepRow row;
                row.strike = strike;
                row.maturity = tau;
                row.method = m;
                row.ref_price = ref;
                try {
                    if (!ref_ok) throw QuadratureNonConvergence("no reference");
                    switch (m) {
                        case Method::ref_fourier: row.price = ref; break;
                        case Method::approx_o2:
                            row.price = price_o2(s.params, opt).price;
                            break;
                        case Method::approx_o3:
                            row.price = price_o3(s.params, opt).price;
                            break;
                        case Method::approx_o4:
                            row.price = price_o4(s.params, opt).price;
                            break;
                        case Method::approx_zero_corr:
                            row.price = price_zero_corr(s.params, opt).price;
                            break;
                        default:
                            throw DomainError("method", "unsupported sweep method");
                    }
                    row.log10_rel_err =
                        std::log10(std::abs(row.price - ref) / std::abs(ref));
                } catch (const std::exception&) {
                    row.failed = true;
                    row.price = std::nan("");
                    row.log10_rel_err = std::nan("");
                }
                report.rows.push_back(row);
            }
        }
    }
    return report;
}

// Figure presets: S0=100, r=0.001, v0=0.25, kappa=1.5, theta=0.2; (rho, nu)
// per figure; K in {70, 72.5, ..., 130}; tau in {0.25, 0.5, 1, 3}.
inline SweepSpec figure_sweep(int figure) {
    double rho = 0.0, nu = 0.0;
    switch (figure) {
        case 1: rho = -0.2; nu = 0.05; break;
        case 2: rho = -0.8; nu = 0.05; break;
        case 3: rho = -0.2; nu = 0.5; break;
        case 4: rho = -0.8; nu = 0.5; break;
        case 5: rho = 0.0; nu = 0.05; break;
        case 6: rho = 0.0; nu = 0.5; break;
        default: throw DomainError("figure", "figure must be 1..6");
    }
    SweepSpec s{{},
                {0.25, 0.5, 1.0, 3.0},
                HestonParams(1.5, 0.2, nu, rho, 0.25, 0.001, 100.0),
                {},
                {}};
    for (double k = 70.0; k <= 130.0 + 1e-9; k += 2.5) s.strikes.push_back(k);
    if (figure <= 4)
        s.methods = {Method::approx_o2, Method::approx_o3, Method::approx_o4};
    else
        s.methods = {Method::approx_o2, Method::approx_zero_corr};
    return s;
}

inline void write_sweep_csv(const SweepReport& report, std::ostream& out) {
    out << "strike,maturity,method,price,ref_price,log10_rel_err\n";
    char buf[256];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s,%.17g,%.17g,%.17g\n",
                      row.strike, row.maturity, method_name(row.method), row.price,
                      row.ref_price, row.log10_rel_err);
        out << buf;
    }
}

inline SweepReport read_sweep_csv(std::istream& in) {
    SweepReport report;
    std::string line;
    std::getline(in, line);  // header
    if (line != "strike,maturity,method,price,ref_price,log10_rel_err")
        throw DomainError("csv", "unexpected sweep CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        SweepRow row;
        std::getline(ss, field, ',');
        row.strike = std::stod(field);
        std::getline(ss, field, ',');
        row.maturity = std::stod(field);
        std::getline(ss, field, ',');
        if (field == "ref") row.method = Method::ref_fourier;
        else if (field == "o2") row.method = Method::approx_o2;
        else if (field == "o3") row.method = Method::approx_o3;
        else if (field == "o4") row.method = Method::approx_o4;
        else if (field == "zc") row.method = Method::approx_zero_corr;
        else if (field == "mc") row.method = Method::monte_carlo;
        else throw DomainError("method", "unknown method in CSV: " + field);
        std::getline(ss, field, ',');
        row.price = std::stod(field);
        std::getline(ss, field, ',');
        row.ref_price = std::stod(field);
        std::getline(ss, field, ',');
        row.log10_rel_err = std::stod(field);
        row.failed = std::isnan(row.price);
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Timing tasks

struct TimingTask {
    enum class Id { t1_100, t2_1000, t3_10000 };
    Id task_id = Id::t1_100;
    std::uint64_t sampler_seed = 20240101;

    int n_param_sets() const noexcept {
        switch (task_id) {
            case Id::t1_100: return 100;
            case Id::t2_1000: return 1000;
            case Id::t3_10000: return 10000;
        }
        return 0;
    }
    const char* name() const noexcept {
        switch (task_id) {
            case Id::t1_100: return "1";
            case Id::t2_1000: return "2";
            case Id::t3_10000: return "3";
        }
        return "?";
    }
};

struct TimingRow {
    std::string task;
    Method method;
    double seconds = 0.0;
    double speedup = 0.0;  // vs reference pricer; 1 for the reference itself
};

// A batch of 100 options covering OTM/ATM/ITM strikes and short-to-long
// maturities (10 x 10 grid).
inline std::vector<OptionSpec> timing_option_batch() {
    std::vector<OptionSpec> batch;
    const double maturities[10] = {1.0 / 12, 0.25, 0.5,  0.75, 1.0,
                                   1.5,      2.0,  3.0,  4.0,  5.0};
    for (int i = 0; i < 10; ++i) {
        const double strike = 70.0 + i * (60.0 / 9.0);
        for (double tau : maturities) batch.emplace_back(strike, tau);
    }
    return batch;
}

// Uniform sampling from a documented Feller-respecting box:
// kappa in [0.5,3], theta in [0.05,0.5], nu in [0.05, 0.95*sqrt(2 kappa theta)],
// rho in [-0.9,0], v0 in [0.05,0.5], r in [0,0.05]; s0 = 100.
inline std::vector<HestonParams> sample_parameter_sets(int n, std::uint64_t seed) {
    std::vector<HestonParams> sets;
    sets.reserve(n);
    hestonx::detail::PathRng rng(seed, 0x7a11ed);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * rng.next_uniform();
    };
    for (int i = 0; i < n; ++i) {
        const double kappa = uni(0.5, 3.0);
        const double theta = uni(0.05, 0.5);
        const double nu_hi = 0.95 * std::sqrt(2.0 * kappa * theta);
        const double nu = uni(0.05, nu_hi);
        const double rho = uni(-0.9, 0.0);
        const double v0 = uni(0.05, 0.5);
        const double r = uni(0.0, 0.05);
        sets.emplace_back(kappa, theta, nu, rho, v0, r, 100.0);
    }
    return sets;
}

// FNV-1a over the sampled parameter bytes, for determinism checks.
inline std::uint64_t parameter_set_hash(const std::vector<HestonParams>& sets) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& p : sets) {
        mix(p.kappa);
        mix(p.theta);
        mix(p.nu);
        mix(p.rho);
        mix(p.v0);
        mix(p.r);
    }
    return h;
}

// Wall-clock seconds per method over the full (param set x option) workload;
// median of `repetitions` runs. Speed-up is measured against the reference
// pricer on the identical workload.
inline std::vector<TimingRow> run_timing(const TimingTask& task,
                                         const std::vector<Method>& methods,
                                         int repetitions = 5,
                                         const QuadratureConfig& quad = {}) {
    const auto batch = timing_option_batch();
    const auto sets = sample_parameter_sets(task.n_param_sets(), task.sampler_seed);

    auto one_pass = [&](Method m) {
        volatile double sink = 0.0;
        const auto t0 = std::chrono::steady_clock::now();
        for (const auto& p : sets) {
            for (const auto& opt : batch) {
                switch (m) {
                    case Method::ref_fourier:
                        sink = sink + price_reference(p, opt, quad).price;
                        break;
                    case Method::approx_o2:
                        sink = sink + price_o2(p, opt).price;
                        break;
                    case Method::approx_o3:
                        sink = sink + price_o3(p, opt).price;
                        break;
                    case Method::approx_o4:
                        sink = sink + price_o4(p, opt).price;
                        break;
                    default:
                        throw DomainError("method", "unsupported timing method");
                }
            }
        }
        (void)sink;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };

    std::vector<Method> order;
    order.push_back(Method::ref_fourier);
    for (Method m : methods)
        if (m != Method::ref_fourier) order.push_back(m);

    // Repetitions are interleaved across methods and the per-method minimum
    // is kept: interleaving cancels slow machine-load drift across the run,
    // and the best observed time is the least contaminated by scheduler
    // interference on a shared core.
    std::vector<double> best(order.size(),
                             std::numeric_limits<double>::infinity());
    for (int rep = 0; rep < repetitions; ++rep)
        for (std::size_t i = 0; i < order.size(); ++i)
            best[i] = std::min(best[i], one_pass(order[i]));

    std::vector<TimingRow> rows;
    rows.push_back({task.name(), Method::ref_fourier, best[0], 1.0});
    for (std::size_t i = 1; i < order.size(); ++i)
        rows.push_back({task.name(), order[i], best[i], best[0] / best[i]});
    return rows;
}

inline void write_timing_csv(const std::vector<TimingRow>& rows, std::ostream& out) {
    out << "task,method,seconds,speedup\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.6g,%.6g\n", row.task.c_str(),
                      method_name(row.method), row.seconds, row.speedup);
        out << buf;
    }
}

}  // namespace hestonx
