#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "hestonx/blackscholes.hpp"
#include "hestonx/model.hpp"
#include "hestonx/terms.hpp"

namespace hestonx {

enum class ApproxOrder { O2_baseline, O3_thm41, O4_thm42, O6_zero_corr };

namespace detail {

inline double horizon_factor(double r, double tau) noexcept {
    return r > 0.0 ? std::min(1.0 / r, tau) : tau;
}

// Magnitude-sorted compensated summation: limits cancellation between the
// large leading Black-Scholes value and small correction terms at high nu.
// Exact zeros are dropped first, so formulas whose extra terms vanish (e.g.
// the rho-terms at rho = 0) assemble bit-identically to the shorter ones.
template <std::size_t N>
double sum_terms(const std::array<double, N>& input, std::size_t n_in) {
    std::array<double, N> terms;
    std::size_t n = 0;
    for (std::size_t i = 0; i < n_in; ++i)
        if (input[i] != 0.0) terms[n++] = input[i];
    std::stable_sort(terms.begin(), terms.begin() + n,
                     [](double a, double b) { return std::abs(a) > std::abs(b); });
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = terms[i] - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

struct ApproxCtx {
    BsState st;
    TermSet ts;
    mutable LgbTable ev;  // shared operator reps + transcendentals for lgb terms

    ApproxCtx(const HestonParams& p, const OptionSpec& spec)
        : st(std::log(p.s0), std::sqrt(v_squared(p, spec.tau())), spec.tau(),
             spec.strike, p.r),
          ts(term_set(p, spec.tau())),
          ev(st) {}

    double lgb(int a, int b) const { return ev(a, b); }
};

class ScopedTimer {
public:
    explicit ScopedTimer(double& out) : out_(out), t0_(clock::now()) {}
    ~ScopedTimer() {
        out_ = std::chrono::duration<double>(clock::now() - t0_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    double& out_;
    clock::time_point t0_;
};

}  // namespace detail

// Baseline formula: BS + LambdaGamma(BS)*U + Gamma^2(BS)*R.
inline PriceResult price_o2(const HestonParams& p, const OptionSpec& spec) {
    PriceResult res;
    detail::ScopedTimer timer(res.elapsed);
    detail::ApproxCtx c(p, spec);
    std::array<double, 3> terms{
        c.lgb(0, 0),
        c.lgb(1, 1) * c.ts.U,
        c.lgb(0, 2) * c.ts.R,
    };
    res.price = detail::sum_terms(terms, terms.size());
    res.method = Method::approx_o2;
    const double arho = std::abs(p.rho);
    res.error_indicator = p.nu * p.nu * (arho + p.nu) * (arho + p.nu) *
                          detail::horizon_factor(p.r, spec.tau());
    return res;
}

// Five-term formula, error order nu^3 (|rho| + |rho|^3 + nu).
inline PriceResult price_o3(const HestonParams& p, const OptionSpec& spec) {
    PriceResult res;
    detail::ScopedTimer timer(res.elapsed);
    detail::ApproxCtx c(p, spec);
    std::array<double, 5> terms{
        c.lgb(0, 0),
        c.lgb(1, 1) * c.ts.U,
        c.lgb(0, 2) * c.ts.R,
        0.5 * c.lgb(2, 2) * c.ts.U * c.ts.U,
        0.5 * p.rho * p.rho * c.lgb(2, 1) * c.ts.LWLWM,
    };
    res.price = detail::sum_terms(terms, terms.size());
    res.method = Method::approx_o3;
    const double arho = std::abs(p.rho);
    res.error_indicator = p.nu * p.nu * p.nu * (arho + arho * arho * arho + p.nu) *
                          detail::horizon_factor(p.r, spec.tau());
    return res;
}

// Twelve-term formula, error order nu^4 (1 + rho^2(1+rho^2) + |rho| nu (1+rho^2)).
inline PriceResult price_o4(const HestonParams& p, const OptionSpec& spec) {
    PriceResult res;
    detail::ScopedTimer timer(res.elapsed);
    detail::ApproxCtx c(p, spec);
    const TermSet& t = c.ts;
    const double rho = p.rho, rho2 = rho * rho;
    std::array<double, 11> terms{
        c.lgb(0, 0),
        c.lgb(1, 1) * t.U,
        0.5 * c.lgb(2, 2) * t.U * t.U,
        (1.0 / 6.0) * c.lgb(3, 3) * t.U * t.U * t.U,
        c.lgb(1, 3) * t.U * t.R,
        0.5 * rho2 * c.lgb(2, 1) * t.LWLWM,
        rho * c.lgb(1, 2) * (t.LW_R + 0.25 * t.DM_LWM),
        0.5 * rho2 * c.lgb(3, 2) * t.U * t.LWLWM,
        0.5 * rho * rho2 * c.lgb(3, 1) * t.LWLWLWM,
        c.lgb(0, 2) * t.R,
    };
    res.price = detail::sum_terms(terms, terms.size());
    res.method = Method::approx_o4;
    const double arho = std::abs(rho);
    const double nu = p.nu;
    res.error_indicator = nu * nu * nu * nu *
                          (1.0 + rho2 * (1.0 + rho2) + arho * nu * (1.0 + rho2)) *
                          detail::horizon_factor(p.r, spec.tau());
    return res;
}

// Uncorrelated-model formula, error order nu^6. Requires rho == 0.
inline PriceResult price_zero_corr(const HestonParams& p, const OptionSpec& spec) {
    if (p.rho != 0.0)
        throw RhoNotZero("price_zero_corr requires rho == 0, got rho = " +
                         std::to_string(p.rho));
    PriceResult res;
    detail::ScopedTimer timer(res.elapsed);
    detail::ApproxCtx c(p, spec);
    std::array<double, 4> terms{
        c.lgb(0, 0),
        c.lgb(0, 2) * c.ts.R,
        0.5 * c.lgb(0, 4) * c.ts.R * c.ts.R,
        0.5 * c.lgb(0, 3) * c.ts.DM_R,
    };
    res.price = detail::sum_terms(terms, terms.size());
    res.method = Method::approx_zero_corr;
    const double nu2 = p.nu * p.nu;
    res.error_indicator = nu2 * nu2 * nu2 * detail::horizon_factor(p.r, spec.tau());
    return res;
}

inline PriceResult price_approx(ApproxOrder order, const HestonParams& p,
                                const OptionSpec& spec) {
    switch (order) {
        case ApproxOrder::O2_baseline: return price_o2(p, spec);
        case ApproxOrder::O3_thm41: return price_o3(p, spec);
        case ApproxOrder::O4_thm42: return price_o4(p, spec);
        case ApproxOrder::O6_zero_corr: return price_zero_corr(p, spec);
    }
    throw std::invalid_argument("unknown approximation order");
}

}  // namespace hestonx
