#pragma once

// Independent validation paths for the closed-form machinery: the expansion
// terms re-evaluated by nested adaptive quadrature of their defining
// integrals, and the derivative engine re-evaluated by high-order finite
// differences. Nothing here shares code with the closed forms it checks;
// used only by the test suites and the `check` command.

#include <cmath>
#include <vector>

#include "hestonx/blackscholes.hpp"
#include "hestonx/model.hpp"
#include "hestonx/quadrature.hpp"

namespace hestonx::oracle {

namespace detail {

struct Kernels {
    const HestonParams& p;
    double tau;

    // E_t[sigma_s^2] with t = 0.
    double cond_var(double s) const {
        return p.theta + (p.v0 - p.theta) * std::exp(-p.kappa * s);
    }
    double phi(double z) const {
        return (1.0 - std::exp(-p.kappa * (tau - z))) / p.kappa;
    }
};

inline constexpr double kAbsTol = 1e-13;
inline constexpr double kRelTol = 1e-12;

}  // namespace detail

// (rho/2) L[W,M] = (rho nu / 2) int E[sigma^2] phi ds
inline double term_U(const HestonParams& p, double tau) {
    detail::Kernels k{p, tau};
    const double integral = integrate_adaptive(
        [&](double s) { return k.cond_var(s) * k.phi(s); }, 0.0, tau,
        detail::kAbsTol, detail::kRelTol);
    return 0.5 * p.rho * p.nu * integral;
}

// (1/8) D[M,M] = (nu^2/8) int E[sigma^2] phi^2 ds
inline double term_R(const HestonParams& p, double tau) {
    detail::Kernels k{p, tau};
    const double integral = integrate_adaptive(
        [&](double s) {
            const double f = k.phi(s);
            return k.cond_var(s) * f * f;
        },
        0.0, tau, detail::kAbsTol, detail::kRelTol);
    return 0.125 * p.nu * p.nu * integral;
}

// L[W, L[W,M]] = nu^2 int E[sigma_u^2] (int_u^T e^{-k(z-u)} phi(z) dz) du
inline double term_LWLWM(const HestonParams& p, double tau) {
    detail::Kernels k{p, tau};
    auto inner = [&](double u) {
        return integrate_adaptive(
            [&](double z) { return std::exp(-p.kappa * (z - u)) * k.phi(z); }, u,
            tau, detail::kAbsTol * 0.1, detail::kRelTol * 0.1);
    };
    const double integral = integrate_adaptive(
        [&](double u) { return k.cond_var(u) * inner(u); }, 0.0, tau,
        detail::kAbsTol, detail::kRelTol);
    return p.nu * p.nu * integral;
}

// L[W, (1/8)D[M,M]] = (nu^3/8) int E[sigma_u^2] (int_u^T e^{-k(z-u)} phi^2 dz) du
inline double term_LW_R(const HestonParams& p, double tau) {
    detail::Kernels k{p, tau};
    auto inner = [&](double u) {
        return integrate_adaptive(
            [&](double z) {
                const double f = k.phi(z);
                return std::exp(-p.kappa * (z - u)) * f * f;
            },
            u, tau, detail::kAbsTol * 0.1, detail::kRelTol * 0.1);
    };
    const double integral = integrate_adaptive(
        [&](double u) { return k.cond_var(u) * inner(u); }, 0.0, tau,
        detail::kAbsTol, detail::kRelTol);
    return 0.125 * p.nu * p.nu * p.nu * integral;
}

// D[M, L[W,M]] = nu^3 int E[sigma_u^2] phi(u) (int_u^T e^{-k(z-u)} phi(z) dz) du
inline double term_DM_LWM(const HestonParams& p, double tau) {
    detail::Kernels k{p, tau};
    auto inner = [&](double u) {
        return integrate_adaptive(
            [&](double z) { return std::exp(-p.kappa * (z - u)) * k.phi(z); }, u,
            tau, detail::kAbsTol * 0.1, detail::kRelTol * 0.1);
    };
    const double integral = integrate_adaptive(
        [&](double u) { return k.cond_var(u) * k.phi(u) * inner(u); }, 0.0, tau,
        detail::kAbsTol, detail::kRelTol);
    return p.nu * p.nu * p.nu * integral;
}

// L[W, L[W, L[W,M]]]: triple-nested kernel.
inline double term_LWLWLWM(const HestonParams& p, double tau) {
    detail::Kernels k{p, tau};
    auto innermost = [&](double s) {
        return integrate_adaptive(
            [&](double z) { return std::exp(-p.kappa * (z - s)) * k.phi(z); }, s,
            tau, detail::kAbsTol * 0.01, detail::kRelTol * 0.01);
    };
    auto middle = [&](double u) {
        return integrate_adaptive(
            [&](double s) { return innermost(s) * std::exp(-p.kappa * (s - u)); },
            u, tau, detail::kAbsTol * 0.1, detail::kRelTol * 0.1);
    };
    const double integral = integrate_adaptive(
        [&](double u) { return k.cond_var(u) * middle(u); }, 0.0, tau,
        detail::kAbsTol, detail::kRelTol);
    return p.nu * p.nu * p.nu * integral;
}

// D[M, (1/8)D[M,M]] = (nu^4/8) int E[sigma_u^2] phi(u)
//                       (int_u^T e^{-k(z-u)} phi(z)^2 dz) du
inline double term_DM_R(const HestonParams& p, double tau) {
    detail::Kernels k{p, tau};
    auto inner = [&](double u) {
        return integrate_adaptive(
            [&](double z) {
                const double f = k.phi(z);
                return std::exp(-p.kappa * (z - u)) * f * f;
            },
            u, tau, detail::kAbsTol * 0.1, detail::kRelTol * 0.1);
    };
    const double integral = integrate_adaptive(
        [&](double u) { return k.cond_var(u) * k.phi(u) * inner(u); }, 0.0, tau,
        detail::kAbsTol, detail::kRelTol);
    const double nu2 = p.nu * p.nu;
    return 0.125 * nu2 * nu2 * integral;
}

// (1/tau) int E[sigma^2] ds, for v_squared checks.
inline double v_squared(const HestonParams& p, double tau) {
    detail::Kernels k{p, tau};
    return integrate_adaptive([&](double s) { return k.cond_var(s); }, 0.0, tau,
                              detail::kAbsTol, detail::kRelTol) /
           tau;
}

// ---------------------------------------------------------------------------
// Finite-difference derivative oracle.

// Fornberg weights for the m-th derivative at 0 from the given grid points.
// Computed in Real; high-order stencils need long double here because weight
// rounding is amplified by 1/h^m when the stencil sum cancels.
template <class Real>
std::vector<Real> fornberg_weights(int m, const std::vector<Real>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<Real>> c(n, std::vector<Real>(m + 1, Real(0)));
    c[0][0] = Real(1);
    Real c1 = 1;
    for (int i = 1; i < n; ++i) {
        Real c2 = 1;
        for (int j = 0; j < i; ++j) {
            const Real c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = std::min(i, m); k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - x[i - 1] * c[i - 1][k]) / c2;
                c[i][0] = -c1 * x[i - 1] * c[i - 1][0] / c2;
            }
            for (int k = std::min(i, m); k >= 1; --k)
                c[j][k] = (x[i] * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = x[i] * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<Real> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

namespace detail {

// Black-Scholes call in long double; FD stencils up to 8th order lose ~10
// digits to cancellation, so the function values need extra precision.
inline long double bs_price_ld(long double x, long double y, long double tau,
                               long double strike, long double r) {
    const long double sd = y * std::sqrt(tau);
    const long double dp = (x - std::log(strike) + r * tau) / sd + 0.5L * sd;
    const long double dm = dp - sd;
    auto cdf = [](long double z) {
        return 0.5L * std::erfc(-z / std::sqrt(2.0L));
    };
    return std::exp(x) * cdf(dp) - strike * std::exp(-r * tau) * cdf(dm);
}

// k-th derivative of BS in log-price x, centered high-order stencil,
// Richardson-extrapolated over h and h/2.
inline long double fd_dx_bs(const BsState& st, int k, long double h) {
    int n = k + 15;
    if (n % 2 == 0) ++n;  // symmetric stencil
    const int half = n / 2;
    std::vector<long double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = static_cast<long double>(i - half);
    const auto w = fornberg_weights<long double>(k, grid);

    auto eval = [&](long double step) {
        long double acc = 0.0L;
        for (int i = 0; i < n; ++i)
            acc += w[i] * bs_price_ld(st.x + (i - half) * step, st.y, st.tau,
                                      st.strike, st.r);
        return acc / std::pow(step, k);
    };

    const long double v1 = eval(h);
    const long double v2 = eval(h / 2);
    const auto p = static_cast<long double>(n - k);  // nominal accuracy order
    const long double f = std::pow(2.0L, p);
    return (f * v2 - v1) / (f - 1.0L);
}

}  // namespace detail

// Lambda^a Gamma^b (BS) via finite differences: Gamma^b Lambda^a expands to
// sum_j C(b,j) (-1)^{b-j} d^{a+b+j}/dx^{a+b+j}.
inline double lambda_gamma_bs_fd(const BsState& st, int a, int b) {
    const long double scale = st.y * std::sqrt(st.tau);
    const long double h = 0.30L * scale;
    long double result = 0.0L;
    long double binom = 1.0L;
    for (int j = 0; j <= b; ++j) {
        const long double sign = ((b - j) % 2 == 0) ? 1.0L : -1.0L;
        result += sign * binom * detail::fd_dx_bs(st, a + b + j, h);
        binom = binom * (b - j) / (j + 1.0L);
    }
    return static_cast<double>(result);
}

// dBS/dy by central differences (vega identity checks).
inline double vega_fd(const BsState& st) {
    const double h = 1e-5 * st.y;
    auto at = [&](double y) {
        return bs_price(BsState(st.x, y, st.tau, st.strike, st.r));
    };
    const double d1 = (at(st.y + h) - at(st.y - h)) / (2 * h);
    const double d2 = (at(st.y + h / 2) - at(st.y - h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

// Risk-neutral payoff integral against the lognormal density: an independent
// route to the Black-Scholes price itself.
inline double bs_price_quadrature(const BsState& st) {
    const double stdev = st.y * std::sqrt(st.tau);
    const double mean = st.x + (st.r - 0.5 * st.y * st.y) * st.tau;
    const double z_lo = (std::log(st.strike) - mean) / stdev;
    const double z_hi = z_lo + 14.0;
    const double integral = integrate_adaptive(
        [&](double z) {
            return (std::exp(mean + stdev * z) - st.strike) * norm_pdf(z);
        },
        z_lo, z_hi, 1e-14, 1e-13);
    return std::exp(-st.r * st.tau) * integral;
}

}  // namespace hestonx::oracle
