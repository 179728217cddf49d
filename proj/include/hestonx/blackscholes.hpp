#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>

#include "hestonx/model.hpp"

namespace hestonx {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

inline double norm_pdf(double z) noexcept {
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

// Phi via erfc: relatively accurate deep in the tails, where 1 - Phi(x)
// computed directly would lose all digits.
inline double norm_cdf(double z) noexcept {
    return 0.5 * std::erfc(-z * kInvSqrt2);
}

// State of the Black-Scholes kernel: log-price x, constant volatility y,
// time to maturity tau, strike and rate.
struct BsState {
    double x;       // log price
    double y;       // volatility, > 0
    double tau;     // time to maturity, > 0
    double strike;  // > 0
    double r;

    BsState(double x_, double y_, double tau_, double strike_, double r_)
        : x(x_), y(y_), tau(tau_), strike(strike_), r(r_) {
        if (!(y > 0.0)) throw DomainError("y", "volatility must be > 0");
        if (!(tau > 0.0)) throw DomainError("tau", "time to maturity must be > 0");
        if (!(strike > 0.0)) throw DomainError("strike", "strike must be > 0");
    }

    double d_plus() const noexcept {
        const double st = y * std::sqrt(tau);
        return (x - std::log(strike) + (r + 0.5 * y * y) * tau) / st;
    }
    double d_minus() const noexcept { return d_plus() - y * std::sqrt(tau); }
};

// Requested derivative order: a applications of Lambda = d/dx composed with
// b applications of Gamma = d^2/dx^2 - d/dx.
struct DerivOrder {
    int a = 0;
    int b = 0;
};

class OrderOutOfRange : public std::invalid_argument {
public:
    explicit OrderOutOfRange(const std::string& what) : std::invalid_argument(what) {}
};

inline constexpr int kMaxOperatorWeight = 12;  // supported a + 2b

inline double bs_price(const BsState& s) {
    const double dp = s.d_plus();
    const double dm = s.d_minus();
    return std::exp(s.x) * norm_cdf(dp) -
           s.strike * std::exp(-s.r * s.tau) * norm_cdf(dm);
}

namespace detail {

// Closed representation of Lambda^a Gamma^b (BS):
//
//   value = A * e^x Phi(d+) + B * K e^{-r tau} Phi(d-) + G * P(d+),
//
// where G = Gamma(BS) = e^x phi_pdf(d+) / (y sqrt(tau)) and P is a polynomial.
// One application of d/dx maps (A, B, P) to (A, 0, P*(1 - z*s) + P'*s + A + B)
// with s = 1/(y sqrt(tau)), using e^x phi_pdf(d+) = K e^{-r tau} phi_pdf(d-).
// Each d/dx raises deg P by exactly one.
struct LgbRep {
    static constexpr int kCap = kMaxOperatorWeight + 2;
    double a_coef = 1.0;
    double b_coef = -1.0;
    std::array<double, kCap> p{};  // coefficients of P in d+, low to high
    int deg = -1;                  // -1 encodes P == 0

    void apply_dx(double s) noexcept {
        // P <- P*(1 - z*s) + P'*s, in place: new p[k] depends on the original
        // p[k-1], p[k], p[k+1], so one saved value suffices while ascending.
        if (deg >= 0) {
            double prev = 0.0;  // original p[k-1]
            for (int k = 0; k < deg; ++k) {
                const double cur = p[k];
                p[k] = cur + (k + 1) * s * p[k + 1] - s * prev;
                prev = cur;
            }
            const double top = p[deg];
            p[deg] = top - s * prev;
            p[deg + 1] = -s * top;
            ++deg;
        }
        const double c = a_coef + b_coef;
        if (c != 0.0) {
            p[0] += c;
            if (deg < 0) deg = 0;
        }
        b_coef = 0.0;
    }

    void apply_gamma(double s) noexcept {
        LgbRep once = *this;
        once.apply_dx(s);
        LgbRep twice = once;
        twice.apply_dx(s);
        a_coef = twice.a_coef - once.a_coef;
        b_coef = twice.b_coef - once.b_coef;
        deg = std::max(twice.deg, once.deg);
        for (int k = 0; k <= deg; ++k) p[k] = twice.p[k] - once.p[k];
        while (deg >= 0 && p[deg] == 0.0) --deg;
    }
};

}  // namespace detail

// Transcendental pieces shared by every Lambda^a Gamma^b evaluation at a
// fixed state; precompute once when assembling multi-term expansions.
struct BsEval {
    double s;          // 1/(y sqrt tau)
    double dp;         // d+
    double ex_cdf_dp;  // e^x Phi(d+)
    double kd_cdf_dm;  // K e^{-r tau} Phi(d-)
    double g;          // e^x n(d+) * s = Gamma(BS)

    explicit BsEval(const BsState& st) {
        const double sqrt_tau = std::sqrt(st.tau);
        s = 1.0 / (st.y * sqrt_tau);
        dp = st.d_plus();
        ex_cdf_dp = std::exp(st.x) * norm_cdf(dp);
        kd_cdf_dm =
            st.strike * std::exp(-st.r * st.tau) * norm_cdf(dp - st.y * sqrt_tau);
        g = std::exp(st.x) * norm_pdf(dp) * s;
    }
};

namespace detail {

inline double eval_lgb_rep(const LgbRep& rep, const BsEval& ev) {
    double value = 0.0;
    if (rep.a_coef != 0.0) value += rep.a_coef * ev.ex_cdf_dp;
    if (rep.b_coef != 0.0) value += rep.b_coef * ev.kd_cdf_dm;
    if (rep.deg >= 0) {
        double poly = rep.p[rep.deg];
        for (int k = rep.deg - 1; k >= 0; --k) poly = poly * ev.dp + rep.p[k];
        value += ev.g * poly;
    }
    return value;
}

}  // namespace detail

// (Lambda^a o Gamma^b)(BS) via the closed polynomial recursion (no numerical
// differentiation), reusing a precomputed BsEval.
inline double lambda_gamma_bs(const BsEval& ev, DerivOrder o) {
    if (o.a < 0 || o.b < 0 || o.a + 2 * o.b > kMaxOperatorWeight)
        throw OrderOutOfRange("derivative order (a=" + std::to_string(o.a) +
                              ", b=" + std::to_string(o.b) + ") outside a+2b <= " +
                              std::to_string(kMaxOperatorWeight));
    detail::LgbRep rep;
    for (int i = 0; i < o.b; ++i) rep.apply_gamma(ev.s);
    for (int i = 0; i < o.a; ++i) rep.apply_dx(ev.s);
    return detail::eval_lgb_rep(rep, ev);
}

inline double lambda_gamma_bs(const BsState& st, DerivOrder o) {
    if (o.a == 0 && o.b == 0) return bs_price(st);
    return lambda_gamma_bs(BsEval(st), o);
}

namespace detail {

// State-free representation of Lambda^a Gamma^b (BS): the polynomial
// coefficients in d+ are themselves polynomials in s = 1/(y sqrt tau) with
// small integer coefficients, so the whole recursion can be run once per
// process with s kept symbolic. Per state, evaluation is then two nested
// Horner passes and no operator applications at all.
struct SymLgbRep {
    static constexpr int kCap = LgbRep::kCap;
    double a_coef = 1.0;
    double b_coef = -1.0;
    double m[kCap][kCap] = {};  // m[k][j]: coefficient of d+^k s^j
    int deg = -1;               // max power of d+ (-1 encodes P == 0)
    int sdeg[kCap] = {};        // max power of s per d+ power

    void apply_dx() noexcept {
        double q[kCap][kCap] = {};
        int qs[kCap] = {};
        int qdeg = -1;
        // P <- P*(1 - z*s) + P'*s; every s multiplication shifts j by one.
        for (int k = 0; k <= deg; ++k) {
            for (int j = 0; j <= sdeg[k]; ++j) {
                const double c = m[k][j];
                if (c == 0.0) continue;
                q[k][j] += c;
                qs[k] = std::max(qs[k], j);
                q[k + 1][j + 1] -= c;
                qs[k + 1] = std::max(qs[k + 1], j + 1);
                if (k >= 1) {
                    q[k - 1][j + 1] += k * c;
                    qs[k - 1] = std::max(qs[k - 1], j + 1);
                }
            }
        }
        if (deg >= 0) qdeg = deg + 1;
        const double c = a_coef + b_coef;
        if (c != 0.0) {
            q[0][0] += c;
            if (qdeg < 0) qdeg = 0;
        }
        std::memcpy(m, q, sizeof(m));
        std::memcpy(sdeg, qs, sizeof(sdeg));
        deg = qdeg;
        b_coef = 0.0;
    }

    void apply_gamma() noexcept {
        SymLgbRep once = *this;
        once.apply_dx();
        SymLgbRep twice = once;
        twice.apply_dx();
        a_coef = twice.a_coef - once.a_coef;
        b_coef = twice.b_coef - once.b_coef;
        deg = std::max(twice.deg, once.deg);
        for (int k = 0; k <= deg; ++k) {
            sdeg[k] = std::max(twice.sdeg[k], once.sdeg[k]);
            for (int j = 0; j <= sdeg[k]; ++j)
                m[k][j] = twice.m[k][j] - once.m[k][j];
            while (sdeg[k] > 0 && m[k][sdeg[k]] == 0.0) --sdeg[k];
        }
        while (deg >= 0) {
            bool all_zero = true;
            for (int j = 0; j <= sdeg[deg]; ++j)
                if (m[deg][j] != 0.0) all_zero = false;
            if (!all_zero) break;
            --deg;
        }
    }
};

// Sparse flattening of a SymLgbRep: the nonzero monomials c * d+^k * s^j,
// evaluated against per-state power tables as an independent-term dot
// product (no serial Horner dependency chain).
struct FlatLgbRep {
    struct Mono {
        double c;
        std::uint8_t k, j;
    };
    double a_coef = 0.0;
    double b_coef = 0.0;
    int n = 0;
    int max_pow = 0;  // largest k or j used
    Mono mono[SymLgbRep::kCap * SymLgbRep::kCap];
};

struct SymLgbTables {
    static constexpr int kMaxA = 4;
    static constexpr int kMaxB = 4;
    SymLgbRep reps[kMaxA + 1][kMaxB + 1];
    FlatLgbRep flat[kMaxA + 1][kMaxB + 1];
    int max_pow = 0;

    SymLgbTables() noexcept {
        for (int b = 1; b <= kMaxB; ++b) {
            reps[0][b] = reps[0][b - 1];
            reps[0][b].apply_gamma();
        }
        for (int b = 0; b <= kMaxB; ++b)
            for (int a = 1; a <= kMaxA; ++a) {
                if (a + 2 * b > kMaxOperatorWeight) break;
                reps[a][b] = reps[a - 1][b];
                reps[a][b].apply_dx();
            }
        for (int b = 0; b <= kMaxB; ++b)
            for (int a = 0; a <= kMaxA; ++a) {
                if (a + 2 * b > kMaxOperatorWeight) continue;
                const SymLgbRep& r = reps[a][b];
                FlatLgbRep& f = flat[a][b];
                f.a_coef = r.a_coef;
                f.b_coef = r.b_coef;
                for (int k = 0; k <= r.deg; ++k)
                    for (int j = 0; j <= r.sdeg[k]; ++j)
                        if (r.m[k][j] != 0.0) {
                            f.mono[f.n++] = {r.m[k][j],
                                             static_cast<std::uint8_t>(k),
                                             static_cast<std::uint8_t>(j)};
                            f.max_pow = std::max(f.max_pow, std::max(k, j));
                        }
                max_pow = std::max(max_pow, f.max_pow);
            }
    }
};

inline const SymLgbTables& sym_lgb_tables() {
    static const SymLgbTables tables;
    return tables;
}

}  // namespace detail

// Lambda^a Gamma^b evaluations at a fixed state from the process-wide
// symbolic representation: per call this is only two nested Horner passes
// over precomputed integer coefficients, so multi-term expansion formulas
// pay nothing per state beyond the shared BsEval transcendentals.
class LgbTable {
public:
    static constexpr int kMaxA = detail::SymLgbTables::kMaxA;
    static constexpr int kMaxB = detail::SymLgbTables::kMaxB;

    explicit LgbTable(const BsState& st) : ev_(st) {
        const int top = detail::sym_lgb_tables().max_pow;
        dp_pow_[0] = 1.0;
        s_pow_[0] = 1.0;
        for (int i = 1; i <= top; ++i) {
            dp_pow_[i] = dp_pow_[i - 1] * ev_.dp;
            s_pow_[i] = s_pow_[i - 1] * ev_.s;
        }
    }

    double operator()(int a, int b) const {
        if (a < 0 || b < 0 || a > kMaxA || b > kMaxB ||
            a + 2 * b > kMaxOperatorWeight)
            throw OrderOutOfRange("derivative order (a=" + std::to_string(a) +
                                  ", b=" + std::to_string(b) +
                                  ") outside the table range");
        const detail::FlatLgbRep& f = detail::sym_lgb_tables().flat[a][b];
        double value = 0.0;
        if (f.a_coef != 0.0) value += f.a_coef * ev_.ex_cdf_dp;
        if (f.b_coef != 0.0) value += f.b_coef * ev_.kd_cdf_dm;
        if (f.n > 0) {
            double s0 = 0.0, s1 = 0.0;
            int i = 0;
            for (; i + 1 < f.n; i += 2) {
                const auto& m0 = f.mono[i];
                const auto& m1 = f.mono[i + 1];
                s0 += m0.c * dp_pow_[m0.k] * s_pow_[m0.j];
                s1 += m1.c * dp_pow_[m1.k] * s_pow_[m1.j];
            }
            if (i < f.n) {
                const auto& m0 = f.mono[i];
                s0 += m0.c * dp_pow_[m0.k] * s_pow_[m0.j];
            }
            value += ev_.g * (s0 + s1);
        }
        return value;
    }

    const BsEval& eval_state() const noexcept { return ev_; }

private:
    BsEval ev_;
    double dp_pow_[detail::SymLgbRep::kCap] = {};
    double s_pow_[detail::SymLgbRep::kCap] = {};
};

}  // namespace hestonx
