#include <gtest/gtest.h>

#include <cmath>

#include "hestonx/hestonx.hpp"

using namespace hestonx;

namespace {
const OptionSpec kAtm(100.0, 1.0);
}

TEST(Approx, DegenerateNuCollapsesToBlackScholes) {
    // nu -> 0 freezes the variance path at its projection, so every
    // approximation order must collapse onto BS at sqrt(v_squared).
    const HestonParams p(1.5, 0.2, 1e-6, -0.5, 0.25, 0.001, 100.0);
    const double bs = bs_price(
        BsState(std::log(100.0), std::sqrt(v_squared(p, 1.0)), 1.0, 100.0, 0.001));
    for (double price : {price_o2(p, kAtm).price, price_o3(p, kAtm).price,
                         price_o4(p, kAtm).price}) {
        EXPECT_NEAR(price, bs, 1e-6 * bs);
    }
    const HestonParams pz(1.5, 0.2, 1e-6, 0.0, 0.25, 0.001, 100.0);
    EXPECT_NEAR(price_zero_corr(pz, kAtm).price, bs, 1e-6 * bs);
}

TEST(Approx, O2EqualsO3BitForBitAtZeroRho) {
    // At rho = 0 every extra o3 term carries a factor rho and is exactly
    // zero; the summation must then produce bit-identical prices.
    const HestonParams p(1.5, 0.2, 0.3, 0.0, 0.25, 0.001, 100.0);
    for (double strike : {70.0, 100.0, 130.0}) {
        for (double tau : {0.25, 1.0, 3.0}) {
            const OptionSpec opt(strike, tau);
            EXPECT_EQ(price_o2(p, opt).price, price_o3(p, opt).price)
                << "K=" << strike << " tau=" << tau;
        }
    }
}

TEST(Approx, ZeroCorrRequiresZeroRho) {
    const HestonParams p(1.5, 0.2, 0.05, -0.2, 0.25, 0.001, 100.0);
    EXPECT_THROW(price_zero_corr(p, kAtm), RhoNotZero);
}

TEST(Approx, ResultsCarryMethodTag) {
    const HestonParams p(1.5, 0.2, 0.05, -0.2, 0.25, 0.001, 100.0);
    EXPECT_EQ(price_o2(p, kAtm).method, Method::approx_o2);
    EXPECT_EQ(price_o3(p, kAtm).method, Method::approx_o3);
    EXPECT_EQ(price_o4(p, kAtm).method, Method::approx_o4);
}

TEST(Approx, ErrorIndicatorMonotoneInNu) {
    double prev_o3 = 0.0, prev_o4 = 0.0;
    for (double nu : {0.05, 0.1, 0.2, 0.4}) {
        const HestonParams p(1.5, 0.2, nu, -0.5, 0.25, 0.001, 100.0);
        const double e3 = price_o3(p, kAtm).error_indicator;
        const double e4 = price_o4(p, kAtm).error_indicator;
        EXPECT_GT(e3, prev_o3);
        EXPECT_GT(e4, prev_o4);
        prev_o3 = e3;
        prev_o4 = e4;
    }
}

TEST(Approx, ErrorIndicatorUsesHorizonFactor) {
    // min(1/r, tau): at r = 0 the indicator scales linearly in tau until
    // 1/r would bind.
    const HestonParams p(1.5, 0.2, 0.2, -0.5, 0.25, 0.0, 100.0);
    const double e1 = price_o3(p, OptionSpec(100.0, 1.0)).error_indicator;
    const double e2 = price_o3(p, OptionSpec(100.0, 2.0)).error_indicator;
    EXPECT_NEAR(e2 / e1, 2.0, 1e-12);
    // Large r caps the factor at 1/r < tau.
    const HestonParams pr(1.5, 0.2, 0.2, -0.5, 0.25, 0.8, 100.0);
    const double ec1 = price_o3(pr, OptionSpec(100.0, 2.0)).error_indicator;
    const double ec2 = price_o3(pr, OptionSpec(100.0, 3.0)).error_indicator;
    EXPECT_DOUBLE_EQ(ec1, ec2);
}

TEST(Approx, HigherOrdersRefineTowardReference) {
    // Fig. 2 regime (rho=-0.8, nu=5%): each added order should shrink the
    // worst-case error on an ATM/OTM/ITM triple.
    const HestonParams p(1.5, 0.2, 0.05, -0.8, 0.25, 0.001, 100.0);
    double worst[3] = {0.0, 0.0, 0.0};
    for (double strike : {85.0, 100.0, 115.0}) {
        const OptionSpec opt(strike, 1.0);
        const double ref = price_reference(p, opt).price;
        const double errs[3] = {std::abs(price_o2(p, opt).price - ref),
                                std::abs(price_o3(p, opt).price - ref),
                                std::abs(price_o4(p, opt).price - ref)};
        for (int i = 0; i < 3; ++i) worst[i] = std::max(worst[i], errs[i]);
    }
    EXPECT_LT(worst[1], worst[0]);
    EXPECT_LT(worst[2], worst[1]);
}

TEST(Approx, ZeroCorrBeatsO2AtZeroRho) {
    for (double nu : {0.05, 0.5}) {
        const HestonParams p(1.5, 0.2, nu, 0.0, 0.25, 0.001, 100.0);
        for (double strike : {80.0, 100.0, 120.0}) {
            const OptionSpec opt(strike, 1.0);
            const double ref = price_reference(p, opt).price;
            const double e_zc = std::abs(price_zero_corr(p, opt).price - ref);
            const double e_o2 = std::abs(price_o2(p, opt).price - ref);
            EXPECT_LE(e_zc, e_o2) << "nu=" << nu << " K=" << strike;
        }
    }
}

TEST(Approx, PriceApproxDispatch) {
    const HestonParams p(1.5, 0.2, 0.05, -0.2, 0.25, 0.001, 100.0);
    EXPECT_EQ(price_approx(ApproxOrder::O3_thm41, p, kAtm).price,
              price_o3(p, kAtm).price);
    EXPECT_EQ(price_approx(ApproxOrder::O4_thm42, p, kAtm).price,
              price_o4(p, kAtm).price);
}

TEST(Approx, PositiveAndWithinStaticBounds) {
    const HestonParams p(1.5, 0.2, 0.5, -0.8, 0.25, 0.001, 100.0);
    for (double strike : {70.0, 100.0, 130.0}) {
        const OptionSpec opt(strike, 3.0);
        for (double v : {price_o2(p, opt).price, price_o3(p, opt).price,
                         price_o4(p, opt).price}) {
            EXPECT_GT(v, 0.0);
            EXPECT_LT(v, 100.0);
        }
    }
}
