#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hestonx/hestonx.hpp"

using namespace hestonx;

TEST(FigureSweep, PresetShapes) {
    for (int fig = 1; fig <= 6; ++fig) {
        const SweepSpec s = figure_sweep(fig);
        EXPECT_EQ(s.strikes.size(), 25u) << "fig" << fig;   // 70..130 step 2.5
        EXPECT_EQ(s.maturities.size(), 4u);
        EXPECT_EQ(s.methods.size(), fig <= 4 ? 3u : 2u);
        EXPECT_DOUBLE_EQ(s.params.s0, 100.0);
        EXPECT_DOUBLE_EQ(s.params.kappa, 1.5);
        if (fig >= 5) EXPECT_DOUBLE_EQ(s.params.rho, 0.0);
    }
    EXPECT_THROW(figure_sweep(0), DomainError);
    EXPECT_THROW(figure_sweep(7), DomainError);
}

TEST(FigureSweep, CaptionParameters) {
    EXPECT_DOUBLE_EQ(figure_sweep(1).params.rho, -0.2);
    EXPECT_DOUBLE_EQ(figure_sweep(1).params.nu, 0.05);
    EXPECT_DOUBLE_EQ(figure_sweep(4).params.rho, -0.8);
    EXPECT_DOUBLE_EQ(figure_sweep(4).params.nu, 0.5);
    EXPECT_DOUBLE_EQ(figure_sweep(6).params.nu, 0.5);
}

TEST(RunSweep, RowCountAndContent) {
    SweepSpec s = figure_sweep(1);
    s.strikes = {90.0, 100.0, 110.0};
    s.maturities = {1.0};
    const SweepReport rep = run_sweep(s);
    ASSERT_EQ(rep.rows.size(), 3u * 1u * 3u);
    for (const auto& row : rep.rows) {
        EXPECT_FALSE(row.failed);
        EXPECT_GT(row.price, 0.0);
        EXPECT_GT(row.ref_price, 0.0);
        EXPECT_LT(row.log10_rel_err, -3.0);  // nu=5% regime
    }
}

TEST(RunSweep, SingleCellDegenerateGrid) {
    SweepSpec s = figure_sweep(2);
    s.strikes = {100.0};
    s.maturities = {1.0};
    s.methods = {Method::approx_o4};
    const SweepReport rep = run_sweep(s);
    ASSERT_EQ(rep.rows.size(), 1u);
}

TEST(RunSweep, RejectsEmptyOrUnsortedGrid) {
    SweepSpec s = figure_sweep(1);
    s.strikes.clear();
    EXPECT_THROW(run_sweep(s), DomainError);
    s = figure_sweep(1);
    std::swap(s.strikes.front(), s.strikes.back());
    EXPECT_THROW(run_sweep(s), DomainError);
}

TEST(SweepCsv, RoundTrips) {
    SweepSpec s = figure_sweep(1);
    s.strikes = {90.0, 110.0};
    s.maturities = {0.5, 1.0};
    const SweepReport rep = run_sweep(s);
    std::stringstream ss;
    write_sweep_csv(rep, ss);
    const SweepReport back = read_sweep_csv(ss);
    ASSERT_EQ(back.rows.size(), rep.rows.size());
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        EXPECT_EQ(back.rows[i].strike, rep.rows[i].strike);
        EXPECT_EQ(back.rows[i].method, rep.rows[i].method);
        EXPECT_EQ(back.rows[i].price, rep.rows[i].price);
        EXPECT_EQ(back.rows[i].log10_rel_err, rep.rows[i].log10_rel_err);
    }
}

TEST(ParameterSampler, DeterministicAndInBox) {
    const auto a = sample_parameter_sets(200, 42);
    const auto b = sample_parameter_sets(200, 42);
    EXPECT_EQ(parameter_set_hash(a), parameter_set_hash(b));
    const auto c = sample_parameter_sets(200, 43);
    EXPECT_NE(parameter_set_hash(a), parameter_set_hash(c));
    for (const auto& p : a) {
        EXPECT_GE(p.kappa, 0.5);
        EXPECT_LE(p.kappa, 3.0);
        EXPECT_GE(p.theta, 0.05);
        EXPECT_LE(p.theta, 0.5);
        EXPECT_GE(p.v0, 0.05);
        EXPECT_LE(p.v0, 0.5);
        EXPECT_GE(p.rho, -0.9);
        EXPECT_LE(p.rho, 0.0);
        EXPECT_GE(p.r, 0.0);
        EXPECT_LE(p.r, 0.05);
        EXPECT_DOUBLE_EQ(p.s0, 100.0);
        EXPECT_GE(p.nu, 0.05);
        EXPECT_LE(p.nu * p.nu, 2.0 * p.kappa * p.theta * 0.95 * 0.95 + 1e-12);
    }
}

TEST(TimingBatch, HundredOptions) {
    const auto batch = timing_option_batch();
    ASSERT_EQ(batch.size(), 100u);
    for (const auto& opt : batch) {
        EXPECT_GE(opt.strike, 70.0);
        EXPECT_LE(opt.strike, 130.0);
        EXPECT_GT(opt.tau(), 0.0);
        EXPECT_LE(opt.tau(), 5.0);
    }
}

TEST(TimingTask, SizesAndNames) {
    TimingTask t;
    EXPECT_EQ(t.n_param_sets(), 100);
    EXPECT_STREQ(t.name(), "1");
    t.task_id = TimingTask::Id::t3_10000;
    EXPECT_EQ(t.n_param_sets(), 10000);
    EXPECT_STREQ(t.name(), "3");
}

TEST(RunTiming, ReportsSpeedupsOnTinyWorkload) {
    // Single repetition on a reduced clone of task 1 just to exercise the
    // plumbing; the acceptance suite measures the real factors.
    TimingTask t;
    t.sampler_seed = 5;
    const auto rows =
        run_timing(t, {Method::approx_o2, Method::approx_o4}, 1);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].method, Method::ref_fourier);
    EXPECT_DOUBLE_EQ(rows[0].speedup, 1.0);
    for (size_t i = 1; i < rows.size(); ++i) {
        EXPECT_GT(rows[i].seconds, 0.0);
        EXPECT_GT(rows[i].speedup, 1.0);
    }
    std::stringstream ss;
    write_timing_csv(rows, ss);
    std::string header;
    std::getline(ss, header);
    EXPECT_EQ(header, "task,method,seconds,speedup");
}
