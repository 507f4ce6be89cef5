#include <gtest/gtest.h>

#include "rspin/circuits.hpp"
#include "rspin/error.hpp"
#include "rspin/experiments.hpp"

using namespace rspin;

namespace {

ExperimentConfig adder_config(std::size_t bits, std::uint64_t x, std::uint64_t y, std::vector<std::size_t> order) {
    ExperimentConfig cfg;
    cfg.circuit.bits = bits;
    cfg.circuit.x = x;
    cfg.circuit.y = y;
    cfg.circuit.order = std::move(order);
    cfg.integrator.trace_interval = 0.0;
    return cfg;
}

} // namespace

TEST(Config, Validation) {
    auto cfg = adder_config(2, 1, 2, {});
    EXPECT_NO_THROW(cfg.validate());
    cfg.trials = 0;
    EXPECT_THROW(cfg.validate(), InvalidInput);
    cfg = adder_config(2, 1, 2, {});
    cfg.durations = {5.0, 5.0};
    EXPECT_THROW(cfg.validate(), InvalidInput);
    cfg = adder_config(2, 1, 2, {});
    cfg.circuit.type = "and_or";
    cfg.mode = Mode::sequential;
    EXPECT_THROW(cfg.validate(), InvalidInput);
    EXPECT_EQ(mode_from_string("sequential"), Mode::sequential);
    EXPECT_THROW(mode_from_string("parallel"), InvalidInput);
}

TEST(Concurrent, OneBitAdderConvergesToTheRightSum) {
    auto cfg = adder_config(1, 1, 0, {});
    cfg.trials = 1;
    cfg.durations = {200.0};
    const auto rep = run_concurrent(cfg);
    ASSERT_EQ(rep.cells.size(), 1u);
    EXPECT_EQ(rep.cells[0].probability(), 1.0);
    EXPECT_EQ(rep.cells[0].certified, 1u);
}

TEST(Concurrent, ZeroDurationIsTheRandomBaseline) {
    auto cfg = adder_config(1, 1, 1, {});
    cfg.trials = 4000;
    cfg.durations = {0.0};
    const auto rep = run_concurrent(cfg);
    const auto& c = rep.cells[0];
    const Interval ci = wilson_interval(c.successes, c.trials, 3.29);  // 99.9%
    EXPECT_LE(ci.lo, 0.25);
    EXPECT_GE(ci.hi, 0.25);
}

TEST(Concurrent, ReproducibleAndThreadIndependent) {
    auto cfg = adder_config(3, 5, 6, {0, 2});
    cfg.trials = 24;
    cfg.durations = {1.0, 4.0};
    cfg.threads = 1;
    const auto a = run_concurrent(cfg);
    cfg.threads = 4;
    const auto b = run_concurrent(cfg);
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        EXPECT_EQ(a.cells[i].successes, b.cells[i].successes);
        EXPECT_EQ(a.cells[i].certified, b.cells[i].certified);
        EXPECT_EQ(a.cells[i].trials, cfg.trials);
        EXPECT_LE(a.cells[i].successes, a.cells[i].trials);
    }
    EXPECT_EQ(a.config_hash, b.config_hash);
    EXPECT_EQ(a.config_hash, config_hash(cfg));
}

TEST(Concurrent, AndOrGateRun) {
    ExperimentConfig cfg;
    cfg.circuit.type = "and_or";
    cfg.circuit.sigma_f = 1;
    cfg.circuit.x = 1;
    cfg.circuit.y = 1;
    cfg.circuit.order = {0, 1};
    cfg.trials = 20;
    cfg.durations = {30.0};
    const auto rep = run_experiment(cfg);
    EXPECT_EQ(rep.branches, 3u);
    // AND(1,1), AND(0,1), AND(0,0)
    EXPECT_EQ(rep.cell(0, 0).expected, 1u);
    EXPECT_EQ(rep.cell(0, 1).expected, 0u);
    EXPECT_EQ(rep.cell(0, 2).expected, 0u);
    for (const auto& c : rep.cells) EXPECT_EQ(c.successes, c.trials);
}

TEST(Sequential, OneBitMatchesConcurrent) {
    auto cfg = adder_config(1, 1, 0, {0});
    cfg.trials = 40;
    cfg.durations = {2.0, 20.0};
    cfg.mode = Mode::concurrent;
    const auto a = run_experiment(cfg);
    cfg.mode = Mode::sequential;
    const auto b = run_experiment(cfg);
    for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].successes, b.cells[i].successes) << i;
}

TEST(Sequential, AmpleDurationIsReliableWithoutCarryInBranches) {
    auto cfg = adder_config(4, 11, 6, {3, 1});
    cfg.mode = Mode::sequential;
    cfg.trials = 30;
    cfg.durations = {100.0};
    for (const auto& c : run_experiment(cfg).cells) EXPECT_GE(c.probability(), 0.9);
}

TEST(Groups, ThirtyTwoBitExampleGrouping) {
    const auto a = ripple_carry_adder(32);
    auto [clamps, enc] = encode_branches(a, 3411433493ULL, 2079581652ULL, 0, {17, 3, 25, 0, 8, 30, 12, 21});
    SuccessReport rep;
    rep.durations = {1.0};
    for (const auto& b : enumerate_branches(enc)) {
        BranchCell c;
        c.duration = 1.0;
        c.branch = rep.branches++;
        c.flip_set = b.flipped;
        c.expected = b.expected_sum;
        c.trials = 10;
        c.successes = c.branch;
        rep.cells.push_back(c);
    }
    const auto groups = group_analysis(rep);
    std::vector<std::vector<std::vector<std::size_t>>> flips;
    for (const auto& g : groups) {
        std::vector<std::vector<std::size_t>> fs;
        for (auto b : g.branches) fs.push_back(rep.cells[b].flip_set);
        flips.push_back(fs);
    }
    using V = std::vector<std::vector<std::size_t>>;
    ASSERT_EQ(flips.size(), 5u);
    EXPECT_EQ(flips[0], (V{{}, {17}}));
    EXPECT_EQ(flips[1], (V{{3}}));
    EXPECT_EQ(flips[2], (V{{25}}));
    EXPECT_EQ(flips[3], (V{{0}, {8}, {30}, {12}}));
    EXPECT_EQ(flips[4], (V{{21}}));
    EXPECT_NEAR(groups[3].spread(), 0.3, 1e-12);
}

TEST(Groups, SingleBranchHasZeroSpread) {
    auto cfg = adder_config(2, 1, 1, {});
    cfg.trials = 5;
    cfg.durations = {1.0};
    const auto groups = group_analysis(run_concurrent(cfg));
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].spread(), 0.0);
}

TEST(Wilson, KnownValues) {
    const auto ci = wilson_interval(5, 10);
    EXPECT_NEAR(ci.lo, 0.2366, 1e-4);
    EXPECT_NEAR(ci.hi, 0.7634, 1e-4);
    const auto all = wilson_interval(10, 10);
    EXPECT_NEAR(all.hi, 1.0, 1e-12);
    EXPECT_NEAR(all.lo, 0.7225, 1e-4);
    const auto none = wilson_interval(0, 0);
    EXPECT_EQ(none.lo, 0.0);
    EXPECT_EQ(none.hi, 1.0);
}

// Later durations never fall clearly below earlier ones.
TEST(Trend, SuccessNonDecreasingInDuration) {
    auto cfg = adder_config(3, 5, 3, {1, 0});
    cfg.trials = 60;
    cfg.durations = {0.5, 5.0, 50.0};
    const auto rep = run_concurrent(cfg);
    for (std::size_t b = 0; b < rep.branches; ++b)
        for (std::size_t d = 1; d < rep.durations.size(); ++d) {
            const auto& p = rep.cell(d - 1, b);
            const auto& q = rep.cell(d, b);
            EXPECT_GE(wilson_interval(q.successes, q.trials).hi, wilson_interval(p.successes, p.trials).lo);
        }
}

TEST(Seeds, TrialSeedsAreDistinctAndStable) {
    EXPECT_EQ(trial_seed(1, 0), trial_seed(1, 0));
    EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
    EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
}
