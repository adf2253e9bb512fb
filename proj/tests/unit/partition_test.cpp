#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "offload/error.hpp"
#include "offload/partition.hpp"
#include "oracles.hpp"

using namespace offload;

namespace {

DecisionInputs hand_case() {
    DecisionInputs in;
    in.work_mi = 1000;
    in.mobile_mips = 100;
    in.server_mips = 1000;
    in.data_megabits = 1;
    in.bandwidth_mbps = 1;
    in.p_compute = 0.9;
    in.p_idle = 0.3;
    in.p_transmit = 1.3;
    return in;
}

MethodSequence seq_543() { return {{5, 1, 1, 1}, {4, 1, 1, 1}, {3, 1, 1, 1}}; }

}  // namespace

TEST(EnergySaved, HandCaseMatchesArithmetic) {
    const double expected = 0.9 * (1000.0 / 100.0) - 0.3 * (1000.0 / 1000.0) - 1.3 * (1.0 / 1.0);
    EXPECT_NEAR(energy_saved(hand_case()), expected, 1e-12);
    EXPECT_NEAR(expected, 7.4, 1e-12);
}

TEST(EnergySaved, NothingToComputeOrShip) {
    auto in = hand_case();
    in.work_mi = 0;
    in.data_megabits = 0;
    EXPECT_EQ(energy_saved(in), 0.0);
}

TEST(EnergySaved, SymmetricPowerAtEqualSpeed) {
    auto in = hand_case();
    in.p_idle = in.p_compute;
    in.server_mips = in.mobile_mips;
    in.data_megabits = 0;
    EXPECT_NEAR(energy_saved(in), 0.0, 1e-12);
}

TEST(EnergySaved, DomainErrors) {
    auto in = hand_case();
    in.mobile_mips = 0;
    EXPECT_THROW(energy_saved(in), DomainError);
    in = hand_case();
    in.bandwidth_mbps = 0;
    EXPECT_THROW(energy_saved(in), DomainError);
    in = hand_case();
    in.server_mips = 0;
    EXPECT_THROW(energy_saved(in), DomainError);
    in = hand_case();
    in.server_mips.reset();
    EXPECT_THROW(energy_saved(in), DomainError);
}

TEST(EnergySaved, InconsistentSpeedAndSpeedupRejected) {
    auto in = hand_case();
    in.speedup = 11;
    EXPECT_FALSE(in.violations().empty());
    EXPECT_THROW(energy_saved(in), DomainError);
    in.speedup = 10;
    EXPECT_TRUE(in.violations().empty());
}

TEST(EnergySavedSpeedup, HandCaseWithSpeedup) {
    auto in = hand_case();
    in.server_mips.reset();
    in.speedup = 10;
    EXPECT_NEAR(energy_saved_speedup(in), 7.4, 1e-12);
    EXPECT_NEAR(energy_saved(in), 7.4, 1e-12);
}

TEST(EnergySavedSpeedup, NoSpeedupNoTransfer) {
    auto in = hand_case();
    in.server_mips.reset();
    in.speedup = 1;
    in.p_idle = in.p_compute;
    in.data_megabits = 0;
    EXPECT_NEAR(energy_saved_speedup(in), 0.0, 1e-12);
}

TEST(EnergySavedSpeedup, PureTransferLoss) {
    auto in = hand_case();
    in.work_mi = 0;
    in.server_mips.reset();
    in.speedup = 10;
    in.data_megabits = 3;
    in.bandwidth_mbps = 2;
    EXPECT_NEAR(energy_saved_speedup(in), -1.3 * 1.5, 1e-12);
}

TEST(EnergySavedSpeedup, ZeroSpeedupIsDomainError) {
    auto in = hand_case();
    in.server_mips.reset();
    in.speedup = 0;
    EXPECT_THROW(energy_saved_speedup(in), DomainError);
}

TEST(EnergySaved, MonotoneInDataAndWork) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 100.0);
    for (int i = 0; i < 500; ++i) {
        DecisionInputs in;
        in.work_mi = u(rng) * 10;
        in.mobile_mips = u(rng);
        in.server_mips = u(rng) * 10;
        in.data_megabits = u(rng);
        in.bandwidth_mbps = u(rng);
        in.p_compute = u(rng) / 50;
        in.p_idle = u(rng) / 100;
        in.p_transmit = u(rng) / 50;
        auto more_data = in;
        more_data.data_megabits *= 1.5;
        EXPECT_LT(energy_saved(more_data), energy_saved(in));
        if (in.p_compute > in.p_idle * in.mobile_mips / *in.server_mips) {
            auto more_work = in;
            more_work.work_mi *= 1.5;
            EXPECT_GT(energy_saved(more_work), energy_saved(in));
        }
    }
}

TEST(EnergySaved, BothFormsAgreeOnRandomInputs) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.01, 1000.0);
    for (int i = 0; i < 1000; ++i) {
        DecisionInputs in;
        in.work_mi = u(rng);
        in.mobile_mips = u(rng);
        in.speedup = u(rng) / 10;
        in.server_mips = *in.speedup * in.mobile_mips;
        in.data_megabits = u(rng);
        in.bandwidth_mbps = u(rng);
        in.p_compute = u(rng) / 100;
        in.p_idle = u(rng) / 100;
        in.p_transmit = u(rng) / 100;
        const double a = energy_saved(in), b = energy_saved_speedup(in);
        EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(a)));
    }
}

TEST(IntervalUtilities, FiveFourThreeExample) {
    auto u = interval_utilities(seq_543());
    ASSERT_EQ(u.utility.size(), 3u);
    EXPECT_DOUBLE_EQ(u.utility[0], 7.0);
    EXPECT_EQ(u.best_end, 2u);
    EXPECT_DOUBLE_EQ(u.utility[1], 3.0);
    EXPECT_DOUBLE_EQ(oracle::best_saving_starting_at(seq_543(), 1), 3.0);
}

TEST(IntervalUtilities, NoSavingAnywhere) {
    MethodSequence seq{{2, 2, 0, 0}, {3, 3, 0, 0}, {1, 1, 0, 0}};
    EXPECT_DOUBLE_EQ(interval_utilities(seq).utility[0], 0.0);
}

TEST(IntervalUtilities, SingleMethod) {
    auto u = interval_utilities({{10, 2, 1, 1}});
    ASSERT_EQ(u.utility.size(), 1u);
    EXPECT_DOUBLE_EQ(u.utility[0], 6.0);
    EXPECT_EQ(u.best_end, 0u);
}

TEST(IntervalUtilities, MatchesStartAtIOracleWhenArgmaxIsNotBehind) {
    std::mt19937_64 rng(29);
    int checked = 0, skipped = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto seq = oracle::random_sequence(rng);
        auto u = interval_utilities(seq);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (u.best_end < i) {
                ++skipped;
                continue;
            }
            EXPECT_DOUBLE_EQ(u.utility[i], oracle::best_saving_starting_at(seq, i));
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
    RecordProperty("argmax_behind_start_cases", skipped);
}

TEST(BestOffloadInterval, Examples) {
    auto best = best_offload_interval(seq_543());
    EXPECT_EQ(best.first, 0u);
    EXPECT_EQ(best.last, 2u);
    EXPECT_DOUBLE_EQ(best.saving, 7.0);
    EXPECT_TRUE(best.worthwhile());

    auto middle = best_offload_interval({{1, 1, 1, 1}, {9, 1, 1, 1}, {1, 1, 1, 1}});
    EXPECT_EQ(middle.first, 1u);
    EXPECT_EQ(middle.last, 1u);
    EXPECT_DOUBLE_EQ(middle.saving, 6.0);
}

TEST(BestOffloadInterval, NegativeSavingIsReportedNotClamped) {
    auto best = best_offload_interval({{2, 2, 0.5, 0.5}, {3, 3, 0.5, 0.5}});
    EXPECT_DOUBLE_EQ(best.saving, -1.0);
    EXPECT_FALSE(best.worthwhile());
    EXPECT_EQ(best.first, 0u);
    EXPECT_EQ(best.last, 0u);
}

TEST(BestOffloadInterval, TiesPreferShortestThenLeftmost) {
    // [0,1], [1,1] and [3,3] all save 2; the singletons win, leftmost first.
    MethodSequence seq{{1, 1, 0, 0}, {3, 1, 0, 0}, {0, 3, 0, 0}, {3, 1, 0, 0}};
    auto best = best_offload_interval(seq);
    EXPECT_EQ(best.first, 1u);
    EXPECT_EQ(best.last, 1u);
}

TEST(BestOffloadInterval, MatchesExhaustiveOracle) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        auto seq = oracle::random_sequence(rng);
        auto got = best_offload_interval(seq);
        auto want = oracle::best_interval(seq);
        EXPECT_EQ(got.first, want.first);
        EXPECT_EQ(got.last, want.last);
        EXPECT_EQ(got.saving, want.saving);
        EXPECT_GE(got.saving, interval_utilities(seq).utility[0]);
    }
}

TEST(BestOffloadInterval, EmptySequenceRejected) {
    EXPECT_THROW(best_offload_interval({}), DomainError);
    EXPECT_THROW(interval_utilities({}), DomainError);
}

TEST(SequenceFromChain, ConvertsBytesToSeconds) {
    CallGraph g({{"a", true, 2.0, 0.5, 1'000'000, 250'000}, {"b", true, 3.0, 1.0, 500'000, 125'000}}, {{"a", "b"}}, "a");
    Chain chain{{"a", "b"}, true};
    auto seq = sequence_from_chain(g, chain, 8.0, 0.1);
    ASSERT_EQ(seq.size(), 2u);
    EXPECT_DOUBLE_EQ(seq[0].mobile, 2.0);
    EXPECT_DOUBLE_EQ(seq[0].cloud, 0.5);
    EXPECT_DOUBLE_EQ(seq[0].upload, 1.0 + 0.1);
    EXPECT_DOUBLE_EQ(seq[1].ret, 0.125 + 0.1);
}

TEST(BreakEven, ContinuesBelowThreshold) {
    auto d = break_even_decision(0.5, {1.0, 0.4});
    EXPECT_EQ(d.action, BreakEvenAction::ContinueLocal);
}

TEST(BreakEven, FiresAtBoundary) {
    auto d = break_even_decision(1.0, {1.0, 0.4});
    EXPECT_EQ(d.action, BreakEvenAction::OffloadAndRestart);
    EXPECT_DOUBLE_EQ(d.projected_total, 1.4);
}

TEST(BreakEven, OffloadingNeverBeatsTheThreshold) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        BreakEvenConfig cfg{u(rng) + 1e-3, u(rng)};
        const double elapsed = u(rng);
        auto d = break_even_decision(elapsed, cfg);
        if (elapsed < cfg.break_even_time) {
            EXPECT_EQ(d.action, BreakEvenAction::ContinueLocal);
        } else {
            EXPECT_EQ(d.action, BreakEvenAction::OffloadAndRestart);
            EXPECT_EQ(d.projected_total, cfg.break_even_time + cfg.offload_path_time);
            EXPECT_GE(d.projected_total, cfg.break_even_time);
        }
    }
}

TEST(BreakEven, InvalidInputs) {
    EXPECT_THROW(break_even_decision(-1.0, {}), DomainError);
    EXPECT_THROW(break_even_decision(1.0, {0.0, 0.0}), DomainError);
}
