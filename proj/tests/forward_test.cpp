#include <gtest/gtest.h>

#include "collatz/forward.hpp"
#include "oracles.hpp"

using namespace collatz;

TEST(Valuation2, Examples) {
    EXPECT_EQ(valuation2(4u), 2u);
    EXPECT_EQ(valuation2(28u), 2u);
    EXPECT_EQ(valuation2(40u), 3u);
    EXPECT_EQ(valuation2(Integer(40)), 3u);
    EXPECT_EQ(valuation2(pow2(300) * 3), 300u);
}

TEST(Valuation2, RejectsOddAndZero) {
    EXPECT_THROW(valuation2(7u), InvalidArgument);
    EXPECT_THROW(valuation2(0u), InvalidArgument);
    EXPECT_THROW(valuation2(Integer(9)), InvalidArgument);
}

TEST(Valuation2, AgreesWithRepeatedDivision) {
    for (std::uint64_t m = 2; m < 100'000; m += 2) ASSERT_EQ(valuation2(m), oracle::valuation(m));
}

TEST(FStep, Examples) {
    auto s1 = f_step(OddInteger(1));
    EXPECT_EQ(s1.next.value(), 1);
    EXPECT_EQ(s1.exponent, 2u);

    auto s9 = f_step(OddInteger(9));
    EXPECT_EQ(s9.next.value(), 7);
    EXPECT_EQ(s9.exponent, 2u);

    auto s13 = f_step(OddInteger(13));
    EXPECT_EQ(s13.next.value(), 5);
    EXPECT_EQ(s13.exponent, 3u);
}

TEST(FStep, FastPathAgreesAndDetectsOverflow) {
    for (std::uint64_t x = 1; x < 50'000; x += 2) {
        auto [y, a] = f_step_fast(x);
        auto s = f_step(OddInteger(x));
        ASSERT_EQ(s.next.value(), y);
        ASSERT_EQ(s.exponent, a);
    }
    EXPECT_THROW(f_step_fast(std::numeric_limits<std::uint64_t>::max()), Overflow);
}

static std::vector<std::uint64_t> values_of(const TrajectoryRecord& r) {
    std::vector<std::uint64_t> out;
    for (const auto& v : r.values) out.push_back(to_u64(v.value()));
    return out;
}

TEST(Trajectory, Examples) {
    auto t1 = trajectory(OddInteger(1));
    EXPECT_TRUE(t1.converged);
    EXPECT_EQ(t1.length(), 0u);
    EXPECT_EQ(values_of(t1), std::vector<std::uint64_t>{1});

    auto t9 = trajectory(OddInteger(9));
    EXPECT_TRUE(t9.converged);
    EXPECT_EQ(t9.length(), 6u);
    EXPECT_EQ(values_of(t9), (std::vector<std::uint64_t>{9, 7, 11, 17, 13, 5, 1}));
    EXPECT_EQ(t9.exponents, (std::vector<unsigned>{2, 1, 1, 2, 3, 4}));

    auto t15 = trajectory(OddInteger(15));
    EXPECT_EQ(t15.length(), 5u);
    EXPECT_EQ(values_of(t15), (std::vector<std::uint64_t>{15, 23, 35, 53, 5, 1}));
}

TEST(Trajectory, BudgetExhaustionIsNotAnError) {
    auto t = trajectory(OddInteger(27), 5);
    EXPECT_FALSE(t.converged);
    EXPECT_EQ(t.length(), 5u);
    EXPECT_THROW(trajectory(OddInteger(27), 0), InvalidArgument);
}

TEST(Trajectory, StepsSatisfyTheMap) {
    for (std::uint64_t x = 1; x < 3'000; x += 2) {
        auto t = trajectory(OddInteger(x));
        ASSERT_TRUE(t.converged);
        ASSERT_EQ(values_of(t), oracle::orbit(x));
        for (std::size_t i = 0; i < t.length(); ++i) {
            const auto& prev = t.values[i].value();
            const auto& next = t.values[i + 1].value();
            ASSERT_GE(t.exponents[i], 1u);
            ASSERT_EQ(next << t.exponents[i], 3 * prev + 1);
            ASSERT_TRUE(is_odd(next));
        }
    }
}

TEST(Summarize, MatchesFullTrajectory) {
    for (std::uint64_t x = 1; x < 2'000; x += 2) {
        auto s = summarize<std::uint64_t>(x);
        auto b = summarize<Integer>(Integer(x));
        auto o = oracle::orbit(x);
        ASSERT_EQ(s.steps, o.size() - 1);
        ASSERT_EQ(s.peak, *std::max_element(o.begin(), o.end()));
        ASSERT_EQ(b.steps, s.steps);
        ASSERT_EQ(b.peak, s.peak);
    }
}

TEST(Sweep, IndependentOfWorkerCount) {
    auto one = sweep(1, 9'999, kDefaultMaxSteps, 1);
    auto four = sweep(1, 9'999, kDefaultMaxSteps, 4);
    EXPECT_EQ(one.starts, 5'000u);
    EXPECT_EQ(one.max_steps_seen, four.max_steps_seen);
    EXPECT_EQ(one.argmax_steps, four.argmax_steps);
    EXPECT_EQ(one.max_peak, four.max_peak);
    EXPECT_EQ(one.argmax_peak, four.argmax_peak);
    EXPECT_TRUE(one.unconverged.empty());
    // values from an independent sweep of odd starts below 10^4
    EXPECT_EQ(one.max_peak, 9'038'141u);
    EXPECT_EQ(one.argmax_peak, 9'663u);
    EXPECT_EQ(one.max_steps_seen, 96u);
}

TEST(Sweep, ImageOfThreeModFourIsClassTwo) {
    for (std::uint64_t x = 3; x < 100'000; x += 4) ASSERT_EQ(f_step_fast(x).first % 3, 2u) << x;
}
