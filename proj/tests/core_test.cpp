#include <gtest/gtest.h>

#include "collatz/core.hpp"

using namespace collatz;

TEST(Decompose, SmallValues) {
    auto one = decompose(1);
    EXPECT_EQ(one.residue(), 1u);
    EXPECT_EQ(one.multiple(), 0);

    auto five = decompose(5);
    EXPECT_EQ(five.residue(), 2u);
    EXPECT_EQ(five.multiple(), 1);

    auto z4 = decompose(85);
    EXPECT_EQ(z4.residue(), 1u);
    EXPECT_EQ(z4.multiple(), 28);
}

TEST(Decompose, RejectsEvenAndNonPositive) {
    EXPECT_THROW(decompose(0), InvalidArgument);
    EXPECT_THROW(decompose(4), InvalidArgument);
    EXPECT_THROW(decompose(Integer(-3)), InvalidArgument);
}

TEST(Decompose, RecomposesAndParityHolds) {
    for (std::uint64_t x = 1; x < 20'000; x += 2) {
        auto d = decompose(x);
        ASSERT_EQ(3 * d.multiple() + d.residue(), x);
        const bool mu_even = !is_odd(d.multiple());
        ASSERT_EQ(mu_even, d.residue() == 1) << x;
        ASSERT_EQ(d.is_leaf(), x % 3 == 0);
    }
}

TEST(Decompose, BeyondSixtyFourBits) {
    Integer big = pow2(200) + 1;
    auto d = decompose(big);
    EXPECT_EQ(3 * d.multiple() + d.residue(), big);
}

TEST(ZTerm, MatchesListedValues) {
    EXPECT_EQ(z_term(1), 1);
    EXPECT_EQ(z_term(2), 5);
    EXPECT_EQ(z_term(3), 21);
    EXPECT_EQ(z_term(4), 85);
    EXPECT_EQ(z_term(5), 341);
    EXPECT_THROW(z_term(0), InvalidArgument);
}

TEST(ZTerm, RecurrenceAndLargeIndex) {
    for (unsigned n = 1; n < 120; ++n) ASSERT_EQ(z_term(n + 1), 1 + 4 * z_term(n));
    // z_40 already exceeds 64 bits
    EXPECT_FALSE(fits_u64(z_term(40)));
    EXPECT_EQ(z_term(40), (pow4(40) - 1) / 3);
}

TEST(WTerm, MatchesListedValues) {
    const int expected[] = {0, 1, 7, 28, 113, 455};
    for (unsigned n = 1; n <= 6; ++n) EXPECT_EQ(w_term(n), expected[n - 1]) << n;
    EXPECT_THROW(w_term(0), InvalidArgument);
}

TEST(WTerm, EqualsMultipleOfZ) {
    for (unsigned n = 1; n <= 100; ++n) {
        auto z = decompose(z_term(n));
        ASSERT_EQ(w_term(n), z.multiple()) << n;
        ASSERT_EQ(z.residue(), n % 3) << n;
    }
}

TEST(BaseSequences, MemoizedAndAscending) {
    BaseSequences seq(70);
    EXPECT_EQ(seq.size(), 70u);
    for (unsigned n = 2; n <= 70; ++n) {
        ASSERT_LT(seq.z(n - 1), seq.z(n));
        ASSERT_LT(seq.w(n - 1), seq.w(n));
        ASSERT_EQ(seq.z(n), z_term(n));
    }
    EXPECT_THROW(seq.z(0), InvalidArgument);
    EXPECT_THROW(seq.w(71), InvalidArgument);
}
