#include "pepa/error.hpp"
#include "pepa/rate.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using pepa::Rate;

TEST(Rate, SumOfLikeKinds) {
    EXPECT_EQ(Rate::active(2) + Rate::active(3), Rate::active(5));
    EXPECT_EQ(Rate::passive(2) + Rate::passive(1), Rate::passive(3));
}

TEST(Rate, ZeroIsIdentityForBothKinds) {
    EXPECT_EQ(Rate::zero() + Rate::passive(2), Rate::passive(2));
    EXPECT_EQ(Rate::passive(2) + Rate::zero(), Rate::passive(2));
    EXPECT_EQ(Rate::zero() + Rate::active(4), Rate::active(4));
}

TEST(Rate, MixingKindsIsAModelError) {
    try {
        (void)(Rate::active(1) + Rate::passive(1));
        FAIL() << "expected an error";
    } catch (const pepa::Error& e) {
        EXPECT_EQ(e.kind(), pepa::ErrorKind::model);
    }
}

TEST(Rate, MinimumRules) {
    EXPECT_EQ(pepa::min(Rate::active(2), Rate::active(5)), Rate::active(2));
    EXPECT_EQ(pepa::min(Rate::passive(3), Rate::passive(2)), Rate::passive(2));
    EXPECT_EQ(pepa::min(Rate::active(7), Rate::passive(3)), Rate::active(7));
    EXPECT_EQ(pepa::min(Rate::passive(3), Rate::active(7)), Rate::active(7));
    EXPECT_TRUE(pepa::min(Rate::active(7), Rate::passive(0)).is_zero());
}

TEST(Rate, FractionOfTotal) {
    EXPECT_DOUBLE_EQ(pepa::fraction(Rate::passive(1), Rate::passive(4)), 0.25);
    EXPECT_DOUBLE_EQ(pepa::fraction(Rate::active(3), Rate::active(4)), 0.75);
}

TEST(Rate, Printing) {
    std::ostringstream s;
    s << Rate::passive(1) << ' ' << Rate::passive(3) << ' ' << Rate::active(2.5);
    EXPECT_EQ(s.str(), "T 3*T 2.5");
}

TEST(Rate, RandomizedPassiveLaws) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> w(0.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
        double a = w(rng), b = w(rng), c = w(rng);
        Rate pa = Rate::passive(a), pb = Rate::passive(b);
        EXPECT_EQ((pa + pb).kind(), Rate::Kind::passive);
        EXPECT_DOUBLE_EQ((pa + pb).value(), a + b);
        EXPECT_DOUBLE_EQ(pa.scaled(c).value(), a * c);
        EXPECT_TRUE(pa.scaled(c).is_passive());
        EXPECT_DOUBLE_EQ(pepa::min(pa, pb).value(), std::min(a, b));
        Rate act = Rate::active(c + 0.1);
        EXPECT_EQ(pepa::min(act, pa), a == 0.0 ? Rate::zero() : act);
    }
}
