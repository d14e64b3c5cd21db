#include "fixtures.hpp"
#include "pepa/error.hpp"
#include "pepa/measure.hpp"

#include <gtest/gtest.h>

namespace {

const pepa::StateLayout& servers() {
    static const pepa::StateLayout layout =
        pepa::StateLayout(fixtures::load("client_server.pepa")).restricted({"Servers"});
    return layout;
}

bool eval(const std::string& text, const pepa::StateVector& s) {
    return pepa::Predicate::compile(text, servers())(s);
}

} // namespace

TEST(Predicate, Comparisons) {
    EXPECT_TRUE(eval("S_idle == 3", {3, 1, 1}));
    EXPECT_FALSE(eval("S_idle != 3", {3, 1, 1}));
    EXPECT_TRUE(eval("S_log < 2 && S_broken >= 1", {3, 1, 1}));
    EXPECT_TRUE(eval("S_idle > 4 || S_broken <= 1", {3, 1, 1}));
    EXPECT_TRUE(eval("Servers.S_idle == 3", {3, 1, 1}));
}

TEST(Predicate, ArithmeticAndPrecedence) {
    EXPECT_TRUE(eval("S_idle + S_log == 5 - S_broken", {2, 2, 1}));
    EXPECT_TRUE(eval("!(S_idle == 0) && true", {1, 2, 2}));
    EXPECT_FALSE(eval("false || S_idle - 1 > 0", {1, 2, 2}));
    EXPECT_TRUE(eval("true || false && false", {0, 0, 5}));
}

TEST(Predicate, ErrorsNameTheColumn) {
    for (const char* bad : {"S_idle ==", "nope == 1", "S_idle == 1 &&", "(S_idle == 1", "S_idle = 1"}) {
        try {
            pepa::Predicate::compile(bad, servers());
            ADD_FAILURE() << bad;
        } catch (const pepa::Error& e) {
            EXPECT_EQ(e.kind(), pepa::ErrorKind::usage) << bad;
        }
    }
}

TEST(Predicate, KeepsSourceText) {
    EXPECT_EQ(pepa::Predicate::compile("S_idle == 5", servers()).text(), "S_idle == 5");
}
