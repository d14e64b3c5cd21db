#include "fixtures.hpp"
#include "pepa/analysis.hpp"
#include "pepa/error.hpp"
#include "pepa/printer.hpp"

#include <gtest/gtest.h>

using pepa::ActionSet;
using pepa::GroupSet;

TEST(Partition, HintsWinOverThreshold) {
    auto m = fixtures::load("client_server_small.pepa");
    auto p = pepa::partition_groups(m, 0);
    EXPECT_EQ(p.small, GroupSet{"Servers"});
    EXPECT_EQ(p.large, GroupSet{"Clients"});
}

TEST(Partition, ThresholdDecidesUnhintedGroups) {
    auto m = pepa::parse_model(R"(
A = (a, 1).B; B = (b, T).A;
X = (b, 2).X;
system = Big{A[20]} <b> Tiny{X[3]};
)");
    auto p = pepa::partition_groups(m, 10);
    EXPECT_EQ(p.small, GroupSet{"Tiny"});
    EXPECT_EQ(p.large, GroupSet{"Big"});
    auto all_small = pepa::partition_groups(m, 50);
    EXPECT_TRUE(all_small.large.empty());
}

TEST(Partition, ValidationRejectsOverlap) {
    auto m = fixtures::load("client_server.pepa");
    pepa::GroupPartition bad{{"Servers", "Clients"}, {"Clients"}};
    EXPECT_THROW(pepa::validate_partition(m, bad), pepa::Error);
}

TEST(Analysis, InterfacesAndPartners) {
    auto m = fixtures::load("client_server_two_types.pepa");
    EXPECT_EQ(pepa::group_interface(m, "Clients"), (ActionSet{"ask", "req"}));
    EXPECT_EQ(pepa::group_interface(m, "Servers'"), ActionSet{"ask"});
    EXPECT_EQ(pepa::enabled_actions(m, "Clients"), (ActionSet{"ask", "req", "think"}));
    EXPECT_EQ(pepa::enabled_actions(m, "Servers'"), (ActionSet{"ask", "proc"}));
    EXPECT_EQ(pepa::coop_partners(m, "Servers", "req"), GroupSet{"Clients"});
    EXPECT_EQ(pepa::coop_partners(m, "Servers", "log"), GroupSet{});
    EXPECT_EQ(pepa::coop_partners(m, "Clients", "req"), GroupSet{"Servers"});
    EXPECT_TRUE(pepa::coop_partners(m, "Servers'", "ask").count("Clients"));
}

TEST(Analysis, ClassificationOfClientServer) {
    auto m = fixtures::load("client_server.pepa");
    auto c = pepa::classify(m, pepa::partition_groups(m));
    EXPECT_EQ(c.large_only, ActionSet{"think"});
    EXPECT_EQ(c.small_only, (ActionSet{"brk", "fix", "log"}));
    EXPECT_EQ(c.shared, ActionSet{"req"});
}

TEST(Analysis, SharedTakesPrecedence) {
    // Ps and Qs cooperate with each other on 'sync' and with the small
    // controller on 'kick'.
    auto m = fixtures::load("large_shared.pepa");
    auto c = pepa::classify(m, pepa::partition_groups(m));
    EXPECT_EQ(c.shared, ActionSet{"kick"});
    EXPECT_EQ(c.large_only, (ActionSet{"back", "move", "sync"}));
}

TEST(Condition, PassiveClientsSatisfyIt) {
    auto m = fixtures::load("client_server.pepa");
    auto r = pepa::check_aggregation_condition(m, pepa::partition_groups(m));
    EXPECT_TRUE(r.satisfied);
    EXPECT_TRUE(r.violations.empty());
}

TEST(Condition, ActiveClientsViolateIt) {
    auto m = fixtures::load("model1_active.pepa");
    auto r = pepa::check_aggregation_condition(m, pepa::partition_groups(m));
    EXPECT_FALSE(r.satisfied);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0], (pepa::ConditionViolation{"Clients", "req", "C_req"}));
}

TEST(Condition, StrictReadingFlagsNonEnablingStates) {
    auto m = fixtures::load("client_server.pepa");
    auto r = pepa::check_aggregation_condition(m, pepa::partition_groups(m), pepa::ConditionReading::strict);
    EXPECT_FALSE(r.satisfied);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].state, "C_think");
}

TEST(Reduce, DropsLargeGroupsAndTheirComponents) {
    auto m = fixtures::load("client_server.pepa");
    auto red = pepa::reduce(m, pepa::partition_groups(m));
    EXPECT_EQ(red.group_order(), std::vector<std::string>{"Servers"});
    EXPECT_EQ(red.components.size(), 1u);
    EXPECT_EQ(red.definition("C_req"), nullptr);
    EXPECT_EQ(pepa::print_equation(red.equation), "Servers{S_idle[5]}");
}

TEST(Reduce, KeepsCooperationBetweenSmallGroups) {
    auto m = fixtures::load("client_server_two_types.pepa");
    auto red = pepa::reduce(m, pepa::partition_groups(m));
    EXPECT_EQ(pepa::print_equation(red.equation), "Servers{S_idle[2]} <ask> Servers'{S_ready[2]}");
}

TEST(Reduce, AllLargeModelCannotBeReduced) {
    auto m = fixtures::load("client_server.pepa");
    pepa::GroupPartition all_large{{}, {"Clients", "Servers"}};
    try {
        pepa::reduce(m, all_large);
        FAIL();
    } catch (const pepa::Error& e) {
        EXPECT_EQ(e.kind(), pepa::ErrorKind::condition);
    }
}
