#include "fixtures.hpp"
#include "pepa/analysis.hpp"
#include "pepa/error.hpp"
#include "pepa/printer.hpp"

#include <gtest/gtest.h>

using pepa::ErrorKind;
using pepa::parse_model;

namespace {

ErrorKind kind_of(const std::string& text, const pepa::ParameterOverrides& o = {}) {
    try {
        parse_model(text, o);
    } catch (const pepa::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "model was accepted:\n" << text;
    return ErrorKind::usage;
}

// Parse and model errors share an exit code; positioned ones come out as parse errors.
bool rejected_as_model(const std::string& text) {
    return pepa::exit_code(kind_of(text)) == pepa::exit_code(ErrorKind::model);
}

} // namespace

TEST(Parser, ClientServerStructure) {
    auto m = fixtures::load("client_server.pepa");
    EXPECT_EQ(m.group_order(), (std::vector<std::string>{"Clients", "Servers"}));
    EXPECT_EQ(m.group("Clients").population(), 100);
    EXPECT_EQ(m.component_of("Clients").states, (std::vector<std::string>{"C_req", "C_think"}));
    EXPECT_EQ(m.component_of("Servers").states,
              (std::vector<std::string>{"S_idle", "S_log", "S_broken"}));
    EXPECT_DOUBLE_EQ(m.constants.at("r_t"), 15.0);
    EXPECT_TRUE(m.warnings.empty());
}

TEST(Parser, OverridesReplaceConstants) {
    auto m = fixtures::load("client_server.pepa", {{"r_t", 0.2}, {"n_c", 10}});
    EXPECT_DOUBLE_EQ(m.constants.at("r_t"), 0.2);
    EXPECT_EQ(m.group("Clients").population(), 10);
}

TEST(Parser, UnknownOverrideIsRejected) {
    EXPECT_NE(kind_of(fixtures::two_state, {{"nope", 1.0}}), ErrorKind::parse);
}

TEST(Parser, RateExpressions) {
    auto m = parse_model(R"(
rates { k = 2; }
A = (a, k * (1 + 0.5) / 3).B + (b, 3*T).B;
B = (c, -k + 4e0).A;
system = G{A[1]} <b> H{X[1]};
X = (b, 1).X;
)");
    const auto& c = m.component_of("G");
    ASSERT_EQ(c.transitions.size(), 3u);
    EXPECT_DOUBLE_EQ(c.transitions[0].rate.value(), 1.0);
    EXPECT_TRUE(c.transitions[1].rate.is_passive());
    EXPECT_DOUBLE_EQ(c.transitions[1].rate.value(), 3.0);
    EXPECT_DOUBLE_EQ(c.transitions[2].rate.value(), 2.0);
}

TEST(Parser, ErrorsCarryPosition) {
    try {
        parse_model("A = (a, 1).A;\nsystem = G{A[2]} <a H{A[1]};\n");
        FAIL();
    } catch (const pepa::ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(std::string(e.what()).rfind("2:", 0), 0u);
    }
}

TEST(Parser, RejectsInvalidModels) {
    EXPECT_TRUE(rejected_as_model("A = (a, 1).A;")); // no system
    EXPECT_EQ(kind_of("A = (a, 0).A; system = G{A[1]};"), ErrorKind::parse);
    EXPECT_EQ(kind_of("A = (a, 1.5*T).A; system = G{A[1]} <a> H{A[1]};"), ErrorKind::parse);
    EXPECT_TRUE(rejected_as_model("A = (a, 1).B; system = G{A[1]};")); // B undefined
    EXPECT_TRUE(rejected_as_model("A = (a, 1).A; system = G{A[1]} || G{A[1]};"));
    EXPECT_TRUE(rejected_as_model("A = (a, 1).A; system = G{A[0]};"));
    EXPECT_TRUE(rejected_as_model("A = (a, T).A; system = G{A[1]};")); // passive at top
    EXPECT_TRUE(rejected_as_model("A = (a, 1).A; system = G{A[1]}; small X;"));
    EXPECT_EQ(kind_of("A = (a, 1).A; A = (b, 1).A; system = G{A[1]};"), ErrorKind::parse);
    EXPECT_EQ(kind_of("A = (a, 1).A; system = G{A[1]} @ H{A[1]};"), ErrorKind::parse);
}

TEST(Parser, InstancesMustShareAComponent) {
    EXPECT_TRUE(rejected_as_model("A = (a, 1).A; B = (b, 1).B; system = G{A[1] || B[1]};"));
}

TEST(Parser, WarnsOnInertAndOneSidedCooperation) {
    auto inert = parse_model("A = (a, 1).A; B = (b, 1).B; system = G{A[1]} <z> H{B[1]};");
    ASSERT_EQ(inert.warnings.size(), 1u);
    EXPECT_NE(inert.warnings[0].find("inert"), std::string::npos);

    // The second server group keeps 'ask' after the clients are removed,
    // but the first server group never performs it.
    auto full = fixtures::load("client_server_two_types.pepa");
    EXPECT_TRUE(full.warnings.empty());
    auto two = parse_model(pepa::print_model(pepa::reduce(full, pepa::partition_groups(full))));
    ASSERT_EQ(two.warnings.size(), 1u);
    EXPECT_NE(two.warnings[0].find("'ask'"), std::string::npos);
}

TEST(Parser, WarnsOnUnreachableDefinition) {
    auto m = parse_model("A = (a, 1).A; Z = (z, 1).Z; system = G{A[1]};");
    ASSERT_EQ(m.warnings.size(), 1u);
    EXPECT_NE(m.warnings[0].find("'Z'"), std::string::npos);
}

TEST(Parser, CommentsAndApostrophes) {
    auto m = parse_model("% header\nA' = (a, 1).A'; // trailing\nsystem = G'{A'[2]};\n");
    EXPECT_EQ(m.group("G'").population(), 2);
}

TEST(Parser, RoundTripThroughPrinter) {
    for (const char* name : {"client_server.pepa", "client_server_two_types.pepa", "three_small.pepa",
                             "weighted_passive.pepa", "large_shared.pepa", "model1_active.pepa"}) {
        auto m = fixtures::load(name);
        auto again = parse_model(pepa::print_model(m));
        EXPECT_EQ(m, again) << name << "\n" << pepa::print_model(m);
        EXPECT_EQ(pepa::print_model(again), pepa::print_model(m)) << name;
    }
}

TEST(Parser, MissingFileIsAnIoError) {
    try {
        pepa::parse_model_file("/nonexistent/model.pepa");
        FAIL();
    } catch (const pepa::Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
}
