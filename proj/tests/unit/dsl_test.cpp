#include "qrw/dsl.hpp"
#include "qrw/systems.hpp"

#include <gtest/gtest.h>

using namespace qrw;
namespace sy = qrw::systems;

namespace {

std::filesystem::path shipped(const std::string& name) {
    return std::filesystem::path(QRW_SOURCE_DIR) / "systems" / (name + ".qtrs");
}

void expect_error(const std::string& text, std::size_t line, const std::string& fragment) {
    try {
        dsl::parse_system(text);
        ADD_FAILURE() << "no error for:\n" << text;
    } catch (const dsl::ParseError& e) {
        EXPECT_EQ(e.line(), line) << e.what();
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

TEST(Dsl, ShippedNatFileIsMakeNat) {
    auto f = dsl::load_system(shipped("nat"));
    EXPECT_FALSE(f.is_graded());
    EXPECT_TRUE(dsl::structurally_equal(f.system, sy::make_nat()));
}

TEST(Dsl, EveryShippedFileMatchesItsBuilder) {
    for (const auto& e : sy::catalog()) {
        auto f = dsl::load_system(shipped(e.name));
        if (auto g = sy::graded_by_name(e.name)) {
            ASSERT_TRUE(f.graded) << e.name;
            EXPECT_TRUE(dsl::structurally_equal(*f.graded, *g)) << e.name;
        } else {
            EXPECT_TRUE(dsl::structurally_equal(f.system, sy::by_name(e.name))) << e.name;
        }
    }
}

TEST(Dsl, EmitParseEmitIsStable) {
    for (const auto& e : sy::catalog()) {
        auto g = sy::graded_by_name(e.name);
        std::string text = g ? dsl::emit(*g) : dsl::emit(sy::by_name(e.name));
        auto f = dsl::parse_system(text);
        EXPECT_EQ(f.graded ? dsl::emit(*f.graded) : dsl::emit(f.system), text) << e.name;
    }
}

TEST(Dsl, StructuralEqualityNoticesDifferences) {
    EXPECT_FALSE(dsl::structurally_equal(sy::make_nat(), sy::make_tick_simple()));
    EXPECT_FALSE(dsl::structurally_equal(sy::make_dna(sy::DnaVariant::Hamming), sy::make_dna()));
}

TEST(Dsl, CommentsBlankLinesAndDefaults) {
    auto f = dsl::parse_system("# a comment\n\nsymbol a/0   # trailing\nsymbol b/0\nrule r: a -[1/2]-> b\n");
    EXPECT_EQ(f.system.quantale().kind(), QuantaleKind::Lawvere);
    ASSERT_EQ(f.system.rules().size(), 1u);
    EXPECT_EQ(std::get<QValue>(f.system.rules()[0].weight), f.system.quantale().make(Rational(1, 2)));
}

TEST(Dsl, SchemaRulesWithConditionsAndGrids) {
    auto f = dsl::parse_system(R"(
quantale lawvere
grid 0 1/2 1
grid m: 0 1 2
symbol w/1 indices n
rule down: w_n(x) -[{n-m}]-> w_{m}(x) where m < n, 0 <= m
rule fold: w_{2*1}(x) -[{1/2+1/2}]-> x
)");
    const auto& r = f.system.rules()[0];
    ASSERT_EQ(r.conditions.size(), 2u);
    EXPECT_EQ(r.conditions[0].cmp, SideCondition::Cmp::Lt);
    EXPECT_TRUE(std::holds_alternative<IndexExpr>(r.weight));
    EXPECT_EQ(f.system.grid().per_param.at("m").size(), 3u);
    const auto& g = f.system.rules()[1];
    EXPECT_EQ(g.lhs.indices()[0], IndexExpr(Rational(2)));
    EXPECT_EQ(std::get<QValue>(g.weight), f.system.quantale().make(1));
}

TEST(Dsl, BangSugarAndInfixOperators) {
    auto w = sy::make_graded_combinators();
    const auto& sig = w.system().signature();
    Term x = Term::var("x");
    EXPECT_EQ(dsl::parse_term(sig, "!2 x"), Term::app("!", {x}, {Rational(2)}));
    EXPECT_EQ(dsl::parse_term(sig, "!_{1+1}(x)"), Term::app("!", {x}, {Rational(2)}));
    EXPECT_EQ(dsl::parse_term(sig, "K . x . !0 y"),
              sy::ap({sy::constant("K"), x, Term::app("!", {Term::var("y")}, {Rational(0)})}));
    EXPECT_EQ(dsl::parse_term(sig, "x.(y.x)"), sy::ap(x, sy::ap(Term::var("y"), x)));
}

TEST(Dsl, BooleanWeights) {
    auto f = dsl::parse_system("quantale bool\nsymbol a/0\nsymbol b/0\nrule r: a -[top]-> b\n");
    EXPECT_EQ(std::get<QValue>(f.system.rules()[0].weight), f.system.quantale().top());
}

TEST(Dsl, Diagnostics) {
    expect_error("symbol f/2\nrule r:\n", 2, "expected term");
    expect_error("symbol f/2\nrule r: f(x) -[1]-> x\n", 2, "arity 2");
    expect_error("symbol f/1\nrule r: g(x) -[1]-> x\n", 2, "unknown symbol g");
    expect_error("symbol f/1\nrule r: F -[1]-> x\n", 2, "unknown symbol F");
    expect_error("quantale tropical\n", 1, "unknown quantale");
    expect_error("symbol f/1\nsymbol f/1\n", 2, "declared twice");
    expect_error("symbol +/1 infix\n", 1, "arity 2");
    expect_error("symbol g/2 grades [1]\n", 1, "grades");
    expect_error("symbol g/1 indices n grades [k]\n", 1, "unknown index k");
    expect_error("symbol w/1 indices n\nrule r: w(x) -[1]-> x\n", 2, "indices");
    expect_error("symbol a/0\nrule r: a -[1/0]-> a\n", 2, "bad weight");
    expect_error("symbol a/0\nrule r: a -[{1/0}]-> a\n", 2, "division by zero");
    expect_error("symbol a/0\nrule r: a -[1]-> a a\n", 2, "trailing");
    expect_error("symbol a/0\nrule r: a -[1]-> a\nrule r: a -[2]-> a\n", 3, "duplicate rule id");
    expect_error("symbol a/0\nrule r: a -[inf]-> a\n", 2, "bottom weight");
    expect_error("frobnicate\n", 1, "unknown directive");
    expect_error("quantale nat-inf\nsymbol a/0\nrule r: a -[1/2]-> a\n", 3, "bad weight");
}

TEST(Dsl, ErrorColumnsPointAtTheProblem) {
    try {
        dsl::parse_system("symbol f/2\nrule r: f(x) -[1]-> x\n");
        FAIL();
    } catch (const dsl::ParseError& e) {
        EXPECT_EQ(e.column(), 9u);
    }
}

TEST(Dsl, LoadReportsPath) {
    EXPECT_THROW(dsl::load_system("/nonexistent/file.qtrs"), std::runtime_error);
}

}  // namespace
