#include <gtest/gtest.h>

#include "liftcal/errors.hpp"
#include "liftcal/lifted.hpp"
#include "liftcal/oracle.hpp"
#include "support.hpp"

using namespace liftcal;
using test::column_of;
using V = std::vector<std::string>;

TEST(Lifted, S1FromTop) {
  test::Fixture f(test::kS1);
  EXPECT_EQ(column_of(analyze_lifted(*f.program.body, f.top()), "x"), (V{"1", "1", "1"}));
}

TEST(Lifted, S2FromTop) {
  test::Fixture f(test::kS2);
  EXPECT_EQ(column_of(analyze_lifted(*f.program.body, f.top()), "x"), (V{"0", "1", "-1"}));
  EXPECT_EQ(column_of(analyze_lifted(*f.program.body, f.top(Lattice::ConstPlus)), "x"),
            (V{"0", "1", "-1"}));
}

TEST(Lifted, ExpressionExamples) {
  test::Fixture f(test::kS2);
  auto a = test::store_x(Lattice::Const, f.K,
                         {Value::integer(0), Value::integer(1), Value::integer(-1)});
  FeatureSpace none;
  auto e = [&](const char* src) {
    return parse_stmt(std::string("y := ") + src, none)->expr;
  };
  auto vals = [](const std::vector<Value>& vs) {
    V out;
    for (Value v : vs) out.push_back(render_value(v));
    return out;
  };
  EXPECT_EQ(vals(analyze_expr_lifted(*e("3"), a)), (V{"3", "3", "3"}));
  EXPECT_EQ(vals(analyze_expr_lifted(*e("x"), a)), (V{"0", "1", "-1"}));
  EXPECT_EQ(vals(analyze_expr_lifted(*e("x + 1"), a)), (V{"1", "2", "0"}));
}

TEST(Lifted, WhileAccumulates) {
  test::Fixture f("features A; model A; begin x := 0; while (x < 5) { x := x + 1 } end");
  AnalysisStats stats;
  auto r = analyze_lifted(*f.program.body, f.top(), &stats);
  EXPECT_EQ(column_of(r, "x"), (V{"top"}));
  EXPECT_EQ(stats.while_evaluations, 1u);
  EXPECT_LE(stats.max_while_iterations, 3u);
}

TEST(Lifted, ConfigSetMismatchRejected) {
  test::Fixture f(test::kS1);
  auto other = std::make_shared<const ConfigSet>(FeatureSpace{}, std::vector<uint64_t>{0});
  EXPECT_THROW(analyze_lifted(*f.program.body, *other, f.top()), SemanticError);
}

TEST(Single, Examples) {
  FeatureSpace none;
  Store top;
  EXPECT_EQ(analyze_single(*parse_stmt("x := 0; x := x + 1", none), top).get("x"),
            Value::integer(1));
  EXPECT_EQ(analyze_single(*parse_stmt("if (y) { x := 1 } else { x := 2 }", none), top).get("x"),
            Value::top());
  Store s;
  s.set("x", Value::integer(4));
  EXPECT_TRUE(store_equal(analyze_single(*parse_stmt("skip", none), s), s));
  FeatureSpace a({"A"});
  EXPECT_THROW(analyze_single(*parse_stmt("#if (A) { skip }", a), top), SemanticError);
}

TEST(Lifted, MatchesPerVariantAnalysis) {
  CaseGen g(1);
  auto r = check_oracle_equiv(g, 1000);
  EXPECT_TRUE(r.passed()) << r.counterexample;
  EXPECT_EQ(r.cases, 1000u);
}

TEST(Lifted, BruteForceExamples) {
  test::Fixture s1(test::kS1), s2(test::kS2);
  EXPECT_EQ(column_of(brute_force_lifted(s1.program, s1.top()), "x"), (V{"1", "1", "1"}));
  EXPECT_EQ(column_of(brute_force_lifted(s2.program, s2.top()), "x"), (V{"0", "1", "-1"}));
  test::Fixture sk("features A, B; model A | B; begin skip end");
  auto in = test::store_x(Lattice::Const, sk.K,
                          {Value::integer(3), Value::bot(), Value::top()});
  EXPECT_TRUE(lifted_equal(brute_force_lifted(sk.program, in), in));
}

TEST(Lifted, Monotone) {
  CaseGen g(2);
  auto r = check_monotonicity(g, 1000);
  EXPECT_TRUE(r.passed()) << r.counterexample;
}
