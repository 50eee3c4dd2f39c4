#include <gtest/gtest.h>

#include "liftcal/abstracted.hpp"
#include "liftcal/lifted.hpp"
#include "liftcal/oracle.hpp"
#include "support.hpp"

using namespace liftcal;
using test::column_of;
using V = std::vector<std::string>;

namespace {

LiftedStore dbar(const test::Fixture& f, std::string_view spec, Lattice l) {
  AbstractionPlan plan(parse_abstraction(spec, f.program.model.space), f.K);
  return analyze_abstracted(*f.program.body, plan.output(), f.top_over(plan.output().configs, l));
}

V values(const std::vector<Value>& vs) {
  V out;
  for (Value v : vs) out.push_back(render_value(v));
  return out;
}

} // namespace

TEST(Abstracted, JoinAOnS1KeepsConstant) {
  test::Fixture f(test::kS1);
  EXPECT_EQ(column_of(dbar(f, "proj(A) >> join", Lattice::Const), "x"), V{"1"});
  EXPECT_EQ(column_of(dbar(f, "join(A)", Lattice::Const), "x"), V{"1"});
}

TEST(Abstracted, JoinAOnS2LosesValue) {
  test::Fixture f(test::kS2);
  EXPECT_EQ(column_of(dbar(f, "proj(A) >> join", Lattice::Const), "x"), V{"top"});
}

TEST(Abstracted, SignLatticeKeepsSign) {
  test::Fixture f(test::kS2);
  EXPECT_EQ(column_of(dbar(f, "proj(A) >> join", Lattice::ConstPlus), "x"), V{">=0"});
}

TEST(Abstracted, ExpressionExamples) {
  test::Fixture f(test::kS2);
  FeatureSpace none;
  auto e = [&](const char* src) { return parse_stmt(std::string("y := ") + src, none)->expr; };
  AbstractionPlan j(Abstraction::join(), f.K);
  auto d1 = test::store_x(Lattice::Const, j.output().configs, {Value::integer(1)});
  EXPECT_EQ(values(analyze_expr_abstracted(*e("x"), d1)), V{"1"});
  AbstractionPlan p(parse_abstraction("proj(A)", f.program.model.space), f.K);
  auto d2 = test::store_x(Lattice::Const, p.output().configs, {Value::integer(0), Value::integer(1)});
  EXPECT_EQ(values(analyze_expr_abstracted(*e("x + 1"), d2)), (V{"1", "2"}));
  EXPECT_EQ(values(analyze_expr_abstracted(*e("5"), d2)), (V{"5", "5"}));
  EXPECT_EQ(values(analyze_expr_abstracted(*e("x + 1"), parse_abstraction("proj(A)", f.program.model.space),
                                           *f.K, d2)),
            (V{"1", "2"}));
}

TEST(Abstracted, GuardCasesUnderJoin) {
  test::Fixture f(test::kS1);
  AbstractionPlan j(Abstraction::join(), f.K);
  const auto& sp = f.program.model.space;
  EXPECT_EQ(guard_cases(parse_featexp("A", sp), j.output()), std::vector<GuardCase>{GuardCase::Lub});
  EXPECT_EQ(guard_cases(parse_featexp("A | B", sp), j.output()),
            std::vector<GuardCase>{GuardCase::Apply});
  EXPECT_EQ(guard_cases(parse_featexp("!A & !B", sp), j.output()),
            std::vector<GuardCase>{GuardCase::Skip});
}

TEST(Abstracted, ProjTrueEqualsLifted) {
  CaseGen g(30);
  for (int i = 0; i < 1000; ++i) {
    g.lattice = i % 2 ? Lattice::ConstPlus : Lattice::Const;
    Program p = gen_random_program(g);
    auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
    AbstractionPlan id(Abstraction::proj(FeatExp::truth()), K);
    LiftedStore a = gen_store(g, K, program_vars(p));
    ASSERT_TRUE(lifted_equal(analyze_lifted(*p.body, a),
                             analyze_abstracted(*p.body, id.output(), a)))
        << pretty(p);
  }
}

TEST(Abstracted, Soundness) {
  CaseGen g(31);
  auto r = check_soundness(g, 1000);
  EXPECT_TRUE(r.passed()) << r.counterexample;
}

TEST(Dataflow, EquationShapes) {
  test::Fixture f("features A; model true; begin skip; while (x) { x := x - 1 } end");
  auto sys = build_dataflow(f.program.body, Abstraction::join(), *f.K);
  ASSERT_EQ(sys.nodes().size(), 4u);
  using U = EquationSystem::Unknown;
  // skip: out reads its own in.
  EXPECT_EQ(sys.reads({1, U::Out}), (std::vector<EquationSystem::Ref>{{1, U::In}}));
  // while body: in reads the loop's in and the body's out.
  auto body_in = sys.reads({3, U::In});
  EXPECT_EQ(body_in.size(), 2u);
  EXPECT_NE(std::find(body_in.begin(), body_in.end(), EquationSystem::Ref{2, U::In}), body_in.end());
  EXPECT_NE(std::find(body_in.begin(), body_in.end(), EquationSystem::Ref{3, U::Out}), body_in.end());
  EXPECT_FALSE(sys.render().empty());
}

TEST(Dataflow, StraightLineMatchesCompositional) {
  test::Fixture f(test::kS1);
  auto sys = build_dataflow(f.program.body, parse_abstraction("proj(A) >> join", f.program.model.space), *f.K);
  auto entry = f.top_over(sys.configs().configs);
  auto sol = solve_dataflow(sys, entry);
  EXPECT_EQ(column_of(sol.at(0).out, "x"), V{"1"});
  auto plain = build_dataflow(f.program.body, Abstraction::join(), *f.K);
  EXPECT_EQ(column_of(solve_dataflow(plain, f.top_over(plain.configs().configs)).at(0).out, "x"), V{"top"});
  EXPECT_TRUE(lifted_equal(sol.at(0).out, analyze_abstracted(*f.program.body, sys.configs(), entry)));
}

TEST(Dataflow, IfDefUnderJoinIsMixedCase) {
  test::Fixture f(test::kS2);
  auto sys = build_dataflow(f.program.body, Abstraction::join(), *f.K);
  size_t ifdefs = 0;
  for (const auto& n : sys.nodes()) {
    if (n.stmt->kind != Stmt::Kind::IfDef) continue;
    ++ifdefs;
    EXPECT_EQ(n.cases, std::vector<GuardCase>{GuardCase::Lub});
  }
  EXPECT_EQ(ifdefs, 2u);
}

TEST(Dataflow, LoopIsUpperBound) {
  test::Fixture f("features A; model true; begin x := 0; while (x < 5) { #if (A) { x := x + 1 } } end");
  auto sys = build_dataflow(f.program.body, parse_abstraction("proj(A)", f.program.model.space), *f.K);
  auto entry = f.top_over(sys.configs().configs);
  auto sol = solve_dataflow(sys, entry);
  auto comp = analyze_abstracted(*f.program.body, sys.configs(), entry);
  EXPECT_TRUE(lifted_leq(comp, sol.at(0).out));
  for (const auto& row : sol.rows) {
    const Stmt& s = *sys.nodes()[static_cast<size_t>(row.label)].stmt;
    EXPECT_TRUE(lifted_leq(analyze_abstracted(s, sys.configs(), row.in), row.out));
  }
}

TEST(Dataflow, SkipProgramOutIsEntry) {
  test::Fixture f("features A, B; model A | B; begin skip end");
  auto sys = build_dataflow(f.program.body, parse_abstraction("proj(true)", f.program.model.space), *f.K);
  auto entry = test::store_x(Lattice::Const, sys.configs().configs,
                             {Value::integer(2), Value::bot(), Value::top()});
  auto sol = solve_dataflow(sys, entry);
  EXPECT_TRUE(lifted_equal(sol.at(0).out, entry));
}

TEST(Dataflow, SoundAtEveryLabel) {
  CaseGen g(32);
  auto r = check_dataflow(g, 1000);
  EXPECT_TRUE(r.passed()) << r.counterexample;
}
