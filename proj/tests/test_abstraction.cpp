#include <gtest/gtest.h>

#include "liftcal/abstraction.hpp"
#include "liftcal/errors.hpp"
#include "liftcal/oracle.hpp"
#include "support.hpp"

using namespace liftcal;
using test::column_of;
using V = std::vector<std::string>;
using AK = Abstraction::Kind;

namespace {

const FeatureSpace kAB({"A", "B"});

FeatExp fe(std::string_view s) { return parse_featexp(s, kAB); }
Abstraction abs(std::string_view s) { return parse_abstraction(s, kAB); }

LiftedStore s2_store(const test::Fixture& f) {
  return test::store_x(Lattice::Const, f.K,
                       {Value::integer(0), Value::integer(1), Value::integer(-1)});
}
LiftedStore s1_store(const test::Fixture& f) {
  return test::store_x(Lattice::Const, f.K,
                       {Value::integer(1), Value::integer(1), Value::integer(1)});
}

V meanings_of(const AbstractedConfigs& ac) {
  V out;
  for (size_t j = 0; j < ac.size(); ++j) out.push_back(ac.meaning_formula(j).render());
  return out;
}

} // namespace

TEST(AbsDsl, ParseExamples) {
  EXPECT_EQ(abs("join"), Abstraction::join());
  EXPECT_EQ(abs("proj(A) >> join"),
            Abstraction::compose(Abstraction::join(), Abstraction::proj(fe("A"))));
  EXPECT_EQ(abs("(proj(A) >> join) || proj(B)"),
            Abstraction::product(
                Abstraction::compose(Abstraction::join(), Abstraction::proj(fe("A"))),
                Abstraction::proj(fe("B"))));
  EXPECT_EQ(abs("join(A)").kind(), AK::JoinPhi);
  EXPECT_EQ(abs("fignore(A)").kind(), AK::FIgnore);
  EXPECT_EQ(abs("fproj(A, B)").features(), (V{"A", "B"}));
}

TEST(AbsDsl, ComposeChainsLeftToRight) {
  // a >> b >> c applies a first.
  EXPECT_EQ(abs("proj(A) >> proj(B) >> join"),
            Abstraction::compose(Abstraction::join(),
                                 Abstraction::compose(Abstraction::proj(fe("B")),
                                                      Abstraction::proj(fe("A")))));
}

TEST(AbsDsl, Errors) {
  EXPECT_THROW(abs("pro("), ParseError);
  EXPECT_THROW(abs("join >>"), ParseError);
  EXPECT_THROW(abs("proj(C)"), UndeclaredFeature);
  EXPECT_THROW(abs("fignore(C)"), UndeclaredFeature);
  EXPECT_THROW(abs("join extra"), ParseError);
}

TEST(AbsDsl, RenderRoundTripOnRandomAbstractions) {
  CaseGen g(4);
  for (int i = 0; i < 1000; ++i) {
    FeatureSpace sp = gen_space(g);
    auto K = valid_configs({sp, FeatExp::truth()});
    Abstraction a = gen_random_abstraction(g, sp, K);
    ASSERT_EQ(parse_abstraction(a.render(), sp), a) << a.render();
  }
}

TEST(AbstractConfigs, JoinNamesTheDisjunction) {
  test::Fixture f(test::kS1);
  auto ac = abstract_configs(abs("join"), *f.K);
  EXPECT_EQ(ac.space().names(), V{"Z1"});
  EXPECT_EQ(test::formulas_of(*ac.configs), V{"Z1"});
  EXPECT_TRUE(equiv(ac.meaning_formula(0), fe("(A & B) | (A & !B) | (!A & B)"), kAB));
  ASSERT_EQ(ac.renames.entries.size(), 1u);
  EXPECT_EQ(ac.renames.render(), "Z1 = (A & B) | (A & !B) | (!A & B)\n");
}

TEST(AbstractConfigs, ProjFilters) {
  test::Fixture f(test::kS1);
  auto ac = abstract_configs(abs("proj(A)"), *f.K);
  EXPECT_EQ(test::formulas_of(*ac.configs), (V{"A & B", "A & !B"}));
  EXPECT_TRUE(ac.renames.entries.empty());
}

TEST(AbstractConfigs, ProductUnifiesAlphabets) {
  test::Fixture f(test::kS1);
  auto ac = abstract_configs(abs("(proj(A) >> join) || proj(B)"), *f.K);
  EXPECT_EQ(ac.space().names(), (V{"Z1", "A", "B"}));
  EXPECT_EQ(test::formulas_of(*ac.configs), (V{"Z1 & !A & !B", "!Z1 & A & B", "!Z1 & !A & B"}));
  EXPECT_EQ(meanings_of(ac), (V{"(A & B) | (A & !B)", "A & B", "!A & B"}));
}

TEST(AbstractConfigs, JoinOverEmptySetIsFalse) {
  test::Fixture f(test::kS1);
  AbstractionPlan plan(abs("proj(A & !A) >> join"), f.K);
  ASSERT_EQ(plan.output().size(), 1u);
  EXPECT_EQ(plan.output().meaning_formula(0).render(), "false");
  auto d = plan.alpha(s2_store(f));
  EXPECT_EQ(column_of(d, "x"), V{"bot"});
}

TEST(Alpha, JoinExamples) {
  test::Fixture f(test::kS2);
  EXPECT_EQ(column_of(alpha_apply(abs("join"), *f.K, s2_store(f)), "x"), V{"top"});
  EXPECT_EQ(column_of(alpha_apply(abs("join"), *f.K, s1_store(f)), "x"), V{"1"});
}

TEST(Alpha, ProjExamples) {
  test::Fixture f(test::kS2);
  EXPECT_EQ(column_of(alpha_apply(abs("proj(A)"), *f.K, s2_store(f)), "x"), (V{"0", "1"}));
  EXPECT_EQ(column_of(alpha_apply(abs("proj(!A)"), *f.K, s2_store(f)), "x"), (V{"-1"}));
}

TEST(Alpha, FIgnoreExamples) {
  test::Fixture f(test::kS2);
  AbstractionPlan ia(abs("fignore(A)"), f.K);
  EXPECT_EQ(column_of(ia.alpha(s2_store(f)), "x"), (V{"top", "1"}));
  ASSERT_EQ(ia.output().size(), 2u);
  EXPECT_TRUE(equiv(ia.output().meaning_formula(0), fe("(A & B) | (!A & B)"), kAB));
  EXPECT_TRUE(equiv(ia.output().meaning_formula(1), fe("A & !B"), kAB));

  AbstractionPlan ib(abs("fignore(B)"), f.K);
  EXPECT_EQ(column_of(ib.alpha(s2_store(f)), "x"), (V{"top", "-1"}));
  EXPECT_TRUE(equiv(ib.output().meaning_formula(0), fe("(A & B) | (A & !B)"), kAB));
  EXPECT_TRUE(equiv(ib.output().meaning_formula(1), fe("!A & B"), kAB));
}

TEST(Alpha, ProjTrueIsIdentityAndProjFalseIsEmpty) {
  test::Fixture f(test::kS2);
  AbstractionPlan id(abs("proj(true)"), f.K);
  EXPECT_EQ(*id.output().configs, *f.K);
  EXPECT_TRUE(lifted_equal(id.alpha(s2_store(f)), s2_store(f)));
  AbstractionPlan none(abs("proj(false)"), f.K);
  EXPECT_EQ(none.output().size(), 0u);
  EXPECT_EQ(none.alpha(s2_store(f)).size(), 0u);
  EXPECT_EQ(column_of(none.gamma(none.alpha(s2_store(f))), "x"), (V{"top", "top", "top"}));
}

TEST(Gamma, Examples) {
  test::Fixture f(test::kS2);
  AbstractionPlan j(abs("join"), f.K);
  auto d = test::store_x(Lattice::Const, j.output().configs, {Value::integer(1)});
  EXPECT_EQ(column_of(j.gamma(d), "x"), (V{"1", "1", "1"}));

  AbstractionPlan p(abs("proj(A)"), f.K);
  auto e = test::store_x(Lattice::Const, p.output().configs, {Value::integer(0), Value::integer(1)});
  EXPECT_EQ(column_of(p.gamma(e), "x"), (V{"0", "1", "top"}));
}

// gamma of a product is the meet of the two side concretizations.
TEST(Gamma, ProductIsMeetOfSides) {
  CaseGen g(8);
  test::Fixture f("features A, B, C; model A | C; begin x := 0; y := 0 end");
  for (int i = 0; i < 300; ++i) {
    FeatExp p = gen_featexp(g, f.program.model.space, 2);
    FeatExp q = gen_featexp(g, f.program.model.space, 2);
    Abstraction l = Abstraction::proj(p), r = Abstraction::proj(q);
    AbstractionPlan prod(Abstraction::product(l, r), f.K);
    AbstractionPlan pl(l, f.K), pr(r, f.K);
    LiftedStore d = gen_store(g, prod.output().configs, f.vars);
    auto restrict_to = [&](const AbstractionPlan& side) {
      LiftedStore out = LiftedStore::top(d.lattice(), side.output().configs, f.vars);
      for (size_t j = 0; j < out.size(); ++j) {
        size_t k = *prod.output().configs->find(side.output().configs->code(j));
        for (const auto& v : f.vars) out.set(j, v, d.get(k, v));
      }
      return out;
    };
    auto expect = lifted_meet(pl.gamma(restrict_to(pl)), pr.gamma(restrict_to(pr)));
    ASSERT_TRUE(lifted_equal(prod.gamma(d), expect));
  }
}

TEST(FIgnoreExpand, Examples) {
  test::Fixture f(test::kS2);
  Abstraction ea = fignore_expand("A", *f.K);
  ASSERT_EQ(ea.kind(), AK::Product);
  ASSERT_EQ(ea.left().kind(), AK::JoinPhi);
  ASSERT_EQ(ea.right().kind(), AK::JoinPhi);
  EXPECT_TRUE(equiv(ea.left().phi(), fe("(A & B) | (!A & B)"), kAB));
  EXPECT_TRUE(equiv(ea.right().phi(), fe("A & !B"), kAB));

  Abstraction eb = fignore_expand("B", *f.K);
  EXPECT_TRUE(equiv(eb.left().phi(), fe("(A & B) | (A & !B)"), kAB));
  EXPECT_TRUE(equiv(eb.right().phi(), fe("!A & B"), kAB));

  FeatureSpace a({"A"});
  Abstraction single = fignore_expand("A", valid_configs({a, FeatExp::atom("A")}));
  EXPECT_EQ(single.kind(), AK::JoinPhi);
  EXPECT_TRUE(equiv(single.phi(), FeatExp::atom("A"), a));
}

TEST(FreshFeature, Examples) {
  EXPECT_EQ(fresh_feature({"A", "B"}), "Z1");
  EXPECT_EQ(fresh_feature({"A", "Z1"}), "Z2");
  EXPECT_EQ(fresh_feature({"Z1", "Z2"}), "Z3");
}

TEST(FreshFeature, NeverCollidesWithDeclaredNames) {
  test::Fixture f("features Z1, A; model true; begin x := 0 end");
  auto ac = abstract_configs(parse_abstraction("join || proj(A)", f.program.model.space), *f.K);
  for (const auto& e : ac.renames.entries) EXPECT_NE(e.name, "Z1");
}

TEST(Galois, JoinOnPaperConfigs) {
  test::Fixture f(test::kS1);
  CaseGen g(10);
  auto r = check_galois(Abstraction::join(), f.K, g, 200);
  EXPECT_TRUE(r.passed()) << r.counterexample;
  auto none = check_galois(abs("proj(false)"), f.K, g, 200);
  EXPECT_TRUE(none.passed()) << none.counterexample;
}

TEST(Galois, CorruptedGammaIsCaught) {
  test::Fixture f(test::kS1);
  CaseGen g(10);
  GammaFn broken = [](const AbstractionPlan& plan, const LiftedStore& d) {
    LiftedStore out = plan.gamma(d);
    // Drop everything to bot: no longer extensive.
    return LiftedStore::bot(out.lattice(), out.config_ptr(), out.vars());
  };
  auto r = check_galois(Abstraction::join(), f.K, g, 200, broken);
  EXPECT_FALSE(r.passed());
  EXPECT_NE(r.counterexample.find("extensive"), std::string::npos) << r.counterexample;
}

TEST(Galois, AllConstructorsOnRandomInputs) {
  CaseGen g(12);
  auto r = check_galois_random(g, 1400);
  EXPECT_TRUE(r.passed()) << r.counterexample;
  EXPECT_GE(r.cases, 1400u);
}

TEST(Galois, FIgnoreMatchesExpansionAndSugar) {
  CaseGen g(13);
  auto r = check_fignore(g, 1000);
  EXPECT_TRUE(r.passed()) << r.counterexample;
}

TEST(Plan, OutputStoreMatchesOutputConfigs) {
  CaseGen g(14);
  for (int i = 0; i < 300; ++i) {
    Program p = gen_random_program(g);
    auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
    Abstraction a = gen_random_abstraction(g, p.model.space, *K);
    AbstractionPlan plan(a, K);
    auto vars = program_vars(p);
    LiftedStore d = plan.alpha(gen_store(g, K, vars));
    ASSERT_EQ(d.configs(), *plan.output().configs);
    ASSERT_EQ(abstract_configs(a, *K).configs->codes().size(), plan.output().size());
  }
}

TEST(Plan, RejectsStoreOverOtherConfigs) {
  test::Fixture f(test::kS1);
  AbstractionPlan plan(abs("join"), f.K);
  auto other = std::make_shared<const ConfigSet>(FeatureSpace{}, std::vector<uint64_t>{0});
  EXPECT_THROW(plan.alpha(LiftedStore::top(Lattice::Const, other, {"x"})), SemanticError);
}
