#include <gtest/gtest.h>

#include "liftcal/errors.hpp"
#include "liftcal/featexp.hpp"
#include "liftcal/oracle.hpp"
#include "support.hpp"

using namespace liftcal;

namespace {

const FeatureSpace kAB({"A", "B"});

FeatExp fe(std::string_view s, const FeatureSpace& sp = kAB) { return parse_featexp(s, sp); }

// Reference evaluator over the tree, independent of Predicate and Valuations.
bool ref_eval(const FeatExp& e, const FeatureSpace& sp, uint64_t code) {
  using K = FeatExp::Kind;
  switch (e.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: return (code >> sp.index(e.name())) & 1U;
    case K::Not: return !ref_eval(e.kids()[0], sp, code);
    case K::And:
      for (const auto& k : e.kids()) {
        if (!ref_eval(k, sp, code)) return false;
      }
      return true;
    case K::Or:
      for (const auto& k : e.kids()) {
        if (ref_eval(k, sp, code)) return true;
      }
      return false;
    case K::Implies: return !ref_eval(e.kids()[0], sp, code) || ref_eval(e.kids()[1], sp, code);
  }
  return false;
}

} // namespace

TEST(FeatExp, ParsePrecedence) {
  EXPECT_EQ(fe("A | B"), FeatExp::atom("A") | FeatExp::atom("B"));
  EXPECT_EQ(fe("!A & B"), !FeatExp::atom("A") & FeatExp::atom("B"));
  EXPECT_EQ(fe("A & B | !A"), (FeatExp::atom("A") & FeatExp::atom("B")) | !FeatExp::atom("A"));
  EXPECT_THROW(fe("A => C"), UndeclaredFeature);
  EXPECT_THROW(fe("A &"), ParseError);
}

TEST(FeatExp, RenderParsesBack) {
  for (const char* s : {"A | B", "!A & B", "(A | B) & !B", "A => B => A", "!(A & B)", "true", "false"}) {
    FeatExp e = fe(s);
    EXPECT_EQ(fe(e.render()), e) << s;
  }
}

TEST(FeatExp, EvalExamples) {
  // Bit i of a code is feature i.
  EXPECT_TRUE(eval(fe("A | B"), kAB, 0b01));
  EXPECT_FALSE(eval(fe("B"), kAB, 0b01));
  EXPECT_FALSE(eval(fe("!A & B"), kAB, 0b11));
  EXPECT_TRUE(eval(fe("!A & B"), kAB, 0b10));
  EXPECT_TRUE(eval(fe("true"), kAB, 0b00));
}

TEST(FeatExp, SatEntailsEquivExamples) {
  EXPECT_FALSE(sat(fe("A & !A"), kAB));
  EXPECT_TRUE(sat(fe("A | B"), kAB));
  EXPECT_TRUE(sat(fe("((A & B) | (A & !B)) & !B"), kAB));
  EXPECT_TRUE(entails(fe("A & B"), fe("A"), kAB));
  EXPECT_TRUE(entails(fe("(A & B) | (A & !B)"), fe("A"), kAB));
  EXPECT_FALSE(entails(fe("A | B"), fe("A"), kAB));
  EXPECT_TRUE(equiv(fe("A | B"), fe("B | A"), kAB));
  EXPECT_TRUE(equiv(fe("A"), fe("A & (B | !B)"), kAB));
  EXPECT_FALSE(equiv(fe("A"), fe("A & B"), kAB));
}

TEST(FeatExp, ValidConfigsExamples) {
  auto K = valid_configs({kAB, fe("A | B")});
  EXPECT_EQ(test::formulas_of(K), (std::vector<std::string>{"A & B", "A & !B", "!A & B"}));
  FeatureSpace a({"A"});
  EXPECT_TRUE(valid_configs({a, FeatExp::falsity()}).empty());
  FeatureSpace abc({"A", "B", "C"});
  auto all = valid_configs({abc, FeatExp::truth()});
  ASSERT_EQ(all.size(), 8u);
  EXPECT_EQ(all.formula(0).render(), "A & B & C");
  EXPECT_EQ(all.formula(1).render(), "A & B & !C");
  EXPECT_EQ(all.formula(7).render(), "!A & !B & !C");
}

TEST(FeatExp, EliminateExamples) {
  EXPECT_TRUE(equiv(eliminate(fe("A & B"), "A"), fe("B"), kAB));
  EXPECT_TRUE(equiv(eliminate(fe("A | B"), "A"), fe("true"), kAB));
  EXPECT_TRUE(equiv(eliminate(fe("!A & B"), "A"), fe("B"), kAB));
  EXPECT_FALSE(eliminate(fe("!A & B"), "A").mentions("A"));
}

TEST(FeatExp, RankCodeBijection) {
  for (size_t n = 0; n <= 6; ++n) {
    for (uint64_t r = 0; r < (uint64_t{1} << n); ++r) EXPECT_EQ(rank_of(n, code_at_rank(n, r)), r);
  }
}

TEST(FeatExp, RandomFormulaProperties) {
  CaseGen g(77);
  for (int i = 0; i < 1000; ++i) {
    FeatureSpace sp = gen_space(g);
    FeatExp phi = gen_featexp(g, sp, 4);
    FeatExp theta = gen_featexp(g, sp, 3);
    EXPECT_EQ(sat(phi, sp), !valid(!phi, sp));
    EXPECT_EQ(entails(phi, theta, sp), !sat(phi & !theta, sp));
    EXPECT_TRUE(equiv(phi, !!phi, sp));
    Predicate pred(phi, sp);
    Valuations vs = Valuations::of(phi, sp);
    size_t count = 0;
    for (uint64_t c = 0; c < (uint64_t{1} << sp.size()); ++c) {
      bool expect = ref_eval(phi, sp, c);
      ASSERT_EQ(pred(c), expect);
      ASSERT_EQ(eval(phi, sp, c), expect);
      ASSERT_EQ(vs.contains(c), expect);
      count += expect;
    }
    EXPECT_EQ(vs.count(), count);
    EXPECT_TRUE(equiv(vs.to_formula(sp), phi, sp));
    EXPECT_EQ(parse_featexp(phi.render(), sp), phi);
    if (sp.size() > 0) {
      const std::string& a = sp.name(g.below(sp.size()));
      FeatExp el = eliminate(phi, a);
      EXPECT_TRUE(equiv(el, phi.substitute(a, true) | phi.substitute(a, false), sp));
      EXPECT_TRUE(entails(phi, el, sp));
    }
  }
}

TEST(FeatExp, WideSpaceEnumerationMatchesDense) {
  CaseGen g(78);
  for (int i = 0; i < 300; ++i) {
    FeatureSpace sp = gen_space(g);
    FeatExp phi = gen_featexp(g, sp, 4);
    std::vector<std::string> names = sp.names();
    uint64_t tail = 0;
    FeatExp psi = phi;
    for (size_t w = 0; w < 20; ++w) {
      names.push_back("W" + std::to_string(w));
      bool on = g.coin(50);
      if (on) tail |= uint64_t{1} << (sp.size() + w);
      FeatExp atom = FeatExp::atom(names.back());
      psi = psi & (on ? atom : !atom);
    }
    FeatureSpace wide(names);
    ASSERT_GT(wide.size(), kMaxDenseFeatures);
    auto narrow = valid_configs(FeatureModel{sp, phi});
    auto got = valid_configs(FeatureModel{wide, psi});
    ASSERT_EQ(got.size(), narrow.size());
    for (size_t k = 0; k < got.size(); ++k) EXPECT_EQ(got.code(k), narrow.code(k) | tail);
  }
  FeatureSpace big([] {
    std::vector<std::string> v;
    for (int i = 0; i < 24; ++i) v.push_back("F" + std::to_string(i));
    return v;
  }());
  auto two = valid_configs(FeatureModel{big, parse_featexp("F0 & F1 & F2 & F3 & F4 & F5 & F6 & F7 & "
                                                           "F8 & F9 & F10 & F11 & F12 & F13 & F14 & "
                                                           "F15 & F16 & F17 & F18 & F19 & F20 & F21 & F22",
                                                           big)});
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two.code(0), (uint64_t{1} << 24) - 1);
  EXPECT_EQ(two.code(1), (uint64_t{1} << 23) - 1);
}

TEST(Valuations, SetAlgebraAgainstBruteForce) {
  CaseGen g(3);
  for (int i = 0; i < 500; ++i) {
    FeatureSpace sp = gen_space(g);
    FeatExp p = gen_featexp(g, sp, 3), q = gen_featexp(g, sp, 3);
    Valuations a = Valuations::of(p, sp), b = Valuations::of(q, sp);
    EXPECT_EQ(a.unite(b), Valuations::of(p | q, sp));
    EXPECT_EQ(a.intersect(b), Valuations::of(p & q, sp));
    EXPECT_EQ(a.complement(), Valuations::of(!p, sp));
    EXPECT_EQ(a.subset_of(b), entails(p, q, sp));
    EXPECT_EQ(a.intersects(b), sat(p & q, sp));
    if (sp.size() > 0) {
      size_t f = g.below(sp.size());
      EXPECT_EQ(a.forget(f), Valuations::of(eliminate(p, sp.name(f)), sp));
    }
    auto members = a.members();
    EXPECT_EQ(Valuations::from_codes(sp.size(), members), a);
    for (uint64_t c : members) {
      Valuations one = Valuations::single(sp.size(), c);
      EXPECT_TRUE(one.subset_of(a));
      EXPECT_EQ(one.single_code(), c);
    }
  }
}

TEST(ConfigSet, FindByCodeAndFormula) {
  auto K = valid_configs({kAB, fe("A | B")});
  EXPECT_EQ(K.find(fe("B & !A")), std::optional<size_t>(2));
  EXPECT_EQ(K.find(fe("!A & !B")), std::nullopt);
  EXPECT_EQ(K.find(K.code(1)), std::optional<size_t>(1));
}
