#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "liftcal/errors.hpp"
#include "liftcal/lang.hpp"
#include "liftcal/lifted.hpp"
#include "liftcal/oracle.hpp"
#include "support.hpp"

using namespace liftcal;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string flat(const Stmt& s) {
  std::string t = pretty(s);
  std::string out;
  for (char c : t) {
    if (c == '\n') c = ' ';
    if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    out += c;
  }
  return out;
}

} // namespace

TEST(Lang, ParsesS1Structure) {
  Program p = parse_program(test::kS1);
  auto x = [] { return Expr::variable("x"); };
  auto expected = Stmt::seq(
      Stmt::assign("x", Expr::number(0)),
      Stmt::seq(Stmt::ifdef(FeatExp::atom("A"),
                            Stmt::assign("x", Expr::binary(ArithOp::Add, x(), Expr::number(1)))),
                Stmt::ifdef(FeatExp::atom("B"), Stmt::assign("x", Expr::number(1)))));
  EXPECT_TRUE(stmt_equal(*p.body, *expected));
  EXPECT_EQ(p.model.space.names(), (std::vector<std::string>{"A", "B"}));
}

TEST(Lang, LabelsArePreorderAndUnique) {
  Program p = parse_program(test::kS1);
  auto by = stmts_by_label(*p.body);
  ASSERT_EQ(by.size(), stmt_count(*p.body));
  for (size_t i = 0; i < by.size(); ++i) EXPECT_EQ(by[i]->label, static_cast<int>(i));
  EXPECT_EQ(by[0]->kind, Stmt::Kind::Seq);
  EXPECT_EQ(by[1]->kind, Stmt::Kind::Assign);
}

TEST(Lang, EmptyHeaderSkip) {
  Program p = parse_program("begin skip end");
  EXPECT_EQ(p.body->kind, Stmt::Kind::Skip);
  EXPECT_EQ(p.model.space.size(), 0u);
}

TEST(Lang, Errors) {
  EXPECT_THROW(parse_program("features A, B; begin #if (C) { skip } end"), UndeclaredFeature);
  EXPECT_THROW(parse_program("begin x := end"), ParseError);
  EXPECT_THROW(parse_program("features A, A; begin skip end"), ParseError);
  EXPECT_THROW(parse_program("begin skip"), ParseError);
  try {
    parse_program("begin\n  x := ;\nend");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Lang, NegativeLiterals) {
  Program p = parse_program("begin x := -3; y := -x end");
  auto a = analyze_single(*p.body, Store{});
  EXPECT_EQ(a.get("x"), Value::integer(-3));
  EXPECT_EQ(a.get("y"), Value::integer(3));
  Program q = parse_program(pretty(p));
  EXPECT_TRUE(stmt_equal(*p.body, *q.body));
}

TEST(Lang, LubPrintsAsIfZero) {
  auto s = Stmt::lub(Stmt::assign("x", Expr::number(1)), Stmt::skip());
  EXPECT_EQ(flat(*s), "if (0) { x := 1 } else { skip }");
  EXPECT_EQ(flat(*Stmt::skip()), "skip");
}

TEST(Lang, PrettyParseFixedPointOnS1) {
  Program p = parse_program(test::kS1);
  std::string once = pretty(p);
  EXPECT_EQ(pretty(parse_program(once)), once);
}

TEST(Lang, Preprocess) {
  Program p = parse_program(test::kS1);
  auto K = valid_configs(p.model);
  ASSERT_EQ(K.formula(1).render(), "A & !B");
  auto ab = preprocess(p, K.code(1));
  EXPECT_EQ(flat(*ab), "x := 0; x := x + 1; skip");
  auto nb = preprocess(p, K.code(2));
  EXPECT_EQ(flat(*nb), "x := 0; skip; x := 1");
  EXPECT_FALSE(contains_ifdef(*ab));
  EXPECT_EQ(preprocess(parse_program("features A; begin skip end"), 1)->kind, Stmt::Kind::Skip);
}

TEST(Lang, ProgramVars) {
  EXPECT_EQ(program_vars(parse_program(test::kS1)), std::vector<std::string>{"x"});
  EXPECT_EQ(program_vars(parse_program("begin x := 1; y := x end")),
            (std::vector<std::string>{"x", "y"}));
  EXPECT_TRUE(program_vars(parse_program("begin skip end")).empty());
}

TEST(Lang, PreprocessNeverLeavesIfDef) {
  CaseGen g(9);
  for (int i = 0; i < 300; ++i) {
    Program p = gen_random_program(g);
    auto K = valid_configs(p.model);
    for (uint64_t c : K.codes()) EXPECT_FALSE(contains_ifdef(*preprocess(p, c)));
  }
}

// Lub reparses as if (0), so structure may change but text and analysis may not.
TEST(Lang, GeneratedProgramsRoundTrip) {
  CaseGen g(21);
  for (int i = 0; i < 1000; ++i) {
    Program p = gen_random_program(g);
    std::string once = pretty(p);
    Program q = parse_program(once);
    ASSERT_EQ(pretty(q), once);
    auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
    auto top = LiftedStore::top(Lattice::Const, K, program_vars(p));
    ASSERT_TRUE(lifted_equal(analyze_lifted(*p.body, top), analyze_lifted(*q.body, top))) << once;
    if (stmt_count(*p.body) == stmt_count(*q.body) && once.find("if (0)") == std::string::npos) {
      EXPECT_TRUE(stmt_equal(*p.body, *q.body)) << once;
    }
  }
}

TEST(Lang, CorpusRoundTrip) {
  size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(LIFTCAL_CORPUS_DIR)) {
    if (entry.path().extension() != ".imp") continue;
    ++n;
    Program p = parse_program(slurp(entry.path()));
    std::string once = pretty(p);
    EXPECT_EQ(pretty(parse_program(once)), once) << entry.path();
  }
  EXPECT_EQ(n, 20u);
}
