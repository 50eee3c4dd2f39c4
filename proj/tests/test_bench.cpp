#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "liftcal/abstracted.hpp"
#include "liftcal/bench.hpp"
#include "liftcal/lifted.hpp"

using namespace liftcal;

TEST(Bench, ProgramShape) {
  Program p = bench_program(5);
  EXPECT_EQ(p.model.space.size(), 5u);
  EXPECT_EQ(valid_configs(p.model).size(), 32u);
  std::vector<StmtPtr> items;
  flatten_seq(p.body, items);
  ASSERT_EQ(items.size(), 6u);
  for (size_t i = 1; i < items.size(); ++i) EXPECT_EQ(items[i]->kind, Stmt::Kind::IfDef);
  EXPECT_FALSE(contains_ifdef(*items[0]));
}

TEST(Bench, SeedPermutesBlocksOnly) {
  Program a = bench_program(6, 0), b = bench_program(6, 99);
  EXPECT_NE(pretty(a), pretty(b));
  EXPECT_EQ(program_vars(a).size(), program_vars(b).size());
  EXPECT_EQ(pretty(bench_program(6, 99)), pretty(b));
}

TEST(Bench, LiftedCountsEnabledFeatures) {
  Program p = bench_program(3);
  auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
  auto r = analyze_lifted(*p.body, LiftedStore::top(Lattice::Const, K, program_vars(p)));
  for (size_t k = 0; k < K->size(); ++k) {
    int64_t on = std::popcount(K->code(k));
    EXPECT_EQ(r.get(k, "x"), Value::integer(on));
  }
}

TEST(Bench, RefusesTooManyFeatures) {
  EXPECT_THROW(bench_program(kMaxBenchFeatures + 1), std::invalid_argument);
  EXPECT_THROW(run_bench(kMaxBenchFeatures + 1), std::invalid_argument);
}

TEST(Bench, ZeroFeatures) {
  BenchRow r = run_bench(0);
  EXPECT_EQ(r.configs, 1u);
  EXPECT_GT(r.lifted_ms, 0.0);
  EXPECT_TRUE(std::isfinite(r.join_speedup()));
}
