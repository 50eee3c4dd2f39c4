#include "liftcal/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>

#include "liftcal/abstracted.hpp"
#include "liftcal/lifted.hpp"

namespace liftcal {

Program bench_program(size_t n, uint64_t seed) {
  if (n > kMaxBenchFeatures) {
    throw std::invalid_argument("bench supports at most " + std::to_string(kMaxBenchFeatures) +
                                " features");
  }
  std::vector<std::string> names;
  for (size_t i = 1; i <= n; ++i) names.push_back("A" + std::to_string(i));
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (seed != 0) std::shuffle(order.begin(), order.end(), std::mt19937_64(seed));

  std::vector<StmtPtr> items{Stmt::assign("x", Expr::number(0))};
  for (size_t i : order) {
    // x counts enabled features; v<i> snapshots it.
    auto body = Stmt::seq(
        Stmt::assign("x", Expr::binary(ArithOp::Add, Expr::variable("x"), Expr::number(1))),
        Stmt::assign("v" + std::to_string(i + 1), Expr::variable("x")));
    items.push_back(Stmt::ifdef(FeatExp::atom(names[i]), body));
  }
  return Program{FeatureModel{FeatureSpace(names), FeatExp::truth()}, relabel(seq_of(items))};
}

namespace {

template <class F>
double time_ms(F&& run) {
  using Clock = std::chrono::steady_clock;
  double best = 1e300;
  for (int batch = 0; batch < 5; ++batch) {
    size_t reps = 0;
    auto t0 = Clock::now();
    double elapsed = 0;
    do {
      run();
      ++reps;
      elapsed = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    } while (elapsed < 20.0);
    best = std::min(best, elapsed / static_cast<double>(reps));
  }
  return best;
}

} // namespace

BenchRow run_bench(size_t n, uint64_t seed) {
  Program p = bench_program(n, seed);
  auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
  auto vars = program_vars(p);

  AbstractionPlan join_plan(Abstraction::join(), K);
  std::vector<FeatExp> half;
  for (size_t i = 1; i <= n / 2; ++i) half.push_back(FeatExp::atom("A" + std::to_string(i)));
  AbstractionPlan pj_plan(
      Abstraction::compose(Abstraction::join(), Abstraction::proj(FeatExp::conj(std::move(half)))),
      K);

  const LiftedStore a = LiftedStore::top(Lattice::Const, K, vars);
  const LiftedStore dj = LiftedStore::top(Lattice::Const, join_plan.output().configs, vars);
  const LiftedStore dp = LiftedStore::top(Lattice::Const, pj_plan.output().configs, vars);

  BenchRow row;
  row.features = n;
  row.configs = K->size();
  volatile size_t sink = 0;
  row.lifted_ms = time_ms([&] { sink = sink + analyze_lifted(*p.body, a).size(); });
  row.join_ms = time_ms(
      [&] { sink = sink + analyze_abstracted(*p.body, join_plan.output(), dj).size(); });
  row.half_ms =
      time_ms([&] { sink = sink + analyze_abstracted(*p.body, pj_plan.output(), dp).size(); });
  return row;
}

} // namespace liftcal
