#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "liftcal/abstraction.hpp"
#include "liftcal/lang.hpp"
#include "liftcal/lattice.hpp"

namespace liftcal {

// Deterministic case generator. Feature names are A, B, C, D.
struct CaseGen {
  uint64_t seed = 0;
  size_t max_features = 4;
  size_t max_depth = 6;
  size_t max_vars = 3;
  size_t max_abs_depth = 3;
  Lattice lattice = Lattice::Const;
  std::mt19937_64 rng;

  explicit CaseGen(uint64_t s = 0, Lattice l = Lattice::Const) : seed(s), lattice(l), rng(s) {}

  size_t below(size_t n) { return static_cast<size_t>(rng() % n); }
  bool coin(unsigned percent) { return below(100) < percent; }
};

// Values used by property tests: bot, top, -2..2, and for Const+ the signs.
std::vector<Value> carrier(Lattice l);

FeatureSpace gen_space(CaseGen& g);
FeatExp gen_featexp(CaseGen& g, const FeatureSpace& space, size_t depth = 3);
ExprPtr gen_expr(CaseGen& g, const std::vector<std::string>& vars, size_t depth);
StmtPtr gen_stmt(CaseGen& g, const FeatureSpace& space, const std::vector<std::string>& vars,
                 size_t depth);
// Labeled program over a random space; the model is satisfiable.
Program gen_random_program(CaseGen& g);
Abstraction gen_random_abstraction(CaseGen& g, const FeatureSpace& space, const ConfigSet& K);
LiftedStore gen_store(CaseGen& g, std::shared_ptr<const ConfigSet> K,
                      const std::vector<std::string>& vars);
// A store above s, raising each entry with some probability.
LiftedStore gen_above(CaseGen& g, const LiftedStore& s);

// Per-variant analysis of preprocessed programs.
LiftedStore brute_force_lifted(const Program& p, const LiftedStore& a);

struct PropertyReport {
  std::string name;
  size_t cases = 0;
  size_t failures = 0;
  // First failing case, shrunk when the property supports it.
  std::string counterexample;

  bool passed() const { return failures == 0; }
};

using GammaFn = std::function<LiftedStore(const AbstractionPlan&, const LiftedStore&)>;

// Adjunction, extensiveness, reductiveness and finite join preservation of
// alpha over K on generated stores. gamma overrides the concretization
// (used to check that the checker notices a broken one).
PropertyReport check_galois(const Abstraction& alpha, std::shared_ptr<const ConfigSet> K,
                            CaseGen& g, size_t cases, const GammaFn& gamma = {});
// Same on random abstractions and configuration sets.
PropertyReport check_galois_random(CaseGen& g, size_t cases);
// fignore against its expansion; join(phi) and fproj against their sugar.
PropertyReport check_fignore(CaseGen& g, size_t cases);
// alpha(A(gamma(d))) <= D(d) for statements and expressions.
PropertyReport check_soundness(CaseGen& g, size_t cases);
// Lifted and abstracted analyses are monotone.
PropertyReport check_monotonicity(CaseGen& g, size_t cases);
// D_alpha[[s]] d equals the lifted analysis of the reconfigured program.
PropertyReport check_commutation(CaseGen& g, size_t cases);
// Least data-flow solution is sound at every label, exact without loops.
PropertyReport check_dataflow(CaseGen& g, size_t cases);
// Lifted analysis equals the per-variant brute force.
PropertyReport check_oracle_equiv(CaseGen& g, size_t cases);

std::vector<PropertyReport> check_all(uint64_t seed, size_t cases);

// Targeted checks for one program and abstraction: soundness and
// commutation from top and from generated inputs.
std::vector<PropertyReport> check_instance(const Program& p, const Abstraction& alpha,
                                           uint64_t seed, size_t cases);

// Greedy shrinking by subtree replacement: returns the smallest statement
// found for which fails still holds.
StmtPtr shrink_stmt(const StmtPtr& s, const std::function<bool(const StmtPtr&)>& fails);

} // namespace liftcal
