#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "liftcal/lang.hpp"
#include "liftcal/lattice.hpp"
#include "liftcal/lifted.hpp"

namespace liftcal::detail {

using Case = GuardCase;

// Per-component cases for a guard, in component order.
using CasePolicy = std::function<std::vector<Case>(const FeatExp& guard)>;

// Ā for CasePolicy = entailment of the concrete config, D̄ for the three-way
// split on abstract meanings. Everything except IfDef is shared.
class Engine {
 public:
  Engine(CasePolicy policy, AnalysisStats* stats) : policy_(std::move(policy)), stats_(stats) {}

  LiftedStore run(const Stmt& s, LiftedStore in);
  std::vector<int64_t> eval(const Expr& e, const LiftedStore& a) const;
  const std::vector<Case>& cases(const Stmt& ifdef);

 private:
  LiftedStore run_ifdef(const Stmt& s, LiftedStore in);
  LiftedStore run_while(const Stmt& s, LiftedStore in);

  CasePolicy policy_;
  AnalysisStats* stats_;
  std::unordered_map<const Stmt*, std::vector<Case>> cache_;
};

// Combines in/out per component according to cases.
LiftedStore merge_cases(const std::vector<Case>& cases, const LiftedStore& in,
                        const LiftedStore& out);

CasePolicy concrete_policy(const ConfigSet& configs);

} // namespace liftcal::detail
