#pragma once

#include <vector>

#include "liftcal/lang.hpp"
#include "liftcal/lattice.hpp"

namespace liftcal {

// What an #if does to one component: leave it, replace it with the body's
// result, or join the two.
enum class GuardCase : uint8_t { Skip = 0, Apply = 1, Lub = 2 };

struct AnalysisStats {
  // Largest number of Kleene steps taken by any single while evaluation.
  size_t max_while_iterations = 0;
  size_t while_evaluations = 0;
};

// Ā′: one value per component of a.
std::vector<Value> analyze_expr_lifted(const Expr& e, const LiftedStore& a);
std::vector<Value> analyze_expr_lifted(const Expr& e, const ConfigSet& K, const LiftedStore& a);

// Ā: IfDef conditions are decided per component by entailment from the
// component's configuration. While loops compute the least x with
// x = a ⊔ Ā[[body]](x).
LiftedStore analyze_lifted(const Stmt& s, LiftedStore a, AnalysisStats* stats = nullptr);
// Rejects a whose config set differs from K.
LiftedStore analyze_lifted(const Stmt& s, const ConfigSet& K, LiftedStore a,
                           AnalysisStats* stats = nullptr);

// The plain single-program analysis over a Store. Independent of the column
// engine; rejects IfDef.
Store analyze_single(const Stmt& s, Store a);
Value analyze_expr_single(const Expr& e, const Store& a);

} // namespace liftcal
