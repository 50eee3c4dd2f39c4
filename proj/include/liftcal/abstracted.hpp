#pragma once

#include <memory>
#include <vector>

#include "liftcal/abstraction.hpp"
#include "liftcal/lang.hpp"
#include "liftcal/lattice.hpp"
#include "liftcal/lifted.hpp"

namespace liftcal {

// Per abstract config: Apply if its meaning entails theta, Skip if it
// entails !theta, Lub otherwise. An empty meaning counts as Apply.
std::vector<GuardCase> guard_cases(const FeatExp& theta, const AbstractedConfigs& ac);

std::vector<Value> analyze_expr_abstracted(const Expr& e, const LiftedStore& d);
std::vector<Value> analyze_expr_abstracted(const Expr& e, const Abstraction& alpha,
                                           const ConfigSet& K, const LiftedStore& d);

// d must be indexed by ac.configs.
LiftedStore analyze_abstracted(const Stmt& s, const AbstractedConfigs& ac, LiftedStore d,
                               AnalysisStats* stats = nullptr);
LiftedStore analyze_abstracted(const Stmt& s, const Abstraction& alpha, const ConfigSet& K,
                               LiftedStore d, AnalysisStats* stats = nullptr);

// Data-flow form of the abstracted analysis: one in and one out unknown per
// labeled statement.
class EquationSystem {
 public:
  enum class Unknown : uint8_t { In, Out };
  struct Ref {
    size_t node;
    Unknown which;
    friend bool operator==(const Ref&, const Ref&) = default;
  };
  struct Node {
    const Stmt* stmt;
    std::ptrdiff_t parent = -1;
    std::ptrdiff_t first = -1;   // s0
    std::ptrdiff_t second = -1;  // s1
    std::vector<GuardCase> cases;  // IfDef
  };

  EquationSystem(StmtPtr s, std::shared_ptr<const AbstractedConfigs> ac);

  const std::vector<Node>& nodes() const { return nodes_; }
  const AbstractedConfigs& configs() const { return *ac_; }
  const std::shared_ptr<const AbstractedConfigs>& config_ptr() const { return ac_; }
  const std::vector<std::string>& vars() const { return vars_; }
  // Unknowns read by the equation defining r.
  std::vector<Ref> reads(Ref r) const;
  // One line per equation, e.g. "out[3] = in[3]".
  std::string render() const;

 private:
  StmtPtr root_;
  std::shared_ptr<const AbstractedConfigs> ac_;
  std::vector<Node> nodes_;
  std::vector<std::string> vars_;
};

EquationSystem build_dataflow(const StmtPtr& s, std::shared_ptr<const AbstractedConfigs> ac);
EquationSystem build_dataflow(const StmtPtr& s, const Abstraction& alpha, const ConfigSet& K);

struct LabelStores {
  int label;
  LiftedStore in;
  LiftedStore out;
};

struct DataflowSolution {
  std::vector<LabelStores> rows;  // by node order (preorder)
  size_t evaluations = 0;

  const LabelStores& at(int label) const;
};

// Least solution with in[root] = entry, by FIFO worklist.
DataflowSolution solve_dataflow(const EquationSystem& sys, const LiftedStore& entry);

} // namespace liftcal
