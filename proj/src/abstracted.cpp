#include "liftcal/abstracted.hpp"

#include <algorithm>
#include <deque>

#include "engine.hpp"
#include "liftcal/errors.hpp"

namespace liftcal {

std::vector<GuardCase> guard_cases(const FeatExp& theta, const AbstractedConfigs& ac) {
  std::vector<GuardCase> out(ac.size(), GuardCase::Apply);
  Predicate holds(theta, ac.original);
  std::optional<Valuations> table;
  for (size_t j = 0; j < ac.size(); ++j) {
    const Valuations& m = ac.meanings[j];
    if (auto c = m.single_code()) {
      out[j] = holds(*c) ? GuardCase::Apply : GuardCase::Skip;
      continue;
    }
    if (!table) table = Valuations::of(theta, ac.original);
    if (m.subset_of(*table)) {
      out[j] = GuardCase::Apply;
    } else if (!m.intersects(*table)) {
      out[j] = GuardCase::Skip;
    } else {
      out[j] = GuardCase::Lub;
    }
  }
  return out;
}

namespace {

detail::CasePolicy abstracted_policy(const AbstractedConfigs& ac) {
  return [&ac](const FeatExp& guard) { return guard_cases(guard, ac); };
}

void require_indexed(const LiftedStore& d, const AbstractedConfigs& ac) {
  if (d.config_ptr() != ac.configs && d.configs() != *ac.configs) {
    throw SemanticError("store is not indexed by the abstract configurations");
  }
}

std::vector<Value> to_values(const std::vector<int64_t>& col) {
  std::vector<Value> out;
  out.reserve(col.size());
  for (int64_t b : col) out.push_back(Value::from_bits(b));
  return out;
}

} // namespace

std::vector<Value> analyze_expr_abstracted(const Expr& e, const LiftedStore& d) {
  // Expressions never consult the case policy.
  detail::Engine eng([](const FeatExp&) { return std::vector<detail::Case>{}; }, nullptr);
  return to_values(eng.eval(e, d));
}

std::vector<Value> analyze_expr_abstracted(const Expr& e, const Abstraction& alpha,
                                           const ConfigSet& K, const LiftedStore& d) {
  AbstractionPlan plan(alpha, std::make_shared<const ConfigSet>(K));
  require_indexed(d, plan.output());
  return analyze_expr_abstracted(e, d);
}

LiftedStore analyze_abstracted(const Stmt& s, const AbstractedConfigs& ac, LiftedStore d,
                               AnalysisStats* stats) {
  require_indexed(d, ac);
  detail::Engine eng(abstracted_policy(ac), stats);
  return eng.run(s, std::move(d));
}

LiftedStore analyze_abstracted(const Stmt& s, const Abstraction& alpha, const ConfigSet& K,
                               LiftedStore d, AnalysisStats* stats) {
  AbstractionPlan plan(alpha, std::make_shared<const ConfigSet>(K));
  return analyze_abstracted(s, plan.output(), std::move(d), stats);
}

// ---------------------------------------------------------------- equations

namespace {

using SK = Stmt::Kind;
using Ref = EquationSystem::Ref;
using U = EquationSystem::Unknown;

std::ptrdiff_t add_nodes(const Stmt& s, std::ptrdiff_t parent,
                         std::vector<EquationSystem::Node>& out) {
  auto idx = static_cast<std::ptrdiff_t>(out.size());
  out.push_back({&s, parent, -1, -1, {}});
  if (s.s0) out[idx].first = add_nodes(*s.s0, idx, out);
  if (s.s1) out[idx].second = add_nodes(*s.s1, idx, out);
  return idx;
}

size_t uz(std::ptrdiff_t i) { return static_cast<size_t>(i); }

} // namespace

EquationSystem::EquationSystem(StmtPtr s, std::shared_ptr<const AbstractedConfigs> ac)
    : root_(std::move(s)), ac_(std::move(ac)) {
  add_nodes(*root_, -1, nodes_);
  for (auto& n : nodes_) {
    if (n.stmt->kind == SK::IfDef) n.cases = guard_cases(n.stmt->guard, *ac_);
  }
  vars_ = stmt_vars(*root_);
}

std::vector<Ref> EquationSystem::reads(Ref r) const {
  const Node& n = nodes_[r.node];
  if (r.which == U::In) {
    if (n.parent < 0) return {};
    const Node& p = nodes_[uz(n.parent)];
    const size_t pi = uz(n.parent);
    switch (p.stmt->kind) {
      case SK::Seq:
        if (static_cast<std::ptrdiff_t>(r.node) == p.first) return {{pi, U::In}};
        return {{uz(p.first), U::Out}};
      case SK::While: return {{pi, U::In}, {r.node, U::Out}};
      default: return {{pi, U::In}};
    }
  }
  switch (n.stmt->kind) {
    case SK::Skip:
    case SK::Assign: return {{r.node, U::In}};
    case SK::Seq: return {{uz(n.second), U::Out}};
    case SK::If:
    case SK::Lub: return {{uz(n.first), U::Out}, {uz(n.second), U::Out}};
    case SK::While: return {{uz(n.first), U::In}};
    case SK::IfDef: return {{r.node, U::In}, {uz(n.first), U::Out}};
  }
  return {};
}

std::string EquationSystem::render() const {
  auto name = [&](Ref r) {
    return std::string(r.which == U::In ? "in[" : "out[") +
           std::to_string(nodes_[r.node].stmt->label) + "]";
  };
  std::string out;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    for (U w : {U::In, U::Out}) {
      Ref r{i, w};
      auto rs = reads(r);
      out += name(r) + " = ";
      const Stmt& s = *nodes_[i].stmt;
      if (w == U::In && rs.empty()) {
        out += "entry";
      } else if (w == U::Out && s.kind == SK::Assign) {
        out += name(rs[0]) + "[" + s.var + " := " + render_expr(*s.expr) + "]";
      } else if (w == U::Out && s.kind == SK::IfDef) {
        out += "case(" + s.guard.render() + ", " + name(rs[0]) + ", " + name(rs[1]) + ")";
      } else if (w == U::In && nodes_[uz(nodes_[i].parent)].stmt->kind == SK::IfDef) {
        out += "guard(" + nodes_[uz(nodes_[i].parent)].stmt->guard.render() + ", " +
               name(rs[0]) + ")";
      } else {
        for (size_t k = 0; k < rs.size(); ++k) {
          if (k) out += " join ";
          out += name(rs[k]);
        }
      }
      out += "\n";
    }
  }
  return out;
}

EquationSystem build_dataflow(const StmtPtr& s, std::shared_ptr<const AbstractedConfigs> ac) {
  return EquationSystem(s, std::move(ac));
}

EquationSystem build_dataflow(const StmtPtr& s, const Abstraction& alpha, const ConfigSet& K) {
  AbstractionPlan plan(alpha, std::make_shared<const ConfigSet>(K));
  return EquationSystem(s, plan.output_ptr());
}

const LabelStores& DataflowSolution::at(int label) const {
  for (const auto& r : rows) {
    if (r.label == label) return r;
  }
  throw SemanticError("no statement with label " + std::to_string(label));
}

DataflowSolution solve_dataflow(const EquationSystem& sys, const LiftedStore& entry) {
  const auto& ac = sys.configs();
  require_indexed(entry, ac);
  const auto& nodes = sys.nodes();
  const size_t n = nodes.size();
  const Lattice l = entry.lattice();

  std::vector<std::string> vars = entry.vars();
  for (const auto& v : sys.vars()) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  const LiftedStore bot = LiftedStore::bot(l, ac.configs, vars);
  LiftedStore start = bot;
  for (size_t v = 0; v < vars.size(); ++v) {
    if (auto ev = entry.var_index(vars[v])) {
      std::copy(entry.column(*ev).begin(), entry.column(*ev).end(), start.column(v).begin());
    } else {
      auto col = start.column(v);
      std::fill(col.begin(), col.end(), enc::kTop);
    }
  }

  auto id = [](Ref r) { return 2 * r.node + (r.which == EquationSystem::Unknown::Out ? 1 : 0); };
  std::vector<LiftedStore> val(2 * n, bot);
  std::vector<std::vector<size_t>> users(2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (auto w : {EquationSystem::Unknown::In, EquationSystem::Unknown::Out}) {
      Ref r{i, w};
      for (Ref d : sys.reads(r)) users[id(d)].push_back(id(r));
    }
  }

  detail::Engine eng(abstracted_policy(ac), nullptr);
  auto evaluate = [&](size_t u) -> LiftedStore {
    const size_t i = u / 2;
    const auto& nd = nodes[i];
    const Stmt& s = *nd.stmt;
    if (u % 2 == 0) {
      if (nd.parent < 0) return start;
      const size_t p = uz(nd.parent);
      const Stmt& ps = *nodes[p].stmt;
      switch (ps.kind) {
        case SK::Seq:
          return static_cast<std::ptrdiff_t>(i) == nodes[p].first ? val[2 * p]
                                                                  : val[2 * uz(nodes[p].first) + 1];
        case SK::While: return lifted_join(val[2 * p], val[2 * i + 1]);
        case SK::IfDef: {
          std::vector<detail::Case> pass(nodes[p].cases.size());
          for (size_t k = 0; k < pass.size(); ++k) {
            pass[k] = nodes[p].cases[k] == GuardCase::Skip ? GuardCase::Skip : GuardCase::Apply;
          }
          return detail::merge_cases(pass, bot, val[2 * p]);
        }
        default: return val[2 * p];
      }
    }
    switch (s.kind) {
      case SK::Skip: return val[2 * i];
      case SK::Assign: return eng.run(s, val[2 * i]);
      case SK::Seq: return val[2 * uz(nd.second) + 1];
      case SK::If:
      case SK::Lub: return lifted_join(val[2 * uz(nd.first) + 1], val[2 * uz(nd.second) + 1]);
      case SK::While: return val[2 * uz(nd.first)];
      case SK::IfDef: return detail::merge_cases(nd.cases, val[2 * i], val[2 * uz(nd.first) + 1]);
    }
    return val[u];
  };

  DataflowSolution sol;
  std::deque<size_t> work;
  std::vector<uint8_t> queued(2 * n, 1);
  for (size_t i = 0; i < n; ++i) {
    work.push_back(2 * i);
    work.push_back(2 * i + 1);
  }
  while (!work.empty()) {
    size_t u = work.front();
    work.pop_front();
    queued[u] = 0;
    ++sol.evaluations;
    LiftedStore next = evaluate(u);
    if (lifted_equal(next, val[u])) continue;
    val[u] = std::move(next);
    for (size_t w : users[u]) {
      if (!queued[w]) {
        queued[w] = 1;
        work.push_back(w);
      }
    }
  }

  sol.rows.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    sol.rows.push_back({nodes[i].stmt->label, std::move(val[2 * i]), std::move(val[2 * i + 1])});
  }
  return sol;
}

} // namespace liftcal
