#include "liftcal/lifted.hpp"

#include <algorithm>

#include "engine.hpp"
#include "liftcal/errors.hpp"
#include "liftcal/kernels.hpp"

namespace liftcal {
namespace detail {

namespace {

int64_t literal_bits(int64_t n) { return enc::is_int(n) ? n : enc::kTop; }

} // namespace

std::vector<int64_t> Engine::eval(const Expr& e, const LiftedStore& a) const {
  switch (e.kind) {
    case Expr::Kind::Num: return std::vector<int64_t>(a.size(), literal_bits(e.num));
    case Expr::Kind::Var: {
      if (auto v = a.var_index(e.var)) {
        auto col = a.column(*v);
        return {col.begin(), col.end()};
      }
      return std::vector<int64_t>(a.size(), enc::kTop);
    }
    case Expr::Kind::Bin: {
      auto l = eval(*e.lhs, a);
      auto r = eval(*e.rhs, a);
      kernels::binop(e.op, l, r, l);
      return l;
    }
  }
  return {};
}

const std::vector<Case>& Engine::cases(const Stmt& ifdef) {
  auto it = cache_.find(&ifdef);
  if (it == cache_.end()) it = cache_.emplace(&ifdef, policy_(ifdef.guard)).first;
  return it->second;
}

LiftedStore merge_cases(const std::vector<Case>& cases, const LiftedStore& in,
                        const LiftedStore& out) {
  auto [x, y] = align(in, out);
  const size_t n = x.size();
  std::vector<uint8_t> apply(n), lub(n);
  bool any_lub = false;
  for (size_t k = 0; k < n; ++k) {
    apply[k] = cases[k] == Case::Apply;
    lub[k] = cases[k] == Case::Lub;
    any_lub = any_lub || lub[k];
  }
  std::vector<int64_t> joined(n);
  for (size_t v = 0; v < x.vars().size(); ++v) {
    auto xin = x.column(v);
    auto yout = y.column(v);
    if (any_lub) {
      kernels::join(x.lattice(), xin, yout, joined);
      kernels::select(lub, joined, xin, xin);
    }
    kernels::select(apply, yout, xin, xin);
  }
  return x;
}

LiftedStore Engine::run_ifdef(const Stmt& s, LiftedStore in) {
  const auto& cs = cases(s);
  if (cs.size() != in.size()) throw SemanticError("case vector does not match store");
  bool all_skip = std::all_of(cs.begin(), cs.end(), [](Case c) { return c == Case::Skip; });
  if (all_skip) return in;
  LiftedStore out = run(*s.s0, in);
  bool all_apply = std::all_of(cs.begin(), cs.end(), [](Case c) { return c == Case::Apply; });
  if (all_apply) return out;
  return merge_cases(cs, in, out);
}

LiftedStore Engine::run_while(const Stmt& s, LiftedStore in) {
  LiftedStore x = in;
  size_t steps = 0;
  for (;;) {
    ++steps;
    LiftedStore next = lifted_join(in, run(*s.s0, x));
    if (lifted_equal(next, x)) {
      x = std::move(next);
      break;
    }
    x = std::move(next);
  }
  if (stats_) {
    stats_->max_while_iterations = std::max(stats_->max_while_iterations, steps);
    ++stats_->while_evaluations;
  }
  return x;
}

LiftedStore Engine::run(const Stmt& s, LiftedStore in) {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Skip: return in;
    case K::Assign: {
      auto col = eval(*s.expr, in);
      size_t v = in.ensure_var(s.var);
      std::copy(col.begin(), col.end(), in.column(v).begin());
      return in;
    }
    case K::Seq: return run(*s.s1, run(*s.s0, std::move(in)));
    case K::If:
    case K::Lub: return lifted_join(run(*s.s0, in), run(*s.s1, in));
    case K::While: return run_while(s, std::move(in));
    case K::IfDef: return run_ifdef(s, std::move(in));
  }
  return in;
}

CasePolicy concrete_policy(const ConfigSet& configs) {
  return [&configs](const FeatExp& guard) {
    Predicate holds(guard, configs.space());
    std::vector<Case> out(configs.size());
    for (size_t k = 0; k < configs.size(); ++k) {
      out[k] = holds(configs.code(k)) ? Case::Apply : Case::Skip;
    }
    return out;
  };
}

} // namespace detail

std::vector<Value> analyze_expr_lifted(const Expr& e, const LiftedStore& a) {
  detail::Engine eng(detail::concrete_policy(a.configs()), nullptr);
  auto col = eng.eval(e, a);
  std::vector<Value> out;
  out.reserve(col.size());
  for (int64_t b : col) out.push_back(Value::from_bits(b));
  return out;
}

std::vector<Value> analyze_expr_lifted(const Expr& e, const ConfigSet& K, const LiftedStore& a) {
  if (a.configs() != K) throw SemanticError("store is not indexed by the given configurations");
  return analyze_expr_lifted(e, a);
}

LiftedStore analyze_lifted(const Stmt& s, LiftedStore a, AnalysisStats* stats) {
  auto configs = a.config_ptr();
  detail::Engine eng(detail::concrete_policy(*configs), stats);
  return eng.run(s, std::move(a));
}

LiftedStore analyze_lifted(const Stmt& s, const ConfigSet& K, LiftedStore a,
                           AnalysisStats* stats) {
  if (a.configs() != K) throw SemanticError("store is not indexed by the given configurations");
  return analyze_lifted(s, std::move(a), stats);
}

// ---------------------------------------------------------------- single

Value analyze_expr_single(const Expr& e, const Store& a) {
  switch (e.kind) {
    case Expr::Kind::Num:
      return Value::from_bits(enc::is_int(e.num) ? e.num : enc::kTop);
    case Expr::Kind::Var: return a.get(e.var);
    case Expr::Kind::Bin:
      return hat_binop(a.lattice(), e.op, analyze_expr_single(*e.lhs, a),
                       analyze_expr_single(*e.rhs, a));
  }
  return Value::top();
}

Store analyze_single(const Stmt& s, Store a) {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Skip: return a;
    case K::Assign: {
      Value v = analyze_expr_single(*s.expr, a);
      a.set(s.var, v);
      return a;
    }
    case K::Seq: return analyze_single(*s.s1, analyze_single(*s.s0, std::move(a)));
    case K::If:
    case K::Lub: return store_join(analyze_single(*s.s0, a), analyze_single(*s.s1, a));
    case K::While: {
      Store x = a;
      for (;;) {
        Store next = store_join(a, analyze_single(*s.s0, x));
        if (store_equal(next, x)) return next;
        x = std::move(next);
      }
    }
    case K::IfDef: throw SemanticError("analyze_single: program contains #if");
  }
  return a;
}

} // namespace liftcal
