#include "liftcal/reconfig.hpp"

#include <algorithm>

#include "liftcal/abstracted.hpp"
#include "liftcal/errors.hpp"

namespace liftcal {

StmtPtr make_lub(StmtPtr s0, StmtPtr s1) { return Stmt::lub(std::move(s0), std::move(s1)); }

namespace {

using AK = Abstraction::Kind;
using Node = AbstractionPlan::Node;

struct Block {
  FeatExp guard;
  bool lub = false;
};

std::vector<Block> rewrite_blocks(const Node& n, std::vector<Block> in) {
  switch (n.kind) {
    case AK::Join: {
      const ConfigSet& K = *n.in->configs;
      std::vector<Block> out;
      for (const auto& b : in) {
        Predicate holds(b.guard, K.space());
        size_t hits = 0;
        for (uint64_t c : K.codes()) hits += holds(c) ? 1 : 0;
        if (hits == K.size()) {
          out.push_back({FeatExp::atom(n.fresh), b.lub});
        } else if (hits == 0) {
          out.push_back({!FeatExp::atom(n.fresh), b.lub});
        } else {
          out.push_back({FeatExp::atom(n.fresh), true});
        }
      }
      return out;
    }
    case AK::Proj: return in;
    case AK::Compose: return rewrite_blocks(*n.second, rewrite_blocks(*n.first, std::move(in)));
    case AK::Product: {
      auto l = rewrite_blocks(*n.first, in);
      auto r = rewrite_blocks(*n.second, std::move(in));
      if (l.size() == 1 && r.size() == 1 && l[0].lub == r[0].lub) {
        if (l[0].guard == r[0].guard) return l;
        return {{l[0].guard | r[0].guard, l[0].lub}};
      }
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    default: break;
  }
  throw SemanticError("unexpected node in abstraction plan");
}

bool blocks_match(const std::vector<Block>& blocks, const std::vector<GuardCase>& cases,
                  const ConfigSet& K) {
  std::vector<Predicate> preds;
  preds.reserve(blocks.size());
  for (const auto& b : blocks) preds.emplace_back(b.guard, K.space());
  for (size_t j = 0; j < K.size(); ++j) {
    size_t plain = 0, lub = 0;
    for (size_t i = 0; i < blocks.size(); ++i) {
      if (preds[i](K.code(j))) ++(blocks[i].lub ? lub : plain);
    }
    switch (cases[j]) {
      case GuardCase::Apply:
        if (plain != 1 || lub != 0) return false;
        break;
      case GuardCase::Lub:
        if (plain != 0 || lub != 1) return false;
        break;
      case GuardCase::Skip:
        if (plain != 0 || lub != 0) return false;
        break;
    }
  }
  return true;
}

// A formula over K's space selecting exactly the configs flagged in want.
FeatExp select_formula(const ConfigSet& K, const std::vector<uint8_t>& want) {
  auto selects = [&](const FeatExp& g) {
    Predicate p(g, K.space());
    for (size_t j = 0; j < K.size(); ++j) {
      if (p(K.code(j)) != static_cast<bool>(want[j])) return false;
    }
    return true;
  };
  if (selects(FeatExp::truth())) return FeatExp::truth();
  std::vector<FeatExp> lits;
  for (const auto& name : K.space().names()) {
    lits.push_back(FeatExp::atom(name));
    lits.push_back(!FeatExp::atom(name));
  }
  for (const auto& l : lits) {
    if (selects(l)) return l;
  }
  for (size_t a = 0; a < lits.size(); ++a) {
    for (size_t b = a + 1; b < lits.size(); ++b) {
      if (selects(lits[a] & lits[b])) return lits[a] & lits[b];
      if (selects(lits[a] | lits[b])) return lits[a] | lits[b];
    }
  }
  std::vector<FeatExp> parts;
  for (size_t j = 0; j < K.size(); ++j) {
    if (want[j]) parts.push_back(K.formula(j));
  }
  return FeatExp::disj(std::move(parts));
}

std::vector<Block> synthesize(const std::vector<GuardCase>& cases, const ConfigSet& K) {
  std::vector<uint8_t> apply(K.size()), lub(K.size());
  for (size_t j = 0; j < K.size(); ++j) {
    apply[j] = cases[j] == GuardCase::Apply;
    lub[j] = cases[j] == GuardCase::Lub;
  }
  std::vector<Block> out;
  if (std::any_of(apply.begin(), apply.end(), [](uint8_t b) { return b != 0; })) {
    out.push_back({select_formula(K, apply), false});
  }
  if (std::any_of(lub.begin(), lub.end(), [](uint8_t b) { return b != 0; })) {
    out.push_back({select_formula(K, lub), true});
  }
  return out;
}

class Rewriter {
 public:
  Rewriter(const AbstractionPlan& plan, bool simplify) : plan_(plan), simplify_(simplify) {}

  StmtPtr rewrite(const StmtPtr& s) {
    using SK = Stmt::Kind;
    switch (s->kind) {
      case SK::Skip:
      case SK::Assign: return s;
      case SK::Seq: return Stmt::seq(rewrite(s->s0), rewrite(s->s1));
      case SK::If: return Stmt::if_(s->expr, rewrite(s->s0), rewrite(s->s1));
      case SK::Lub: return Stmt::lub(rewrite(s->s0), rewrite(s->s1));
      case SK::While: return Stmt::while_(s->expr, rewrite(s->s0));
      case SK::IfDef: return rewrite_ifdef(*s);
    }
    return s;
  }

 private:
  StmtPtr rewrite_ifdef(const Stmt& s) {
    const AbstractedConfigs& out = plan_.output();
    const ConfigSet& K = *out.configs;
    auto cases = guard_cases(s.guard, out);
    auto blocks = rewrite_blocks(plan_.root(), {{s.guard, false}});
    if (!blocks_match(blocks, cases, K)) blocks = synthesize(cases, K);

    StmtPtr body = rewrite(s.s0);
    if (blocks.empty()) return Stmt::ifdef(FeatExp::falsity(), body);
    std::vector<StmtPtr> items;
    for (const auto& b : blocks) {
      StmtPtr inner = b.lub ? make_lub(body, Stmt::skip()) : body;
      if (simplify_) {
        Predicate p(b.guard, K.space());
        size_t hits = 0;
        for (uint64_t c : K.codes()) hits += p(c) ? 1 : 0;
        if (hits == K.size()) {
          items.push_back(inner);
          continue;
        }
        if (hits == 0) continue;
      }
      items.push_back(Stmt::ifdef(b.guard, inner));
    }
    return seq_of(items);
  }

  const AbstractionPlan& plan_;
  bool simplify_;
};

} // namespace

Reconfigured reconfigure(const Program& p, const Abstraction& alpha, bool simplify) {
  auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
  AbstractionPlan plan(alpha, K);
  const AbstractedConfigs& out = plan.output();

  Rewriter rw(plan, simplify);
  StmtPtr body = relabel(rw.rewrite(p.body));

  // Keep the original model when nothing was abstracted away.
  FeatExp psi = p.model.psi;
  if (*out.configs != *K) {
    std::vector<FeatExp> members;
    for (size_t j = 0; j < out.size(); ++j) members.push_back(out.configs->formula(j));
    psi = FeatExp::disj(std::move(members));
  }

  Reconfigured r;
  r.program = Program{FeatureModel{out.space(), psi}, std::move(body)};
  r.renames = out.renames;
  r.configs = plan.output_ptr();
  return r;
}

LiftedStore reindex(const LiftedStore& d, std::shared_ptr<const ConfigSet> target) {
  const ConfigSet& from = d.configs();
  if (from.space() != target->space() || from.size() != target->size()) {
    throw SemanticError("configuration sets differ");
  }
  LiftedStore out = LiftedStore::top(d.lattice(), target, d.vars());
  std::vector<size_t> src(target->size());
  for (size_t j = 0; j < target->size(); ++j) {
    auto k = from.find(target->code(j));
    if (!k) throw SemanticError("configuration sets differ");
    src[j] = *k;
  }
  for (size_t v = 0; v < d.vars().size(); ++v) {
    auto s = d.column(v);
    auto t = out.column(v);
    for (size_t j = 0; j < src.size(); ++j) t[j] = s[src[j]];
  }
  return out;
}

} // namespace liftcal
