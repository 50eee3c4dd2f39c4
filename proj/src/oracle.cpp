#include "liftcal/oracle.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "liftcal/abstracted.hpp"
#include "liftcal/errors.hpp"
#include "liftcal/lifted.hpp"
#include "liftcal/reconfig.hpp"

namespace liftcal {

std::vector<Value> carrier(Lattice l) {
  std::vector<Value> out{Value::bot(), Value::top()};
  for (int64_t n = -2; n <= 2; ++n) out.push_back(Value::integer(n));
  if (l == Lattice::ConstPlus) {
    out.push_back(Value::leq_zero());
    out.push_back(Value::geq_zero());
  }
  return out;
}

// ---------------------------------------------------------------- generators

namespace {

const char* const kFeatureNames[] = {"A", "B", "C", "D"};
const char* const kVarNames[] = {"x", "y", "z"};

template <class T>
const T& pick(CaseGen& g, const std::vector<T>& xs) {
  return xs[g.below(xs.size())];
}

void pick_lattice(CaseGen& g) { g.lattice = g.coin(50) ? Lattice::Const : Lattice::ConstPlus; }

std::vector<std::string> gen_vars(CaseGen& g) {
  size_t n = 1 + g.below(std::min<size_t>(g.max_vars, 3));
  return {kVarNames, kVarNames + n};
}

} // namespace

FeatureSpace gen_space(CaseGen& g) {
  size_t n = 1 + g.below(std::min<size_t>(g.max_features, 4));
  return FeatureSpace({kFeatureNames, kFeatureNames + n});
}

FeatExp gen_featexp(CaseGen& g, const FeatureSpace& space, size_t depth) {
  if (depth == 0 || g.coin(35)) {
    if (g.coin(8)) return g.coin(50) ? FeatExp::truth() : FeatExp::falsity();
    return FeatExp::atom(space.name(g.below(space.size())));
  }
  switch (g.below(4)) {
    case 0: return !gen_featexp(g, space, depth - 1);
    case 1: return gen_featexp(g, space, depth - 1) & gen_featexp(g, space, depth - 1);
    case 2: return gen_featexp(g, space, depth - 1) | gen_featexp(g, space, depth - 1);
    default:
      return FeatExp::implies(gen_featexp(g, space, depth - 1), gen_featexp(g, space, depth - 1));
  }
}

ExprPtr gen_expr(CaseGen& g, const std::vector<std::string>& vars, size_t depth) {
  if (depth == 0 || g.coin(55)) {
    if (g.coin(50)) return Expr::variable(pick(g, vars));
    return Expr::number(static_cast<int64_t>(g.below(5)) - 2);
  }
  static const ArithOp ops[] = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Lt,
                                ArithOp::Eq};
  return Expr::binary(ops[g.below(5)], gen_expr(g, vars, depth - 1), gen_expr(g, vars, depth - 1));
}

StmtPtr gen_stmt(CaseGen& g, const FeatureSpace& space, const std::vector<std::string>& vars,
                 size_t depth) {
  if (depth <= 1) {
    if (g.coin(20)) return Stmt::skip();
    return Stmt::assign(pick(g, vars), gen_expr(g, vars, 2));
  }
  size_t r = g.below(100);
  if (r < 12) return Stmt::assign(pick(g, vars), gen_expr(g, vars, 2));
  if (r < 45) {
    return Stmt::seq(gen_stmt(g, space, vars, depth - 1), gen_stmt(g, space, vars, depth - 1));
  }
  if (r < 55) {
    return Stmt::if_(gen_expr(g, vars, 1), gen_stmt(g, space, vars, depth - 1),
                     gen_stmt(g, space, vars, depth - 1));
  }
  if (r < 65) return Stmt::while_(gen_expr(g, vars, 1), gen_stmt(g, space, vars, depth - 1));
  if (r < 70) {
    return Stmt::lub(gen_stmt(g, space, vars, depth - 1), gen_stmt(g, space, vars, depth - 1));
  }
  if (r < 97) return Stmt::ifdef(gen_featexp(g, space, 2), gen_stmt(g, space, vars, depth - 1));
  return Stmt::skip();
}

Program gen_random_program(CaseGen& g) {
  FeatureSpace space = gen_space(g);
  FeatExp psi = FeatExp::truth();
  if (g.coin(50)) {
    for (int tries = 0; tries < 8; ++tries) {
      FeatExp cand = gen_featexp(g, space, 2);
      if (sat(cand, space)) {
        psi = cand;
        break;
      }
    }
  }
  auto vars = gen_vars(g);
  size_t depth = std::min<size_t>(g.max_depth, 2 + g.below(g.max_depth));
  StmtPtr body = relabel(gen_stmt(g, space, vars, depth));
  return Program{FeatureModel{space, psi}, body};
}

namespace {

using AK = Abstraction::Kind;

Abstraction gen_abs(CaseGen& g, const FeatureSpace& space, size_t depth,
                    std::optional<AK> kind = std::nullopt) {
  AK k;
  if (kind) {
    k = *kind;
  } else if (depth == 0) {
    static const AK leaves[] = {AK::Join, AK::Proj, AK::JoinPhi, AK::FIgnore, AK::FProj};
    k = leaves[g.below(5)];
  } else {
    static const AK all[] = {AK::Join,    AK::Proj,    AK::JoinPhi, AK::FIgnore,
                             AK::FProj,   AK::Compose, AK::Product, AK::Compose};
    k = all[g.below(8)];
  }
  size_t sub = depth == 0 ? 0 : depth - 1;
  switch (k) {
    case AK::Join: return Abstraction::join();
    case AK::Proj:
      return Abstraction::proj(g.coin(10) ? FeatExp::truth() : gen_featexp(g, space, 2));
    case AK::JoinPhi: return Abstraction::join_phi(gen_featexp(g, space, 2));
    case AK::FIgnore: return Abstraction::fignore(space.name(g.below(space.size())));
    case AK::FProj: {
      std::vector<std::string> fs;
      for (const auto& n : space.names()) {
        if (g.coin(50)) fs.push_back(n);
      }
      if (fs.empty()) fs.push_back(space.name(g.below(space.size())));
      if (g.coin(50)) std::reverse(fs.begin(), fs.end());
      return Abstraction::fproj(fs);
    }
    case AK::Compose: return Abstraction::compose(gen_abs(g, space, sub), gen_abs(g, space, sub));
    case AK::Product: return Abstraction::product(gen_abs(g, space, sub), gen_abs(g, space, sub));
  }
  return Abstraction::join();
}

} // namespace

Abstraction gen_random_abstraction(CaseGen& g, const FeatureSpace& space, const ConfigSet&) {
  return gen_abs(g, space, g.below(g.max_abs_depth + 1));
}

LiftedStore gen_store(CaseGen& g, std::shared_ptr<const ConfigSet> K,
                      const std::vector<std::string>& vars) {
  const auto values = carrier(g.lattice);
  LiftedStore s = LiftedStore::top(g.lattice, std::move(K), vars);
  for (size_t v = 0; v < vars.size(); ++v) {
    for (auto& x : s.column(v)) x = pick(g, values).bits();
  }
  return s;
}

LiftedStore gen_above(CaseGen& g, const LiftedStore& s) {
  const auto values = carrier(s.lattice());
  LiftedStore out = s;
  for (size_t v = 0; v < out.vars().size(); ++v) {
    for (auto& x : out.column(v)) {
      if (g.coin(30)) x = enc::join(s.lattice(), x, pick(g, values).bits());
    }
  }
  return out;
}

LiftedStore brute_force_lifted(const Program& p, const LiftedStore& a) {
  std::vector<std::string> vars = a.vars();
  for (const auto& v : program_vars(p)) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  std::vector<Store> stores;
  stores.reserve(a.size());
  for (size_t k = 0; k < a.size(); ++k) {
    StmtPtr variant = preprocess(p, a.configs().code(k));
    stores.push_back(analyze_single(*variant, a.pi(k)));
  }
  return LiftedStore::from_stores(a.lattice(), a.config_ptr(), vars, stores);
}

// ---------------------------------------------------------------- shrinking

namespace {

size_t count_nodes(const StmtPtr& s) {
  return 1 + (s->s0 ? count_nodes(s->s0) : 0) + (s->s1 ? count_nodes(s->s1) : 0);
}

StmtPtr replace_at(const StmtPtr& s, size_t& idx, const std::function<StmtPtr(const StmtPtr&)>& f,
                   bool& done) {
  if (done) return s;
  if (idx == 0) {
    done = true;
    return f(s);
  }
  --idx;
  auto c = std::make_shared<Stmt>(*s);
  if (s->s0) c->s0 = replace_at(s->s0, idx, f, done);
  if (s->s1) c->s1 = replace_at(s->s1, idx, f, done);
  return c;
}

} // namespace

StmtPtr shrink_stmt(const StmtPtr& s, const std::function<bool(const StmtPtr&)>& fails) {
  StmtPtr cur = s;
  const std::function<StmtPtr(const StmtPtr&)> edits[] = {
      [](const StmtPtr&) { return Stmt::skip(); },
      [](const StmtPtr& x) { return x->s0 ? x->s0 : x; },
      [](const StmtPtr& x) { return x->s1 ? x->s1 : x; },
  };
  for (bool progress = true; progress;) {
    progress = false;
    const size_t n = count_nodes(cur);
    for (size_t i = 0; i < n && !progress; ++i) {
      for (const auto& f : edits) {
        size_t idx = i;
        bool done = false;
        StmtPtr cand = relabel(replace_at(cur, idx, f, done));
        if (count_nodes(cand) >= n) continue;
        if (fails(cand)) {
          cur = cand;
          progress = true;
          break;
        }
      }
    }
  }
  return cur;
}

// ---------------------------------------------------------------- properties

namespace {

std::string render_lifted(const LiftedStore& s) {
  std::string out;
  for (size_t k = 0; k < s.size(); ++k) {
    if (k) out += " ";
    out += "(" + render_store(s.pi(k), s.vars()) + ")";
  }
  return out.empty() ? "()" : out;
}

std::string render_configs(const ConfigSet& K) {
  std::string out = "[";
  for (size_t k = 0; k < K.size(); ++k) {
    if (k) out += ", ";
    out += K.formula(k).render();
  }
  return out + "]";
}

std::vector<std::string> vars_of(const Program& p) {
  auto v = program_vars(p);
  if (v.empty()) v.push_back("x");
  return v;
}

// Records a failure; the first one is kept as the counterexample.
void fail(PropertyReport& r, const std::string& what) {
  if (r.failures++ == 0) r.counterexample = what;
}

struct Instance {
  Program program;
  std::shared_ptr<const ConfigSet> K;
  Abstraction alpha;
  std::shared_ptr<const AbstractionPlan> plan;
};

Instance gen_instance(CaseGen& g) {
  Program p = gen_random_program(g);
  auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
  Abstraction a = gen_random_abstraction(g, p.model.space, *K);
  auto plan = std::make_shared<const AbstractionPlan>(a, K);
  return {std::move(p), std::move(K), std::move(a), std::move(plan)};
}

std::string describe(const Program& p, const Abstraction& a) {
  return "program:\n" + pretty(p) + "abstraction: " + a.render() + "\n";
}

std::optional<std::string> galois_case(const AbstractionPlan& plan, const LiftedStore& a,
                                       const LiftedStore& d, std::span<const LiftedStore> family,
                                       const GammaFn& gamma) {
  auto gam = [&](const LiftedStore& x) { return gamma ? gamma(plan, x) : plan.gamma(x); };
  LiftedStore aa = plan.alpha(a);
  LiftedStore gd = gam(d);
  if (lifted_leq(aa, d) != lifted_leq(a, gd)) {
    return "adjunction: a = " + render_lifted(a) + ", d = " + render_lifted(d) +
           ", alpha(a) = " + render_lifted(aa) + ", gamma(d) = " + render_lifted(gd);
  }
  LiftedStore ga = gam(aa);
  if (!lifted_leq(a, ga)) {
    return "extensive: a = " + render_lifted(a) + ", gamma(alpha(a)) = " + render_lifted(ga);
  }
  LiftedStore ag = plan.alpha(gd);
  if (!lifted_leq(ag, d)) {
    return "reductive: d = " + render_lifted(d) + ", alpha(gamma(d)) = " + render_lifted(ag);
  }
  LiftedStore joined = LiftedStore::bot(a.lattice(), a.config_ptr(), a.vars());
  LiftedStore pieces = LiftedStore::bot(a.lattice(), plan.output().configs, a.vars());
  for (const auto& x : family) {
    joined = lifted_join(joined, x);
    pieces = lifted_join(pieces, plan.alpha(x));
  }
  LiftedStore whole = plan.alpha(joined);
  if (!lifted_equal(whole, pieces)) {
    std::string fam;
    for (const auto& x : family) fam += " " + render_lifted(x);
    return "join morphism: family =" + fam + ", alpha(join) = " + render_lifted(whole) +
           ", join(alpha) = " + render_lifted(pieces);
  }
  return std::nullopt;
}

std::optional<std::string> galois_random_case(CaseGen& g, const AbstractionPlan& plan,
                                              const std::shared_ptr<const ConfigSet>& K,
                                              const std::vector<std::string>& vars,
                                              const GammaFn& gamma) {
  LiftedStore a = gen_store(g, K, vars);
  LiftedStore d = gen_store(g, plan.output().configs, vars);
  std::vector<LiftedStore> family;
  size_t m = g.below(5);
  for (size_t i = 0; i < m; ++i) family.push_back(gen_store(g, K, vars));
  return galois_case(plan, a, d, family, gamma);
}

} // namespace

PropertyReport check_galois(const Abstraction& alpha, std::shared_ptr<const ConfigSet> K,
                            CaseGen& g, size_t cases, const GammaFn& gamma) {
  PropertyReport r{"galois", 0, 0, {}};
  AbstractionPlan plan(alpha, K);
  std::vector<std::string> vars{"x", "y"};
  for (size_t i = 0; i < cases; ++i) {
    ++r.cases;
    if (auto msg = galois_random_case(g, plan, K, vars, gamma)) {
      fail(r, "abstraction: " + alpha.render() + "\nconfigs: " + render_configs(*K) + "\n" + *msg);
    }
  }
  return r;
}

PropertyReport check_galois_random(CaseGen& g, size_t cases) {
  PropertyReport r{"galois", 0, 0, {}};
  static const AK kinds[] = {AK::Join,    AK::Proj,    AK::Compose, AK::Product,
                             AK::JoinPhi, AK::FIgnore, AK::FProj};
  for (size_t i = 0; i < cases; ++i) {
    pick_lattice(g);
    FeatureSpace space = gen_space(g);
    FeatExp psi = g.coin(50) ? FeatExp::truth() : gen_featexp(g, space, 2);
    auto K = std::make_shared<const ConfigSet>(valid_configs({space, psi}));
    Abstraction alpha = gen_abs(g, space, 2, kinds[i % 7]);
    AbstractionPlan plan(alpha, K);
    auto vars = gen_vars(g);
    ++r.cases;
    if (auto msg = galois_random_case(g, plan, K, vars, {})) {
      fail(r, "abstraction: " + alpha.render() + "\nconfigs: " + render_configs(*K) + "\n" + *msg);
    }
  }
  return r;
}

PropertyReport check_fignore(CaseGen& g, size_t cases) {
  PropertyReport r{"fignore", 0, 0, {}};
  for (size_t i = 0; i < cases; ++i) {
    pick_lattice(g);
    FeatureSpace space = gen_space(g);
    FeatExp psi = g.coin(50) ? FeatExp::truth() : gen_featexp(g, space, 2);
    auto K = std::make_shared<const ConfigSet>(valid_configs({space, psi}));
    auto vars = gen_vars(g);
    LiftedStore a = gen_store(g, K, vars);
    const std::string f = space.name(g.below(space.size()));
    ++r.cases;
    const std::string head = "configs: " + render_configs(*K) + "\nstore: " + render_lifted(a);

    // Independent grouping by equivalence of the eliminated config formulas.
    std::vector<FeatExp> keys;
    std::vector<std::vector<size_t>> groups;
    for (size_t k = 0; k < K->size(); ++k) {
      FeatExp key = eliminate(K->formula(k), f);
      size_t j = 0;
      while (j < keys.size() && !equiv(keys[j], key, space)) ++j;
      if (j == keys.size()) {
        keys.push_back(key);
        groups.emplace_back();
      }
      groups[j].push_back(k);
    }
    AbstractionPlan ign(Abstraction::fignore(f), K);
    LiftedStore got = ign.alpha(a);
    bool ok = got.size() == groups.size();
    for (size_t j = 0; ok && j < groups.size(); ++j) {
      std::vector<uint64_t> codes;
      for (size_t k : groups[j]) codes.push_back(K->code(k));
      ok = ign.output().meanings[j] == Valuations::from_codes(space.size(), codes);
      for (size_t v = 0; ok && v < vars.size(); ++v) {
        int64_t acc = enc::kBot;
        for (size_t k : groups[j]) acc = enc::join(a.lattice(), acc, a.column(v)[k]);
        ok = got.column(v)[j] == acc;
      }
    }
    AbstractionPlan expanded(fignore_expand(f, *K), K);
    ok = ok && lifted_equal(expanded.alpha(a), got) &&
         expanded.output().meanings == ign.output().meanings;
    if (!ok) {
      fail(r, "fignore(" + f + ")\n" + head + "\nalpha: " + render_lifted(got));
      continue;
    }

    FeatExp phi = gen_featexp(g, space, 2);
    AbstractionPlan sugar(Abstraction::join_phi(phi), K);
    AbstractionPlan plain(Abstraction::compose(Abstraction::join(), Abstraction::proj(phi)), K);
    LiftedStore d = gen_store(g, sugar.output().configs, vars);
    if (!lifted_equal(sugar.alpha(a), plain.alpha(a)) ||
        !lifted_equal(sugar.gamma(d), plain.gamma(d)) ||
        sugar.output().meanings != plain.output().meanings) {
      fail(r, "join(" + phi.render() + ") differs from proj >> join\n" + head);
      continue;
    }

    std::vector<std::string> fs;
    for (const auto& n : space.names()) {
      if (g.coin(60)) fs.push_back(n);
    }
    if (fs.empty()) fs.push_back(f);
    Abstraction nested = Abstraction::fignore(fs.back());
    for (size_t k = fs.size() - 1; k-- > 0;) {
      nested = Abstraction::compose(Abstraction::fignore(fs[k]), nested);
    }
    AbstractionPlan fp(Abstraction::fproj(fs), K);
    AbstractionPlan np(nested, K);
    if (!lifted_equal(fp.alpha(a), np.alpha(a)) ||
        fp.output().meanings != np.output().meanings) {
      fail(r, Abstraction::fproj(fs).render() + " differs from " + nested.render() + "\n" + head);
    }
  }
  return r;
}

PropertyReport check_soundness(CaseGen& g, size_t cases) {
  PropertyReport r{"soundness", 0, 0, {}};
  for (size_t i = 0; i < cases; ++i) {
    pick_lattice(g);
    Instance in = gen_instance(g);
    const auto& out = in.plan->output();
    auto vars = vars_of(in.program);
    LiftedStore d = gen_store(g, out.configs, vars);
    ++r.cases;

    auto stmt_fails = [&](const StmtPtr& s) {
      LiftedStore lhs = in.plan->alpha(analyze_lifted(*s, in.plan->gamma(d)));
      LiftedStore rhs = analyze_abstracted(*s, out, d);
      return !lifted_leq(lhs, rhs);
    };
    if (stmt_fails(in.program.body)) {
      StmtPtr small = shrink_stmt(in.program.body, stmt_fails);
      fail(r, describe(Program{in.program.model, small}, in.alpha) + "input: " + render_lifted(d));
      continue;
    }

    ExprPtr e = gen_expr(g, vars, 3);
    LiftedStore gd = in.plan->gamma(d);
    auto concrete = analyze_expr_lifted(*e, gd);
    LiftedStore holder = LiftedStore::top(d.lattice(), in.K, {"_e"});
    for (size_t k = 0; k < concrete.size(); ++k) holder.column(0)[k] = concrete[k].bits();
    LiftedStore lhs = in.plan->alpha(holder);
    auto rhs = analyze_expr_abstracted(*e, d);
    for (size_t j = 0; j < rhs.size(); ++j) {
      if (!value_leq(d.lattice(), lhs.at(j, 0), rhs[j])) {
        fail(r, "expression " + render_expr(*e) + " under " + in.alpha.render() +
                    "\ninput: " + render_lifted(d));
        break;
      }
    }
  }
  return r;
}

PropertyReport check_monotonicity(CaseGen& g, size_t cases) {
  PropertyReport r{"monotonicity", 0, 0, {}};
  for (size_t i = 0; i < cases; ++i) {
    pick_lattice(g);
    Instance in = gen_instance(g);
    const auto& out = in.plan->output();
    auto vars = vars_of(in.program);
    ++r.cases;

    LiftedStore a = gen_store(g, in.K, vars);
    LiftedStore a2 = gen_above(g, a);
    if (!lifted_leq(analyze_lifted(*in.program.body, a), analyze_lifted(*in.program.body, a2))) {
      fail(r, describe(in.program, in.alpha) + "lifted, inputs " + render_lifted(a) + " <= " +
                  render_lifted(a2));
      continue;
    }
    LiftedStore d = gen_store(g, out.configs, vars);
    LiftedStore d2 = gen_above(g, d);
    if (!lifted_leq(analyze_abstracted(*in.program.body, out, d),
                    analyze_abstracted(*in.program.body, out, d2))) {
      fail(r, describe(in.program, in.alpha) + "abstracted, inputs " + render_lifted(d) +
                  " <= " + render_lifted(d2));
      continue;
    }
    ExprPtr e = gen_expr(g, vars, 3);
    auto x = analyze_expr_lifted(*e, a);
    auto x2 = analyze_expr_lifted(*e, a2);
    auto y = analyze_expr_abstracted(*e, d);
    auto y2 = analyze_expr_abstracted(*e, d2);
    bool ok = true;
    for (size_t k = 0; k < x.size(); ++k) ok = ok && value_leq(a.lattice(), x[k], x2[k]);
    for (size_t k = 0; k < y.size(); ++k) ok = ok && value_leq(d.lattice(), y[k], y2[k]);
    if (!ok) fail(r, "expression " + render_expr(*e));
  }
  return r;
}

namespace {

std::optional<std::string> commutation_case(const Program& p, const Abstraction& alpha,
                                            const AbstractionPlan& plan, const LiftedStore& d,
                                            bool simplify) {
  const auto& out = plan.output();
  LiftedStore lhs = analyze_abstracted(*p.body, out, d);
  Reconfigured rc = reconfigure(p, alpha, simplify);
  auto K2 = std::make_shared<const ConfigSet>(valid_configs(rc.program.model));
  if (K2->size() != out.size()) return std::string("reconfigured model has a different config set");
  LiftedStore d2 = reindex(d, K2);
  LiftedStore rhs = analyze_lifted(*rc.program.body, d2);
  LiftedStore want = reindex(lhs, K2);
  if (!lifted_equal(want, rhs)) {
    return "abstracted " + render_lifted(want) + " vs lifted on rewrite " + render_lifted(rhs) +
           "\nrewrite:\n" + pretty(rc.program);
  }
  Program again = parse_program(pretty(rc.program));
  LiftedStore rhs2 = analyze_lifted(*again.body, d2);
  if (!lifted_equal(rhs, rhs2)) return "reparsed rewrite analyzes differently";
  return std::nullopt;
}

} // namespace

PropertyReport check_commutation(CaseGen& g, size_t cases) {
  PropertyReport r{"commutation", 0, 0, {}};
  for (size_t i = 0; i < cases; ++i) {
    pick_lattice(g);
    Instance in = gen_instance(g);
    auto vars = vars_of(in.program);
    LiftedStore d = gen_store(g, in.plan->output().configs, vars);
    bool simplify = g.coin(30);
    ++r.cases;
    if (auto msg = commutation_case(in.program, in.alpha, *in.plan, d, simplify)) {
      auto fails = [&](const StmtPtr& s) {
        return commutation_case(Program{in.program.model, s}, in.alpha, *in.plan, d, simplify)
            .has_value();
      };
      StmtPtr small = shrink_stmt(in.program.body, fails);
      Program sp{in.program.model, small};
      fail(r, describe(sp, in.alpha) + "input: " + render_lifted(d) + "\n" +
                  commutation_case(sp, in.alpha, *in.plan, d, simplify).value_or(*msg));
    }
  }
  return r;
}

namespace {

bool has_while(const Stmt& s) {
  return s.kind == Stmt::Kind::While || (s.s0 && has_while(*s.s0)) || (s.s1 && has_while(*s.s1));
}

} // namespace

PropertyReport check_dataflow(CaseGen& g, size_t cases) {
  PropertyReport r{"dataflow", 0, 0, {}};
  for (size_t i = 0; i < cases; ++i) {
    pick_lattice(g);
    Instance in = gen_instance(g);
    const auto& out = in.plan->output();
    auto vars = vars_of(in.program);
    LiftedStore d = gen_store(g, out.configs, vars);
    ++r.cases;
    EquationSystem sys = build_dataflow(in.program.body, in.plan->output_ptr());
    DataflowSolution sol = solve_dataflow(sys, d);
    const bool exact = !has_while(*in.program.body);
    for (size_t n = 0; n < sys.nodes().size(); ++n) {
      const Stmt& s = *sys.nodes()[n].stmt;
      const auto& row = sol.rows[n];
      LiftedStore step = analyze_abstracted(s, out, row.in);
      bool ok = exact ? lifted_equal(step, row.out) : lifted_leq(step, row.out);
      if (!ok) {
        fail(r, describe(in.program, in.alpha) + "input: " + render_lifted(d) + "\nlabel " +
                    std::to_string(s.label) + ": D(in) = " + render_lifted(step) +
                    ", out = " + render_lifted(row.out));
        break;
      }
    }
  }
  return r;
}

PropertyReport check_oracle_equiv(CaseGen& g, size_t cases) {
  PropertyReport r{"oracle", 0, 0, {}};
  for (size_t i = 0; i < cases; ++i) {
    pick_lattice(g);
    Program p = gen_random_program(g);
    auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
    auto vars = vars_of(p);
    LiftedStore a = gen_store(g, K, vars);
    ++r.cases;
    auto fails = [&](const StmtPtr& s) {
      Program q{p.model, s};
      return !lifted_equal(analyze_lifted(*s, a), brute_force_lifted(q, a));
    };
    if (fails(p.body)) {
      StmtPtr small = shrink_stmt(p.body, fails);
      Program q{p.model, small};
      fail(r, "program:\n" + pretty(q) + "input: " + render_lifted(a) + "\nlifted " +
                  render_lifted(analyze_lifted(*small, a)) + " vs brute force " +
                  render_lifted(brute_force_lifted(q, a)));
    }
  }
  return r;
}

std::vector<PropertyReport> check_all(uint64_t seed, size_t cases) {
  using Fn = PropertyReport (*)(CaseGen&, size_t);
  static const Fn fns[] = {check_galois_random, check_fignore,  check_soundness,
                           check_monotonicity,  check_commutation, check_dataflow,
                           check_oracle_equiv};
  std::vector<PropertyReport> out;
  uint64_t salt = 0;
  for (Fn f : fns) {
    CaseGen g(seed * 1000003 + salt++);
    out.push_back(f(g, cases));
  }
  return out;
}

std::vector<PropertyReport> check_instance(const Program& p, const Abstraction& alpha,
                                           uint64_t seed, size_t cases) {
  PropertyReport snd{"soundness", 0, 0, {}};
  PropertyReport com{"commutation", 0, 0, {}};
  auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
  AbstractionPlan plan(alpha, K);
  const auto& out = plan.output();
  auto vars = vars_of(p);
  CaseGen g(seed);
  for (Lattice l : {Lattice::Const, Lattice::ConstPlus}) {
    g.lattice = l;
    for (size_t i = 0; i <= cases; ++i) {
      LiftedStore d = i == 0 ? LiftedStore::top(l, out.configs, vars)
                             : gen_store(g, out.configs, vars);
      ++snd.cases;
      LiftedStore lhs = plan.alpha(analyze_lifted(*p.body, plan.gamma(d)));
      if (!lifted_leq(lhs, analyze_abstracted(*p.body, out, d))) {
        fail(snd, "input: " + render_lifted(d));
      }
      ++com.cases;
      if (auto msg = commutation_case(p, alpha, plan, d, false)) {
        fail(com, "input: " + render_lifted(d) + "\n" + *msg);
      }
    }
  }
  return {snd, com};
}

} // namespace liftcal
