#include "liftcal/abstraction.hpp"

#include <algorithm>

#include "liftcal/errors.hpp"
#include "liftcal/kernels.hpp"
#include "liftcal/lexer.hpp"

namespace liftcal {

// ---------------------------------------------------------------- AST

namespace {

using Kind = Abstraction::Kind;

} // namespace

Abstraction Abstraction::join() {
  return Abstraction(std::make_shared<const Node>(Node{Kind::Join, {}, {}, {}}));
}

Abstraction Abstraction::proj(FeatExp phi) {
  return Abstraction(std::make_shared<const Node>(Node{Kind::Proj, std::move(phi), {}, {}}));
}

Abstraction Abstraction::compose(Abstraction outer, Abstraction inner) {
  return Abstraction(std::make_shared<const Node>(
      Node{Kind::Compose, {}, {}, {std::move(outer), std::move(inner)}}));
}

Abstraction Abstraction::product(Abstraction left, Abstraction right) {
  return Abstraction(std::make_shared<const Node>(
      Node{Kind::Product, {}, {}, {std::move(left), std::move(right)}}));
}

Abstraction Abstraction::join_phi(FeatExp phi) {
  return Abstraction(std::make_shared<const Node>(Node{Kind::JoinPhi, std::move(phi), {}, {}}));
}

Abstraction Abstraction::fignore(std::string feature) {
  return Abstraction(
      std::make_shared<const Node>(Node{Kind::FIgnore, {}, {std::move(feature)}, {}}));
}

Abstraction Abstraction::fproj(std::vector<std::string> features) {
  if (features.empty()) throw SemanticError("fproj needs at least one feature");
  return Abstraction(std::make_shared<const Node>(Node{Kind::FProj, {}, std::move(features), {}}));
}

bool operator==(const Abstraction& a, const Abstraction& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.phi == y.phi && x.features == y.features && x.kids == y.kids;
}

namespace {

void render_abs(const Abstraction& a, std::string& out);

void render_wrapped(const Abstraction& a, bool parens, std::string& out) {
  if (parens) out += '(';
  render_abs(a, out);
  if (parens) out += ')';
}

void render_abs(const Abstraction& a, std::string& out) {
  switch (a.kind()) {
    case Kind::Join: out += "join"; return;
    case Kind::Proj: out += "proj(" + a.phi().render() + ")"; return;
    case Kind::JoinPhi: out += "join(" + a.phi().render() + ")"; return;
    case Kind::FIgnore: out += "fignore(" + a.feature() + ")"; return;
    case Kind::FProj: {
      out += "fproj(";
      for (size_t i = 0; i < a.features().size(); ++i) {
        if (i) out += ", ";
        out += a.features()[i];
      }
      out += ")";
      return;
    }
    case Kind::Compose:
      render_wrapped(a.inner(), a.inner().kind() == Kind::Product, out);
      out += " >> ";
      render_wrapped(a.outer(),
                     a.outer().kind() == Kind::Product || a.outer().kind() == Kind::Compose, out);
      return;
    case Kind::Product:
      render_abs(a.left(), out);
      out += " || ";
      render_wrapped(a.right(), a.right().kind() == Kind::Product, out);
      return;
  }
}

class AbsParser {
 public:
  AbsParser(TokenStream& ts, const FeatureSpace& sp) : ts_(ts), sp_(sp) {}

  Abstraction par() {
    Abstraction acc = seq();
    while (ts_.accept(Tok::Par)) acc = Abstraction::product(acc, seq());
    return acc;
  }

 private:
  Abstraction seq() {
    Abstraction acc = atom();
    while (ts_.accept(Tok::Then)) acc = Abstraction::compose(atom(), acc);
    return acc;
  }

  FeatExp paren_fe() {
    ts_.expect(Tok::LParen);
    FeatExp e = parse_featexp(ts_, sp_);
    ts_.expect(Tok::RParen);
    return e;
  }

  std::string feature() {
    const Token& t = ts_.expect(Tok::Ident);
    if (!sp_.contains(t.text)) throw UndeclaredFeature(t.text);
    return t.text;
  }

  Abstraction atom() {
    if (ts_.accept_word("join")) {
      if (ts_.at(Tok::LParen)) return Abstraction::join_phi(paren_fe());
      return Abstraction::join();
    }
    if (ts_.accept_word("proj")) return Abstraction::proj(paren_fe());
    if (ts_.accept_word("fignore")) {
      ts_.expect(Tok::LParen);
      std::string f = feature();
      ts_.expect(Tok::RParen);
      return Abstraction::fignore(f);
    }
    if (ts_.accept_word("fproj")) {
      ts_.expect(Tok::LParen);
      std::vector<std::string> fs{feature()};
      while (ts_.accept(Tok::Comma)) fs.push_back(feature());
      ts_.expect(Tok::RParen);
      return Abstraction::fproj(fs);
    }
    if (ts_.accept(Tok::LParen)) {
      Abstraction a = par();
      ts_.expect(Tok::RParen);
      return a;
    }
    ts_.fail("expected abstraction");
  }

  TokenStream& ts_;
  const FeatureSpace& sp_;
};

} // namespace

std::string Abstraction::render() const {
  std::string out;
  render_abs(*this, out);
  return out;
}

Abstraction parse_abstraction(std::string_view text, const FeatureSpace& space) {
  TokenStream ts(tokenize(text));
  AbsParser p(ts, space);
  Abstraction a = p.par();
  if (!ts.at(Tok::End)) ts.fail("unexpected trailing input");
  return a;
}

// ---------------------------------------------------------------- renames

const RenameEntry* RenameTable::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string RenameTable::render() const {
  std::string out;
  for (const auto& e : entries) {
    out += e.name + " = " + e.meaning.to_formula(original).render() + "\n";
  }
  return out;
}

AbstractedConfigs AbstractedConfigs::concrete(std::shared_ptr<const ConfigSet> K) {
  AbstractedConfigs ac;
  ac.original = K->space();
  ac.renames.original = K->space();
  ac.meanings.reserve(K->size());
  for (uint64_t c : K->codes()) ac.meanings.push_back(Valuations::single(K->space().size(), c));
  ac.configs = std::move(K);
  return ac;
}

std::string fresh_feature(const std::vector<std::string>& used) {
  for (size_t i = 1;; ++i) {
    std::string z = "Z" + std::to_string(i);
    if (std::find(used.begin(), used.end(), z) == used.end()) return z;
  }
}

// ---------------------------------------------------------------- fignore

namespace {

std::vector<std::vector<size_t>> fignore_groups(size_t feature,
                                                std::span<const Valuations> meanings) {
  std::vector<std::vector<size_t>> groups;
  std::vector<Valuations> keys;
  for (size_t k = 0; k < meanings.size(); ++k) {
    Valuations key = meanings[k].forget(feature);
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(std::move(key));
      groups.push_back({k});
    } else {
      groups[static_cast<size_t>(it - keys.begin())].push_back(k);
    }
  }
  return groups;
}

Abstraction expand_groups(const std::vector<std::vector<size_t>>& groups,
                          std::span<const Valuations> meanings, const FeatureSpace& original) {
  std::vector<Abstraction> parts;
  for (const auto& g : groups) {
    std::vector<Valuations> members;
    for (size_t k : g) members.push_back(meanings[k]);
    FeatExp phi = Valuations::union_of(original.size(), members).to_formula(original);
    parts.push_back(Abstraction::join_phi(phi));
  }
  if (parts.empty()) {
    // Nothing to group: the empty product is the projection onto nothing.
    return Abstraction::proj(FeatExp::falsity());
  }
  Abstraction acc = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) acc = Abstraction::product(acc, parts[i]);
  return acc;
}

} // namespace

Abstraction fignore_expand(const std::string& a, const AbstractedConfigs& K) {
  size_t f = K.original.index(a);
  return expand_groups(fignore_groups(f, K.meanings), K.meanings, K.original);
}

Abstraction fignore_expand(const std::string& a, const ConfigSet& K) {
  return fignore_expand(a, AbstractedConfigs::concrete(std::make_shared<const ConfigSet>(K)));
}

// ---------------------------------------------------------------- plan

namespace {

using PlanNode = AbstractionPlan::Node;

class Builder {
 public:
  Builder(const FeatureSpace& original, std::vector<std::string> preset)
      : used_(original.names()), preset_(std::move(preset)) {}

  // Join names in creation order.
  const std::vector<std::string>& created() const { return created_; }

  std::unique_ptr<PlanNode> build(const Abstraction& a,
                                  std::shared_ptr<const AbstractedConfigs> in) {
    switch (a.kind()) {
      case Kind::Join: return build_join(std::move(in));
      case Kind::Proj: return build_proj(a.phi(), std::move(in));
      case Kind::Compose: {
        auto node = std::make_unique<PlanNode>();
        node->kind = Kind::Compose;
        node->in = in;
        node->first = build(a.inner(), std::move(in));
        node->second = build(a.outer(), node->first->out);
        node->out = node->second->out;
        return node;
      }
      case Kind::Product: return build_product(a, std::move(in));
      case Kind::JoinPhi:
        return build(Abstraction::compose(Abstraction::join(), Abstraction::proj(a.phi())),
                     std::move(in));
      case Kind::FIgnore: {
        Abstraction expanded = fignore_expand(a.feature(), *in);
        return build(expanded, std::move(in));
      }
      case Kind::FProj: {
        const auto& fs = a.features();
        Abstraction acc = Abstraction::fignore(fs.back());
        for (size_t i = fs.size() - 1; i-- > 0;) {
          acc = Abstraction::compose(Abstraction::fignore(fs[i]), acc);
        }
        return build(acc, std::move(in));
      }
    }
    throw SemanticError("unknown abstraction");
  }

 private:
  std::unique_ptr<PlanNode> build_join(std::shared_ptr<const AbstractedConfigs> in) {
    auto node = std::make_unique<PlanNode>();
    node->kind = Kind::Join;
    node->fresh = created_.size() < preset_.size() ? preset_[created_.size()] : fresh_feature(used_);
    used_.push_back(node->fresh);
    created_.push_back(node->fresh);
    auto out = std::make_shared<AbstractedConfigs>();
    out->original = in->original;
    out->configs = std::make_shared<const ConfigSet>(FeatureSpace({node->fresh}),
                                                     std::vector<uint64_t>{1});
    Valuations meaning = in->meanings.empty()
                             ? Valuations::none(in->original.size())
                             : Valuations::union_of(in->original.size(), in->meanings);
    out->meanings.push_back(meaning);
    out->renames.original = in->original;
    out->renames.entries.push_back({node->fresh, meaning});
    node->in = std::move(in);
    node->out = std::move(out);
    return node;
  }

  std::unique_ptr<PlanNode> build_proj(const FeatExp& phi,
                                       std::shared_ptr<const AbstractedConfigs> in) {
    auto node = std::make_unique<PlanNode>();
    node->kind = Kind::Proj;
    node->phi = phi;
    Valuations models = Valuations::of(phi, in->original);
    auto out = std::make_shared<AbstractedConfigs>();
    out->original = in->original;
    std::vector<uint64_t> codes;
    for (size_t k = 0; k < in->size(); ++k) {
      if (in->meanings[k].subset_of(models)) {
        node->selected.push_back(k);
        codes.push_back(in->configs->code(k));
        out->meanings.push_back(in->meanings[k]);
      }
    }
    if (node->selected.size() == in->size()) {
      out->configs = in->configs;
    } else {
      out->configs = std::make_shared<const ConfigSet>(in->space(), std::move(codes));
    }
    out->renames = in->renames;
    node->in = std::move(in);
    node->out = std::move(out);
    return node;
  }

  static uint64_t remap(uint64_t code, const FeatureSpace& from, const FeatureSpace& to) {
    uint64_t out = 0;
    for (size_t i = 0; i < from.size(); ++i) {
      if ((code >> i) & 1U) out |= uint64_t{1} << to.index(from.name(i));
    }
    return out;
  }

  std::unique_ptr<PlanNode> build_product(const Abstraction& a,
                                          std::shared_ptr<const AbstractedConfigs> in) {
    auto node = std::make_unique<PlanNode>();
    node->kind = Kind::Product;
    node->in = in;
    node->first = build(a.left(), in);
    node->second = build(a.right(), in);
    const AbstractedConfigs& l = *node->first->out;
    const AbstractedConfigs& r = *node->second->out;

    std::vector<std::string> names = l.space().names();
    for (const auto& n : r.space().names()) {
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    }
    FeatureSpace space(std::move(names));

    auto out = std::make_shared<AbstractedConfigs>();
    out->original = in->original;
    std::vector<uint64_t> codes;
    for (size_t k = 0; k < l.size(); ++k) {
      node->left_pos.push_back(codes.size());
      codes.push_back(remap(l.configs->code(k), l.space(), space));
      out->meanings.push_back(l.meanings[k]);
    }
    for (size_t k = 0; k < r.size(); ++k) {
      uint64_t c = remap(r.configs->code(k), r.space(), space);
      auto it = std::find(codes.begin(), codes.end(), c);
      if (it != codes.end()) {
        size_t pos = static_cast<size_t>(it - codes.begin());
        node->right_pos.push_back(pos);
        out->meanings[pos] = out->meanings[pos].unite(r.meanings[k]);
      } else {
        node->right_pos.push_back(codes.size());
        codes.push_back(c);
        out->meanings.push_back(r.meanings[k]);
      }
    }
    out->configs = std::make_shared<const ConfigSet>(std::move(space), std::move(codes));
    out->renames.original = in->original;
    for (const auto* side : {&l, &r}) {
      for (const auto& e : side->renames.entries) {
        if (!out->renames.find(e.name)) out->renames.entries.push_back(e);
      }
    }
    node->out = std::move(out);
    return node;
  }

  std::vector<std::string> used_;
  std::vector<std::string> preset_;
  std::vector<std::string> created_;
};

void check_indexed(const LiftedStore& s, const AbstractedConfigs& ac) {
  if (s.config_ptr() != ac.configs && s.configs() != *ac.configs) {
    throw SemanticError("store is not indexed by the expected configurations");
  }
}

LiftedStore alpha_node(const PlanNode& n, const LiftedStore& a) {
  check_indexed(a, *n.in);
  const Lattice l = a.lattice();
  switch (n.kind) {
    case Kind::Join: {
      LiftedStore out = LiftedStore::bot(l, n.out->configs, a.vars());
      for (size_t v = 0; v < a.vars().size(); ++v) {
        out.column(v)[0] = kernels::reduce_join(l, a.column(v));
      }
      return out;
    }
    case Kind::Proj: {
      if (n.out->configs == n.in->configs) return a;
      LiftedStore out = LiftedStore::bot(l, n.out->configs, a.vars());
      for (size_t v = 0; v < a.vars().size(); ++v) {
        auto src = a.column(v);
        auto dst = out.column(v);
        for (size_t j = 0; j < n.selected.size(); ++j) dst[j] = src[n.selected[j]];
      }
      return out;
    }
    case Kind::Compose: return alpha_node(*n.second, alpha_node(*n.first, a));
    case Kind::Product: {
      LiftedStore left = alpha_node(*n.first, a);
      LiftedStore right = alpha_node(*n.second, a);
      LiftedStore out = LiftedStore::bot(l, n.out->configs, a.vars());
      for (size_t v = 0; v < a.vars().size(); ++v) {
        auto dst = out.column(v);
        auto ls = left.column(v);
        auto rs = right.column(v);
        for (size_t j = 0; j < ls.size(); ++j) {
          dst[n.left_pos[j]] = enc::join(l, dst[n.left_pos[j]], ls[j]);
        }
        for (size_t j = 0; j < rs.size(); ++j) {
          dst[n.right_pos[j]] = enc::join(l, dst[n.right_pos[j]], rs[j]);
        }
      }
      return out;
    }
    default: break;
  }
  throw SemanticError("unexpected node in abstraction plan");
}

LiftedStore gamma_node(const PlanNode& n, const LiftedStore& d) {
  check_indexed(d, *n.out);
  const Lattice l = d.lattice();
  switch (n.kind) {
    case Kind::Join: {
      LiftedStore out = LiftedStore::top(l, n.in->configs, d.vars());
      for (size_t v = 0; v < d.vars().size(); ++v) {
        auto dst = out.column(v);
        std::fill(dst.begin(), dst.end(), d.column(v)[0]);
      }
      return out;
    }
    case Kind::Proj: {
      if (n.out->configs == n.in->configs) return d;
      LiftedStore out = LiftedStore::top(l, n.in->configs, d.vars());
      for (size_t v = 0; v < d.vars().size(); ++v) {
        auto src = d.column(v);
        auto dst = out.column(v);
        for (size_t j = 0; j < n.selected.size(); ++j) dst[n.selected[j]] = src[j];
      }
      return out;
    }
    case Kind::Compose: return gamma_node(*n.first, gamma_node(*n.second, d));
    case Kind::Product: {
      auto gather = [&](const std::vector<size_t>& pos, const AbstractedConfigs& side) {
        LiftedStore s = LiftedStore::top(l, side.configs, d.vars());
        for (size_t v = 0; v < d.vars().size(); ++v) {
          auto src = d.column(v);
          auto dst = s.column(v);
          for (size_t j = 0; j < pos.size(); ++j) dst[j] = src[pos[j]];
        }
        return s;
      };
      LiftedStore gl = gamma_node(*n.first, gather(n.left_pos, *n.first->out));
      LiftedStore gr = gamma_node(*n.second, gather(n.right_pos, *n.second->out));
      return lifted_meet(gl, gr);
    }
    default: break;
  }
  throw SemanticError("unexpected node in abstraction plan");
}

} // namespace

AbstractionPlan::AbstractionPlan(const Abstraction& alpha, std::shared_ptr<const ConfigSet> K) {
  auto in = std::make_shared<const AbstractedConfigs>(AbstractedConfigs::concrete(K));
  Builder first(K->space(), {});
  root_ = first.build(alpha, in);
  const auto& created = first.created();
  if (created.empty()) return;

  // Second pass: names that survive into the output space get Z1, Z2, ...
  // in output order; intermediate ones are numbered after them.
  std::vector<std::string> used = K->space().names();
  std::vector<std::pair<std::string, std::string>> rename;
  for (const auto& n : root_->out->space().names()) {
    if (std::find(created.begin(), created.end(), n) == created.end()) continue;
    rename.emplace_back(n, fresh_feature(used));
    used.push_back(rename.back().second);
  }
  for (const auto& n : created) {
    auto hit = std::find_if(rename.begin(), rename.end(), [&](const auto& e) { return e.first == n; });
    if (hit == rename.end()) {
      rename.emplace_back(n, fresh_feature(used));
      used.push_back(rename.back().second);
    }
  }
  std::vector<std::string> preset;
  for (const auto& n : created) {
    preset.push_back(std::find_if(rename.begin(), rename.end(),
                                  [&](const auto& e) { return e.first == n; })->second);
  }
  if (preset == created) return;
  Builder second(K->space(), std::move(preset));
  root_ = second.build(alpha, in);
}

LiftedStore AbstractionPlan::alpha(const LiftedStore& a) const { return alpha_node(*root_, a); }

LiftedStore AbstractionPlan::gamma(const LiftedStore& d) const { return gamma_node(*root_, d); }

AbstractedConfigs abstract_configs(const Abstraction& alpha, const ConfigSet& K) {
  return AbstractionPlan(alpha, std::make_shared<const ConfigSet>(K)).output();
}

LiftedStore alpha_apply(const Abstraction& alpha, const ConfigSet& K, const LiftedStore& a) {
  if (a.configs() != K) throw SemanticError("store is not indexed by the given configurations");
  return AbstractionPlan(alpha, a.config_ptr()).alpha(a);
}

LiftedStore gamma_apply(const Abstraction& alpha, const ConfigSet& K, const LiftedStore& d) {
  AbstractionPlan plan(alpha, std::make_shared<const ConfigSet>(K));
  if (d.configs() != *plan.output().configs) {
    throw SemanticError("store is not indexed by the abstract configurations");
  }
  LiftedStore dd = LiftedStore::top(d.lattice(), plan.output().configs, d.vars());
  for (size_t v = 0; v < d.vars().size(); ++v) {
    std::copy(d.column(v).begin(), d.column(v).end(), dd.column(v).begin());
  }
  return plan.gamma(dd);
}

} // namespace liftcal
