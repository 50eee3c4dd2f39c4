#include "liftcal/lattice.hpp"

#include <algorithm>

#include "liftcal/errors.hpp"
#include "liftcal/kernels.hpp"

namespace liftcal {

// ---------------------------------------------------------------- Store

Value Store::get(std::string_view var) const {
  for (const auto& [k, v] : entries_) {
    if (k == var) return v;
  }
  return Value::top();
}

void Store::set(std::string_view var, Value v) {
  if (!v.belongs_to(lattice_)) {
    throw SemanticError(render_value(v) + " is not an element of the " +
                        lattice_name(lattice_) + " lattice");
  }
  for (auto& [k, old] : entries_) {
    if (k == var) {
      old = v;
      return;
    }
  }
  entries_.emplace_back(std::string(var), v);
}

namespace {

void check_same_lattice(Lattice a, Lattice b) {
  if (a != b) throw SemanticError("mixed-lattice operands");
}

std::vector<std::string> union_vars(const Store& a, const Store& b) {
  std::vector<std::string> vars;
  for (const auto& [k, v] : a.entries()) vars.push_back(k);
  for (const auto& [k, v] : b.entries()) {
    if (std::find(vars.begin(), vars.end(), k) == vars.end()) vars.push_back(k);
  }
  return vars;
}

template <class F>
Store store_combine(const Store& a, const Store& b, F f) {
  check_same_lattice(a.lattice(), b.lattice());
  Store out(a.lattice());
  for (const auto& x : union_vars(a, b)) out.set(x, f(a.get(x), b.get(x)));
  return out;
}

} // namespace

bool store_leq(const Store& a, const Store& b) {
  check_same_lattice(a.lattice(), b.lattice());
  for (const auto& x : union_vars(a, b)) {
    if (!enc::leq(a.get(x).bits(), b.get(x).bits())) return false;
  }
  return true;
}

bool store_equal(const Store& a, const Store& b) {
  check_same_lattice(a.lattice(), b.lattice());
  for (const auto& x : union_vars(a, b)) {
    if (a.get(x) != b.get(x)) return false;
  }
  return true;
}

Store store_join(const Store& a, const Store& b) {
  return store_combine(a, b, [l = a.lattice()](Value x, Value y) { return value_join(l, x, y); });
}

Store store_meet(const Store& a, const Store& b) {
  return store_combine(a, b, [l = a.lattice()](Value x, Value y) { return value_meet(l, x, y); });
}

std::string render_store(const Store& s, std::span<const std::string> vars) {
  std::string out;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i] + "=" + render_value(s.get(vars[i]));
  }
  return out;
}

// ---------------------------------------------------------------- LiftedStore

LiftedStore::LiftedStore(Lattice l, std::shared_ptr<const ConfigSet> configs,
                         std::vector<std::string> vars, Value fill)
    : lattice_(l),
      configs_(std::move(configs)),
      vars_(std::make_shared<const std::vector<std::string>>(std::move(vars))) {
  if (!fill.belongs_to(l)) throw SemanticError("fill value outside lattice");
  cols_.assign(vars_->size(), std::vector<int64_t>(configs_->size(), fill.bits()));
}

LiftedStore LiftedStore::top(Lattice l, std::shared_ptr<const ConfigSet> configs,
                             std::vector<std::string> vars) {
  return LiftedStore(l, std::move(configs), std::move(vars), Value::top());
}

LiftedStore LiftedStore::bot(Lattice l, std::shared_ptr<const ConfigSet> configs,
                             std::vector<std::string> vars) {
  return LiftedStore(l, std::move(configs), std::move(vars), Value::bot());
}

LiftedStore LiftedStore::from_stores(Lattice l, std::shared_ptr<const ConfigSet> configs,
                                     std::vector<std::string> vars,
                                     std::span<const Store> stores) {
  if (stores.size() != configs->size()) {
    throw SemanticError("store count does not match configuration count");
  }
  LiftedStore out = top(l, std::move(configs), std::move(vars));
  for (size_t k = 0; k < stores.size(); ++k) {
    check_same_lattice(l, stores[k].lattice());
    for (const auto& [x, v] : stores[k].entries()) out.set(k, x, v);
  }
  return out;
}

std::optional<size_t> LiftedStore::var_index(std::string_view var) const {
  for (size_t i = 0; i < vars_->size(); ++i) {
    if ((*vars_)[i] == var) return i;
  }
  return std::nullopt;
}

size_t LiftedStore::ensure_var(std::string_view var) {
  if (auto i = var_index(var)) return *i;
  auto vars = std::make_shared<std::vector<std::string>>(*vars_);
  vars->emplace_back(var);
  vars_ = std::move(vars);
  cols_.emplace_back(configs_->size(), enc::kTop);
  return cols_.size() - 1;
}

Value LiftedStore::get(size_t k, std::string_view var) const {
  auto i = var_index(var);
  return i ? at(k, *i) : Value::top();
}

void LiftedStore::set(size_t k, std::string_view var, Value v) {
  if (!v.belongs_to(lattice_)) throw SemanticError("value outside lattice");
  size_t i = ensure_var(var);
  cols_[i][k] = v.bits();
}

Store LiftedStore::pi(size_t k) const {
  Store s(lattice_);
  for (size_t v = 0; v < vars_->size(); ++v) s.set((*vars_)[v], at(k, v));
  return s;
}

Store LiftedStore::pi(const FeatExp& k) const {
  auto i = configs_->find(k);
  if (!i) throw SemanticError("no configuration equivalent to " + k.render());
  return pi(*i);
}

// ---------------------------------------------------------------- lifted ops

namespace {

void check_compatible(const LiftedStore& a, const LiftedStore& b) {
  check_same_lattice(a.lattice(), b.lattice());
  if (a.config_ptr() != b.config_ptr() && a.configs() != b.configs()) {
    throw SemanticError("lifted stores over different configuration sets");
  }
}

std::vector<std::string> union_vars(const LiftedStore& a, const LiftedStore& b) {
  std::vector<std::string> vars = a.vars();
  for (const auto& x : b.vars()) {
    if (!a.var_index(x)) vars.push_back(x);
  }
  return vars;
}

LiftedStore reshape(const LiftedStore& s, std::shared_ptr<const ConfigSet> configs,
                    const std::vector<std::string>& vars) {
  if (s.vars() == vars) return s;
  LiftedStore out = LiftedStore::top(s.lattice(), std::move(configs), vars);
  for (size_t v = 0; v < vars.size(); ++v) {
    if (auto i = s.var_index(vars[v])) {
      auto src = s.column(*i);
      std::copy(src.begin(), src.end(), out.column(v).begin());
    }
  }
  return out;
}

} // namespace

std::pair<LiftedStore, LiftedStore> align(const LiftedStore& a, const LiftedStore& b) {
  check_compatible(a, b);
  auto vars = union_vars(a, b);
  return {reshape(a, a.config_ptr(), vars), reshape(b, a.config_ptr(), vars)};
}

LiftedStore lifted_join(const LiftedStore& a, const LiftedStore& b) {
  auto [x, y] = align(a, b);
  for (size_t v = 0; v < x.vars().size(); ++v) {
    kernels::join(x.lattice(), x.column(v), y.column(v), x.column(v));
  }
  return x;
}

LiftedStore lifted_meet(const LiftedStore& a, const LiftedStore& b) {
  auto [x, y] = align(a, b);
  for (size_t v = 0; v < x.vars().size(); ++v) {
    kernels::meet(x.lattice(), x.column(v), y.column(v), x.column(v));
  }
  return x;
}

bool lifted_leq(const LiftedStore& a, const LiftedStore& b) {
  if (a.vars() == b.vars()) {
    check_compatible(a, b);
    for (size_t v = 0; v < a.vars().size(); ++v) {
      if (!kernels::leq(a.column(v), b.column(v))) return false;
    }
    return true;
  }
  auto [x, y] = align(a, b);
  return lifted_leq(x, y);
}

bool lifted_equal(const LiftedStore& a, const LiftedStore& b) {
  if (a.vars() == b.vars()) {
    check_compatible(a, b);
    for (size_t v = 0; v < a.vars().size(); ++v) {
      if (!std::equal(a.column(v).begin(), a.column(v).end(), b.column(v).begin())) {
        return false;
      }
    }
    return true;
  }
  auto [x, y] = align(a, b);
  return lifted_equal(x, y);
}

LiftedStore lifted_top(Lattice l, std::shared_ptr<const ConfigSet> configs,
                       std::vector<std::string> vars) {
  return LiftedStore::top(l, std::move(configs), std::move(vars));
}

LiftedStore lifted_bot(Lattice l, std::shared_ptr<const ConfigSet> configs,
                       std::vector<std::string> vars) {
  return LiftedStore::bot(l, std::move(configs), std::move(vars));
}

} // namespace liftcal
