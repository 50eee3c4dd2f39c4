#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftcal/featexp.hpp"
#include "liftcal/value.hpp"

namespace liftcal {

// Variable -> value map. Variables not present read as top.
class Store {
 public:
  explicit Store(Lattice l = Lattice::Const) : lattice_(l) {}

  Lattice lattice() const { return lattice_; }
  Value get(std::string_view var) const;
  void set(std::string_view var, Value v);
  // Explicit entries in insertion order.
  const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }

 private:
  Lattice lattice_;
  std::vector<std::pair<std::string, Value>> entries_;
};

bool store_leq(const Store& a, const Store& b);
bool store_equal(const Store& a, const Store& b);
Store store_join(const Store& a, const Store& b);
Store store_meet(const Store& a, const Store& b);
// "x=1, y=top" over the given variables.
std::string render_store(const Store& s, std::span<const std::string> vars);

// A tuple of stores indexed by a ConfigSet, kept as one value column per
// variable so that component-wise operations run as column kernels.
class LiftedStore {
 public:
  LiftedStore(Lattice l, std::shared_ptr<const ConfigSet> configs,
              std::vector<std::string> vars, Value fill);

  static LiftedStore top(Lattice l, std::shared_ptr<const ConfigSet> configs,
                         std::vector<std::string> vars);
  static LiftedStore bot(Lattice l, std::shared_ptr<const ConfigSet> configs,
                         std::vector<std::string> vars);
  // One store per config, in config order.
  static LiftedStore from_stores(Lattice l, std::shared_ptr<const ConfigSet> configs,
                                 std::vector<std::string> vars, std::span<const Store> stores);

  Lattice lattice() const { return lattice_; }
  const ConfigSet& configs() const { return *configs_; }
  const std::shared_ptr<const ConfigSet>& config_ptr() const { return configs_; }
  size_t size() const { return configs_->size(); }
  const std::vector<std::string>& vars() const { return *vars_; }
  std::optional<size_t> var_index(std::string_view var) const;
  // Adds a top-filled column if var is missing. Returns its index.
  size_t ensure_var(std::string_view var);

  std::span<const int64_t> column(size_t v) const { return cols_[v]; }
  std::span<int64_t> column(size_t v) { return cols_[v]; }
  Value at(size_t k, size_t v) const { return Value::from_bits(cols_[v][k]); }
  Value get(size_t k, std::string_view var) const;
  void set(size_t k, std::string_view var, Value v);

  Store pi(size_t k) const;
  // Component of the member equivalent to k. Throws SemanticError if none.
  Store pi(const FeatExp& k) const;

 private:
  Lattice lattice_;
  std::shared_ptr<const ConfigSet> configs_;
  std::shared_ptr<const std::vector<std::string>> vars_;
  std::vector<std::vector<int64_t>> cols_;
};

// Component-wise operations. Both sides must have the same lattice and equal
// config sets; variable domains are unified with top as the default.
LiftedStore lifted_join(const LiftedStore& a, const LiftedStore& b);
LiftedStore lifted_meet(const LiftedStore& a, const LiftedStore& b);
bool lifted_leq(const LiftedStore& a, const LiftedStore& b);
bool lifted_equal(const LiftedStore& a, const LiftedStore& b);
LiftedStore lifted_top(Lattice l, std::shared_ptr<const ConfigSet> configs,
                       std::vector<std::string> vars);
LiftedStore lifted_bot(Lattice l, std::shared_ptr<const ConfigSet> configs,
                       std::vector<std::string> vars);

// Reorders/extends b's columns to a's variables (then b's extras). Returned
// pair shares a's config set.
std::pair<LiftedStore, LiftedStore> align(const LiftedStore& a, const LiftedStore& b);

} // namespace liftcal
