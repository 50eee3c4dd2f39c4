#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "liftcal/featexp.hpp"
#include "liftcal/lattice.hpp"

namespace liftcal {

class Abstraction {
 public:
  enum class Kind : uint8_t { Join, Proj, Compose, Product, JoinPhi, FIgnore, FProj };

  static Abstraction join();
  static Abstraction proj(FeatExp phi);
  // outer ∘ inner: inner is applied first.
  static Abstraction compose(Abstraction outer, Abstraction inner);
  static Abstraction product(Abstraction left, Abstraction right);
  static Abstraction join_phi(FeatExp phi);
  static Abstraction fignore(std::string feature);
  static Abstraction fproj(std::vector<std::string> features);

  Kind kind() const { return node_->kind; }
  const FeatExp& phi() const { return node_->phi; }
  const std::string& feature() const { return node_->features.front(); }
  const std::vector<std::string>& features() const { return node_->features; }
  const Abstraction& outer() const { return node_->kids[0]; }
  const Abstraction& inner() const { return node_->kids[1]; }
  const Abstraction& left() const { return node_->kids[0]; }
  const Abstraction& right() const { return node_->kids[1]; }

  // DSL text; parse_abstraction(render()) is structurally equal.
  std::string render() const;

  friend bool operator==(const Abstraction& a, const Abstraction& b);

 private:
  struct Node {
    Kind kind;
    FeatExp phi;
    std::vector<std::string> features;
    std::vector<Abstraction> kids;
  };
  explicit Abstraction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

Abstraction parse_abstraction(std::string_view text, const FeatureSpace& space);

// Fresh feature name introduced by a Join, with the set of original
// valuations it stands for.
struct RenameEntry {
  std::string name;
  Valuations meaning;
};

struct RenameTable {
  FeatureSpace original;
  std::vector<RenameEntry> entries;

  const RenameEntry* find(std::string_view name) const;
  // "Z1 = (A & B) | (A & !B)" lines.
  std::string render() const;
};

// An abstract configuration set: each member is a full valuation of the
// abstract feature space (Z names plus surviving original features) and
// carries its meaning as a set of original valuations.
struct AbstractedConfigs {
  FeatureSpace original;
  std::shared_ptr<const ConfigSet> configs;
  std::vector<Valuations> meanings;
  RenameTable renames;

  const FeatureSpace& space() const { return configs->space(); }
  size_t size() const { return configs->size(); }
  FeatExp meaning_formula(size_t j) const { return meanings[j].to_formula(original); }
  // Identity abstraction of a concrete set.
  static AbstractedConfigs concrete(std::shared_ptr<const ConfigSet> K);
};

// "Z1", "Z2", ... : the first name not in used.
std::string fresh_feature(const std::vector<std::string>& used);

// Evaluated form of an abstraction over one concrete configuration set: every
// node knows its input and output configurations. Derived constructors are
// desugared into Join, Proj, Compose and Product.
class AbstractionPlan {
 public:
  struct Node {
    Abstraction::Kind kind;
    FeatExp phi;               // Proj
    std::string fresh;         // Join
    std::shared_ptr<const AbstractedConfigs> in;
    std::shared_ptr<const AbstractedConfigs> out;
    std::vector<size_t> selected;   // Proj: kept input positions
    std::vector<size_t> left_pos;   // Product: output position of each left config
    std::vector<size_t> right_pos;  // Product: output position of each right config
    std::unique_ptr<Node> first;    // Compose: inner, Product: left
    std::unique_ptr<Node> second;   // Compose: outer, Product: right
  };

  AbstractionPlan(const Abstraction& alpha, std::shared_ptr<const ConfigSet> K);

  const Node& root() const { return *root_; }
  const AbstractedConfigs& input() const { return *root_->in; }
  const AbstractedConfigs& output() const { return *root_->out; }
  std::shared_ptr<const AbstractedConfigs> output_ptr() const { return root_->out; }

  LiftedStore alpha(const LiftedStore& a) const;
  LiftedStore gamma(const LiftedStore& d) const;

 private:
  std::unique_ptr<Node> root_;
};

AbstractedConfigs abstract_configs(const Abstraction& alpha, const ConfigSet& K);

LiftedStore alpha_apply(const Abstraction& alpha, const ConfigSet& K, const LiftedStore& a);
LiftedStore gamma_apply(const Abstraction& alpha, const ConfigSet& K, const LiftedStore& d);

// Product of JoinPhi over the groups of K that agree after eliminating a,
// in first-member order. K must be a concrete set.
Abstraction fignore_expand(const std::string& a, const ConfigSet& K);
// Same grouping over abstract configurations (by meaning).
Abstraction fignore_expand(const std::string& a, const AbstractedConfigs& K);

} // namespace liftcal
