#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace liftcal {

class TokenStream;

// Truth tables are materialized up to this many features.
inline constexpr size_t kMaxDenseFeatures = 20;
// Valuation codes are uint64 bitmasks.
inline constexpr size_t kMaxFeatures = 64;

// Ordered, duplicate-free feature names. A valuation of a space is encoded as
// a code whose bit i is the value of feature i.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  explicit FeatureSpace(std::vector<std::string> names);

  size_t size() const { return names_.size(); }
  const std::string& name(size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<size_t> find(std::string_view name) const;
  // Throws UndeclaredFeature.
  size_t index(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  friend bool operator==(const FeatureSpace&, const FeatureSpace&) = default;

 private:
  std::vector<std::string> names_;
};

class FeatExp {
 public:
  enum class Kind : uint8_t { True, False, Atom, Not, And, Or, Implies };

  FeatExp();  // true

  static FeatExp truth();
  static FeatExp falsity();
  static FeatExp atom(std::string name);
  static FeatExp negate(FeatExp e);
  // Nested conjunctions/disjunctions are flattened; an empty list gives the
  // unit, a single element is returned unchanged.
  static FeatExp conj(std::vector<FeatExp> kids);
  static FeatExp disj(std::vector<FeatExp> kids);
  static FeatExp implies(FeatExp lhs, FeatExp rhs);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  std::span<const FeatExp> kids() const { return node_->kids; }

  std::string render() const;
  // Constant folding only; does not touch atoms.
  FeatExp fold() const;
  FeatExp substitute(std::string_view name, bool value) const;
  void atoms(std::set<std::string>& out) const;
  bool mentions(std::string_view name) const;

  // Structural equality.
  friend bool operator==(const FeatExp& a, const FeatExp& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<FeatExp> kids;
  };
  explicit FeatExp(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static FeatExp make(Kind k, std::string name, std::vector<FeatExp> kids);

  std::shared_ptr<const Node> node_;
};

inline FeatExp operator!(FeatExp e) { return FeatExp::negate(std::move(e)); }
inline FeatExp operator&(FeatExp a, FeatExp b) { return FeatExp::conj({std::move(a), std::move(b)}); }
inline FeatExp operator|(FeatExp a, FeatExp b) { return FeatExp::disj({std::move(a), std::move(b)}); }

FeatExp parse_featexp(std::string_view text, const FeatureSpace& space);
FeatExp parse_featexp(TokenStream& ts, const FeatureSpace& space);
// Throws UndeclaredFeature if e mentions a name outside space.
void check_declared(const FeatExp& e, const FeatureSpace& space);

// Canonical enumeration: earlier features more significant, true before false.
uint64_t code_at_rank(size_t nfeatures, uint64_t rank);
uint64_t rank_of(size_t nfeatures, uint64_t code);

// Formula evaluation at a valuation code; names resolved against space.
bool eval(const FeatExp& e, const FeatureSpace& space, uint64_t code);

// A formula compiled against a space for repeated evaluation.
class Predicate {
 public:
  Predicate(const FeatExp& e, const FeatureSpace& space);
  bool operator()(uint64_t code) const;

 private:
  enum class Op : uint8_t { True, False, Atom, Not, And, Or, Implies };
  struct Instr {
    Op op;
    uint32_t arg;  // feature index or child count
  };
  std::vector<Instr> prog_;
  mutable std::vector<uint8_t> stack_;
};

// A set of valuations of a space: a single code, or a dense truth table when
// the space has at most kMaxDenseFeatures features.
class Valuations {
 public:
  Valuations() = default;

  static Valuations none(size_t nfeatures);
  static Valuations all(size_t nfeatures);
  static Valuations single(size_t nfeatures, uint64_t code);
  static Valuations of(const FeatExp& e, const FeatureSpace& space);
  static Valuations from_codes(size_t nfeatures, std::span<const uint64_t> codes);
  static Valuations union_of(size_t nfeatures, std::span<const Valuations> parts);

  size_t num_features() const { return n_; }
  bool empty() const;
  size_t count() const;
  bool contains(uint64_t code) const;
  std::optional<uint64_t> single_code() const;
  bool subset_of(const Valuations& other) const;
  bool intersects(const Valuations& other) const;
  Valuations unite(const Valuations& other) const;
  Valuations intersect(const Valuations& other) const;
  Valuations complement() const;
  // Valuations that agree with a member everywhere except possibly feature i.
  Valuations forget(size_t i) const;
  // Members in canonical order.
  std::vector<uint64_t> members() const;
  // Disjunction of the members' literal conjunctions; false when empty.
  FeatExp to_formula(const FeatureSpace& space) const;

  friend bool operator==(const Valuations& a, const Valuations& b);

 private:
  const std::vector<uint64_t>& dense() const;
  static Valuations dense_of(size_t n, std::vector<uint64_t> words);

  size_t n_ = 0;
  bool is_single_ = false;
  uint64_t code_ = 0;
  // Materialized lazily for singles.
  mutable std::vector<uint64_t> words_;
};

// Validity checks over a space with at most kMaxDenseFeatures features.
bool sat(const FeatExp& phi, const FeatureSpace& space);
bool valid(const FeatExp& phi, const FeatureSpace& space);
bool entails(const FeatExp& phi, const FeatExp& theta, const FeatureSpace& space);
bool equiv(const FeatExp& a, const FeatExp& b, const FeatureSpace& space);
// phi[a := true] | phi[a := false], constant-folded.
FeatExp eliminate(const FeatExp& phi, std::string_view a);

// The literal conjunction for a valuation code.
FeatExp config_formula(const FeatureSpace& space, uint64_t code);

// Ordered set of pairwise distinct total valuations of a space.
class ConfigSet {
 public:
  ConfigSet() = default;
  ConfigSet(FeatureSpace space, std::vector<uint64_t> codes);

  const FeatureSpace& space() const { return space_; }
  size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  uint64_t code(size_t i) const { return codes_[i]; }
  std::span<const uint64_t> codes() const { return codes_; }
  FeatExp formula(size_t i) const { return config_formula(space_, codes_[i]); }
  std::optional<size_t> find(uint64_t code) const;
  // Position of the member equivalent to k, if any.
  std::optional<size_t> find(const FeatExp& k) const;

  friend bool operator==(const ConfigSet&, const ConfigSet&) = default;

 private:
  FeatureSpace space_;
  std::vector<uint64_t> codes_;
};

struct FeatureModel {
  FeatureSpace space;
  FeatExp psi;
};

// Canonical order. Spaces above kMaxDenseFeatures use pruned search, so psi
// must have few models there.
ConfigSet valid_configs(const FeatureModel& fm);

} // namespace liftcal
