#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace liftcal {

enum class Lattice : uint8_t { Const, ConstPlus };

enum class ArithOp : uint8_t { Add, Sub, Mul, Lt, Eq };

const char* lattice_name(Lattice l);

// Single-word encoding shared by the scalar reference ops below and the
// vector kernels. The four smallest int64 values are reserved for the
// non-integer lattice elements; every other int64 is an integer constant.
namespace enc {

inline constexpr int64_t kBot = std::numeric_limits<int64_t>::min();
inline constexpr int64_t kTop = kBot + 1;
inline constexpr int64_t kLeqZero = kBot + 2;
inline constexpr int64_t kGeqZero = kBot + 3;
inline constexpr int64_t kMinInt = kBot + 4;

constexpr bool is_int(int64_t v) { return v >= kMinInt; }

constexpr bool below_leq_zero(int64_t v) {
  return v == kLeqZero || (is_int(v) && v <= 0);
}

constexpr bool below_geq_zero(int64_t v) {
  return v == kGeqZero || (is_int(v) && v >= 0);
}

constexpr int64_t join(Lattice l, int64_t a, int64_t b) {
  if (a == b || b == kBot) return a;
  if (a == kBot) return b;
  if (l == Lattice::Const) return kTop;
  if (below_leq_zero(a) && below_leq_zero(b)) return kLeqZero;
  if (below_geq_zero(a) && below_geq_zero(b)) return kGeqZero;
  return kTop;
}

constexpr int64_t meet(Lattice l, int64_t a, int64_t b) {
  if (a == b || b == kTop) return a;
  if (a == kTop) return b;
  if (a == kBot || b == kBot || l == Lattice::Const) return kBot;
  if ((a == kLeqZero && b == kGeqZero) || (a == kGeqZero && b == kLeqZero)) {
    return 0;
  }
  if (a == kLeqZero) return below_leq_zero(b) ? b : kBot;
  if (a == kGeqZero) return below_geq_zero(b) ? b : kBot;
  if (b == kLeqZero) return below_leq_zero(a) ? a : kBot;
  if (b == kGeqZero) return below_geq_zero(a) ? a : kBot;
  return kBot;
}

constexpr bool leq(int64_t a, int64_t b) {
  return a == b || a == kBot || b == kTop ||
         (b == kLeqZero && is_int(a) && a <= 0) ||
         (b == kGeqZero && is_int(a) && a >= 0);
}

// Integer results wrap modulo 2^64; a result that lands in the reserved range
// is reported as top.
constexpr int64_t binop(ArithOp op, int64_t a, int64_t b) {
  if (a == kBot || b == kBot) return kBot;
  if (!is_int(a) || !is_int(b)) return kTop;
  uint64_t ua = static_cast<uint64_t>(a);
  uint64_t ub = static_cast<uint64_t>(b);
  int64_t r = 0;
  switch (op) {
    case ArithOp::Add: r = static_cast<int64_t>(ua + ub); break;
    case ArithOp::Sub: r = static_cast<int64_t>(ua - ub); break;
    case ArithOp::Mul: r = static_cast<int64_t>(ua * ub); break;
    case ArithOp::Lt: r = a < b ? 1 : 0; break;
    case ArithOp::Eq: r = a == b ? 1 : 0; break;
  }
  return is_int(r) ? r : kTop;
}

} // namespace enc

// A Const or Const+ lattice element. Which lattice it belongs to is carried
// by the enclosing store.
class Value {
 public:
  constexpr Value() : bits_(enc::kTop) {}

  static constexpr Value bot() { return Value(enc::kBot); }
  static constexpr Value top() { return Value(enc::kTop); }
  static constexpr Value leq_zero() { return Value(enc::kLeqZero); }
  static constexpr Value geq_zero() { return Value(enc::kGeqZero); }
  // n must not fall in the reserved range (see representable()).
  static Value integer(int64_t n);
  static constexpr Value from_bits(int64_t bits) { return Value(bits); }
  static constexpr bool representable(int64_t n) { return enc::is_int(n); }

  constexpr int64_t bits() const { return bits_; }
  constexpr bool is_bot() const { return bits_ == enc::kBot; }
  constexpr bool is_top() const { return bits_ == enc::kTop; }
  constexpr bool is_int() const { return enc::is_int(bits_); }
  std::optional<int64_t> as_int() const {
    return is_int() ? std::optional<int64_t>(bits_) : std::nullopt;
  }
  // True for the two sign elements, which only exist in Const+.
  constexpr bool is_sign() const {
    return bits_ == enc::kLeqZero || bits_ == enc::kGeqZero;
  }
  bool belongs_to(Lattice l) const { return l == Lattice::ConstPlus || !is_sign(); }

  friend constexpr bool operator==(Value, Value) = default;

 private:
  explicit constexpr Value(int64_t bits) : bits_(bits) {}
  int64_t bits_;
};

Value value_join(Lattice l, Value a, Value b);
Value value_meet(Lattice l, Value a, Value b);
bool value_leq(Lattice l, Value a, Value b);
Value hat_binop(Lattice l, ArithOp op, Value a, Value b);

std::string render_value(Value v);
// Accepts "bot", "top", "<=0", ">=0" and decimal integers (optionally signed).
// Throws SemanticError when the literal is not an element of l.
Value parse_value(std::string_view text, Lattice l);

const char* arith_symbol(ArithOp op);

} // namespace liftcal
