#include <charconv>

#include "liftcal/errors.hpp"
#include "liftcal/value.hpp"

namespace liftcal {

const char* lattice_name(Lattice l) { return l == Lattice::Const ? "const" : "constplus"; }

Value Value::integer(int64_t n) {
  if (!representable(n)) {
    throw SemanticError("integer out of range: " + std::to_string(n));
  }
  return Value(n);
}

namespace {

void check_member(Lattice l, Value v) {
  if (!v.belongs_to(l)) {
    throw SemanticError(render_value(v) + " is not an element of the " + lattice_name(l) +
                        " lattice");
  }
}

} // namespace

Value value_join(Lattice l, Value a, Value b) {
  check_member(l, a);
  check_member(l, b);
  return Value::from_bits(enc::join(l, a.bits(), b.bits()));
}

Value value_meet(Lattice l, Value a, Value b) {
  check_member(l, a);
  check_member(l, b);
  return Value::from_bits(enc::meet(l, a.bits(), b.bits()));
}

bool value_leq(Lattice l, Value a, Value b) {
  check_member(l, a);
  check_member(l, b);
  return enc::leq(a.bits(), b.bits());
}

Value hat_binop(Lattice l, ArithOp op, Value a, Value b) {
  check_member(l, a);
  check_member(l, b);
  return Value::from_bits(enc::binop(op, a.bits(), b.bits()));
}

std::string render_value(Value v) {
  switch (v.bits()) {
    case enc::kBot: return "bot";
    case enc::kTop: return "top";
    case enc::kLeqZero: return "<=0";
    case enc::kGeqZero: return ">=0";
    default: return std::to_string(v.bits());
  }
}

Value parse_value(std::string_view text, Lattice l) {
  Value v;
  if (text == "bot") {
    v = Value::bot();
  } else if (text == "top") {
    v = Value::top();
  } else if (text == "<=0") {
    v = Value::leq_zero();
  } else if (text == ">=0") {
    v = Value::geq_zero();
  } else {
    int64_t n = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc() || ptr != last || first == last) {
      throw SemanticError("bad value literal '" + std::string(text) + "'");
    }
    v = Value::integer(n);
  }
  check_member(l, v);
  return v;
}

const char* arith_symbol(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Lt: return "<";
    case ArithOp::Eq: return "=";
  }
  return "?";
}

} // namespace liftcal
