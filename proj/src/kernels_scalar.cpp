#include <bit>

#include "liftcal/kernels.hpp"

namespace liftcal::kernels {
namespace {

void join_scalar(Lattice l, const int64_t* a, const int64_t* b, int64_t* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = enc::join(l, a[i], b[i]);
}

void meet_scalar(Lattice l, const int64_t* a, const int64_t* b, int64_t* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = enc::meet(l, a[i], b[i]);
}

bool leq_scalar(const int64_t* a, const int64_t* b, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (!enc::leq(a[i], b[i])) return false;
  }
  return true;
}

void binop_scalar(ArithOp op, const int64_t* a, const int64_t* b, int64_t* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = enc::binop(op, a[i], b[i]);
}

void select_scalar(const uint8_t* mask, const int64_t* a, const int64_t* b, int64_t* out,
                   size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = mask[i] ? a[i] : b[i];
}

int64_t reduce_join_scalar(Lattice l, const int64_t* a, size_t n) {
  int64_t acc = enc::kBot;
  for (size_t i = 0; i < n; ++i) acc = enc::join(l, acc, a[i]);
  return acc;
}

void bits_and_scalar(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] & b[i];
}

void bits_or_scalar(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] | b[i];
}

void bits_andnot_scalar(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] & ~b[i];
}

bool bits_subset_scalar(const uint64_t* a, const uint64_t* b, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

bool bits_intersect_scalar(const uint64_t* a, const uint64_t* b, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (a[i] & b[i]) return true;
  }
  return false;
}

size_t bits_count_scalar(const uint64_t* a, size_t n) {
  size_t c = 0;
  for (size_t i = 0; i < n; ++i) c += static_cast<size_t>(std::popcount(a[i]));
  return c;
}

constexpr Table kScalar = {
    Isa::Scalar,        join_scalar,     meet_scalar,        leq_scalar,
    binop_scalar,       select_scalar,   reduce_join_scalar, bits_and_scalar,
    bits_or_scalar,     bits_andnot_scalar, bits_subset_scalar, bits_intersect_scalar,
    bits_count_scalar,
};

} // namespace

const Table& scalar() { return kScalar; }

} // namespace liftcal::kernels
