#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "liftcal/value.hpp"

// Column kernels over encoded values (see value.hpp) and over packed bitsets.
// Every entry has a scalar reference implementation; vector variants must be
// bit-for-bit equal to it.
namespace liftcal::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
  Isa isa;
  void (*join)(Lattice l, const int64_t* a, const int64_t* b, int64_t* out, size_t n);
  void (*meet)(Lattice l, const int64_t* a, const int64_t* b, int64_t* out, size_t n);
  bool (*leq)(const int64_t* a, const int64_t* b, size_t n);
  void (*binop)(ArithOp op, const int64_t* a, const int64_t* b, int64_t* out, size_t n);
  // out[i] = mask[i] ? a[i] : b[i]
  void (*select)(const uint8_t* mask, const int64_t* a, const int64_t* b, int64_t* out,
                 size_t n);
  int64_t (*reduce_join)(Lattice l, const int64_t* a, size_t n);
  void (*bits_and)(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n);
  void (*bits_or)(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n);
  // out = a & ~b
  void (*bits_andnot)(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n);
  // a & ~b == 0
  bool (*bits_subset)(const uint64_t* a, const uint64_t* b, size_t n);
  bool (*bits_intersect)(const uint64_t* a, const uint64_t* b, size_t n);
  size_t (*bits_count)(const uint64_t* a, size_t n);
};

const Table& scalar();
// nullptr when the variant is not compiled in or the CPU lacks it.
const Table* avx2();

bool supported(Isa isa);
const char* isa_name(Isa isa);

// The table used by the library. Chosen once from the CPU unless overridden
// by LIFTCAL_ISA=scalar|avx2 or by use().
const Table& active();
// Throws SemanticError when the ISA is unsupported.
void use(Isa isa);

// Span conveniences over active().
void join(Lattice l, std::span<const int64_t> a, std::span<const int64_t> b,
          std::span<int64_t> out);
void meet(Lattice l, std::span<const int64_t> a, std::span<const int64_t> b,
          std::span<int64_t> out);
bool leq(std::span<const int64_t> a, std::span<const int64_t> b);
void binop(ArithOp op, std::span<const int64_t> a, std::span<const int64_t> b,
           std::span<int64_t> out);
void select(std::span<const uint8_t> mask, std::span<const int64_t> a,
            std::span<const int64_t> b, std::span<int64_t> out);
int64_t reduce_join(Lattice l, std::span<const int64_t> a);

namespace detail {
const Table* avx2_table();
}

} // namespace liftcal::kernels
