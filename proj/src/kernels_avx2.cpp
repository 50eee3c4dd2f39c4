// Built with -mavx2. Only reached through the dispatch table after a CPU check.

#include <immintrin.h>

#include <bit>
#include <cstring>

#include "liftcal/kernels.hpp"

namespace liftcal::kernels {
namespace {

inline __m256i load(const int64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline __m256i load(const uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline void store(int64_t* p, __m256i v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

inline void store(uint64_t* p, __m256i v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

inline __m256i splat(int64_t v) { return _mm256_set1_epi64x(v); }

inline __m256i is_int_avx2(__m256i v) { return _mm256_cmpgt_epi64(v, splat(enc::kGeqZero)); }

// v <= 0 among integers
inline __m256i nonpos_avx2(__m256i v, __m256i ints) {
  return _mm256_andnot_si256(_mm256_cmpgt_epi64(v, _mm256_setzero_si256()), ints);
}

// v >= 0 among integers
inline __m256i nonneg_avx2(__m256i v, __m256i ints) {
  return _mm256_and_si256(_mm256_cmpgt_epi64(v, splat(-1)), ints);
}

inline __m256i pick(__m256i base, __m256i over, __m256i mask) {
  return _mm256_blendv_epi8(base, over, mask);
}

inline __m256i join_avx2_vec(Lattice l, __m256i a, __m256i b) {
  const __m256i bot = splat(enc::kBot);
  __m256i r = splat(enc::kTop);
  if (l == Lattice::ConstPlus) {
    __m256i ia = is_int_avx2(a);
    __m256i ib = is_int_avx2(b);
    __m256i la = _mm256_or_si256(_mm256_cmpeq_epi64(a, splat(enc::kLeqZero)), nonpos_avx2(a, ia));
    __m256i lb = _mm256_or_si256(_mm256_cmpeq_epi64(b, splat(enc::kLeqZero)), nonpos_avx2(b, ib));
    __m256i ga = _mm256_or_si256(_mm256_cmpeq_epi64(a, splat(enc::kGeqZero)), nonneg_avx2(a, ia));
    __m256i gb = _mm256_or_si256(_mm256_cmpeq_epi64(b, splat(enc::kGeqZero)), nonneg_avx2(b, ib));
    r = pick(r, splat(enc::kGeqZero), _mm256_and_si256(ga, gb));
    r = pick(r, splat(enc::kLeqZero), _mm256_and_si256(la, lb));
  }
  __m256i keep_a = _mm256_or_si256(_mm256_cmpeq_epi64(a, b), _mm256_cmpeq_epi64(b, bot));
  r = pick(r, a, keep_a);
  r = pick(r, b, _mm256_cmpeq_epi64(a, bot));
  return r;
}

inline __m256i meet_avx2_vec(Lattice l, __m256i a, __m256i b) {
  const __m256i bot = splat(enc::kBot);
  const __m256i top = splat(enc::kTop);
  __m256i r = bot;
  if (l == Lattice::ConstPlus) {
    __m256i ia = is_int_avx2(a);
    __m256i ib = is_int_avx2(b);
    __m256i a_le = _mm256_cmpeq_epi64(a, splat(enc::kLeqZero));
    __m256i a_ge = _mm256_cmpeq_epi64(a, splat(enc::kGeqZero));
    __m256i b_le = _mm256_cmpeq_epi64(b, splat(enc::kLeqZero));
    __m256i b_ge = _mm256_cmpeq_epi64(b, splat(enc::kGeqZero));
    r = pick(r, a, _mm256_and_si256(b_ge, nonneg_avx2(a, ia)));
    r = pick(r, a, _mm256_and_si256(b_le, nonpos_avx2(a, ia)));
    r = pick(r, b, _mm256_and_si256(a_ge, nonneg_avx2(b, ib)));
    r = pick(r, b, _mm256_and_si256(a_le, nonpos_avx2(b, ib)));
    __m256i cross = _mm256_or_si256(_mm256_and_si256(a_le, b_ge), _mm256_and_si256(a_ge, b_le));
    r = pick(r, _mm256_setzero_si256(), cross);
  }
  r = pick(r, bot, _mm256_or_si256(_mm256_cmpeq_epi64(a, bot), _mm256_cmpeq_epi64(b, bot)));
  r = pick(r, b, _mm256_cmpeq_epi64(a, top));
  r = pick(r, a, _mm256_or_si256(_mm256_cmpeq_epi64(a, b), _mm256_cmpeq_epi64(b, top)));
  return r;
}

inline __m256i leq_avx2_vec(__m256i a, __m256i b) {
  __m256i ia = is_int_avx2(a);
  __m256i ok = _mm256_or_si256(_mm256_cmpeq_epi64(a, b), _mm256_cmpeq_epi64(a, splat(enc::kBot)));
  ok = _mm256_or_si256(ok, _mm256_cmpeq_epi64(b, splat(enc::kTop)));
  ok = _mm256_or_si256(
      ok, _mm256_and_si256(_mm256_cmpeq_epi64(b, splat(enc::kLeqZero)), nonpos_avx2(a, ia)));
  ok = _mm256_or_si256(
      ok, _mm256_and_si256(_mm256_cmpeq_epi64(b, splat(enc::kGeqZero)), nonneg_avx2(a, ia)));
  return ok;
}

// Low 64 bits of a 64x64 product.
inline __m256i mullo64_avx2(__m256i a, __m256i b) {
  __m256i lo = _mm256_mul_epu32(a, b);
  __m256i t1 = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b);
  __m256i t2 = _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32));
  __m256i cross = _mm256_slli_epi64(_mm256_add_epi64(t1, t2), 32);
  return _mm256_add_epi64(lo, cross);
}

inline __m256i binop_avx2_vec(ArithOp op, __m256i a, __m256i b) {
  const __m256i one = splat(1);
  __m256i r;
  switch (op) {
    case ArithOp::Add: r = _mm256_add_epi64(a, b); break;
    case ArithOp::Sub: r = _mm256_sub_epi64(a, b); break;
    case ArithOp::Mul: r = mullo64_avx2(a, b); break;
    case ArithOp::Lt: r = _mm256_and_si256(_mm256_cmpgt_epi64(b, a), one); break;
    case ArithOp::Eq: r = _mm256_and_si256(_mm256_cmpeq_epi64(a, b), one); break;
    default: r = _mm256_setzero_si256(); break;
  }
  const __m256i top = splat(enc::kTop);
  const __m256i bot = splat(enc::kBot);
  __m256i both_int = _mm256_and_si256(is_int_avx2(a), is_int_avx2(b));
  __m256i good = _mm256_and_si256(both_int, is_int_avx2(r));
  r = pick(top, r, good);
  r = pick(r, bot, _mm256_or_si256(_mm256_cmpeq_epi64(a, bot), _mm256_cmpeq_epi64(b, bot)));
  return r;
}

void join_avx2(Lattice l, const int64_t* a, const int64_t* b, int64_t* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) store(out + i, join_avx2_vec(l, load(a + i), load(b + i)));
  for (; i < n; ++i) out[i] = enc::join(l, a[i], b[i]);
}

void meet_avx2(Lattice l, const int64_t* a, const int64_t* b, int64_t* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) store(out + i, meet_avx2_vec(l, load(a + i), load(b + i)));
  for (; i < n; ++i) out[i] = enc::meet(l, a[i], b[i]);
}

bool leq_avx2(const int64_t* a, const int64_t* b, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    if (_mm256_movemask_epi8(leq_avx2_vec(load(a + i), load(b + i))) != -1) return false;
  }
  for (; i < n; ++i) {
    if (!enc::leq(a[i], b[i])) return false;
  }
  return true;
}

void binop_avx2(ArithOp op, const int64_t* a, const int64_t* b, int64_t* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) store(out + i, binop_avx2_vec(op, load(a + i), load(b + i)));
  for (; i < n; ++i) out[i] = enc::binop(op, a[i], b[i]);
}

void select_avx2(const uint8_t* mask, const int64_t* a, const int64_t* b, int64_t* out,
                 size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    int32_t m4;
    std::memcpy(&m4, mask + i, sizeof m4);
    __m256i m = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(m4));
    m = _mm256_cmpgt_epi64(m, _mm256_setzero_si256());
    store(out + i, pick(load(b + i), load(a + i), m));
  }
  for (; i < n; ++i) out[i] = mask[i] ? a[i] : b[i];
}

int64_t reduce_join_avx2(Lattice l, const int64_t* a, size_t n) {
  __m256i acc = splat(enc::kBot);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = join_avx2_vec(l, acc, load(a + i));
  alignas(32) int64_t lanes[4];
  store(lanes, acc);
  int64_t r = enc::kBot;
  for (int64_t v : lanes) r = enc::join(l, r, v);
  for (; i < n; ++i) r = enc::join(l, r, a[i]);
  return r;
}

void bits_and_avx2(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) store(out + i, _mm256_and_si256(load(a + i), load(b + i)));
  for (; i < n; ++i) out[i] = a[i] & b[i];
}

void bits_or_avx2(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) store(out + i, _mm256_or_si256(load(a + i), load(b + i)));
  for (; i < n; ++i) out[i] = a[i] | b[i];
}

void bits_andnot_avx2(const uint64_t* a, const uint64_t* b, uint64_t* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) store(out + i, _mm256_andnot_si256(load(b + i), load(a + i)));
  for (; i < n; ++i) out[i] = a[i] & ~b[i];
}

bool bits_subset_avx2(const uint64_t* a, const uint64_t* b, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i x = _mm256_andnot_si256(load(b + i), load(a + i));
    if (!_mm256_testz_si256(x, x)) return false;
  }
  for (; i < n; ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

bool bits_intersect_avx2(const uint64_t* a, const uint64_t* b, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    if (!_mm256_testz_si256(load(a + i), load(b + i))) return true;
  }
  for (; i < n; ++i) {
    if (a[i] & b[i]) return true;
  }
  return false;
}

size_t bits_count_avx2(const uint64_t* a, size_t n) {
  size_t c0 = 0, c1 = 0, c2 = 0, c3 = 0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    c0 += static_cast<size_t>(std::popcount(a[i]));
    c1 += static_cast<size_t>(std::popcount(a[i + 1]));
    c2 += static_cast<size_t>(std::popcount(a[i + 2]));
    c3 += static_cast<size_t>(std::popcount(a[i + 3]));
  }
  for (; i < n; ++i) c0 += static_cast<size_t>(std::popcount(a[i]));
  return c0 + c1 + c2 + c3;
}

constexpr Table kAvx2 = {
    Isa::Avx2,       join_avx2,     meet_avx2,         leq_avx2,
    binop_avx2,      select_avx2,   reduce_join_avx2,  bits_and_avx2,
    bits_or_avx2,    bits_andnot_avx2, bits_subset_avx2, bits_intersect_avx2,
    bits_count_avx2,
};

} // namespace

namespace detail {
const Table* avx2_table() { return &kAvx2; }
} // namespace detail

} // namespace liftcal::kernels
