#include <atomic>
#include <cstdlib>
#include <string_view>

#include "liftcal/errors.hpp"
#include "liftcal/kernels.hpp"

namespace liftcal::kernels {

#ifndef LIFTCAL_HAVE_AVX2
namespace detail {
const Table* avx2_table() { return nullptr; }
} // namespace detail
#endif

namespace {

bool cpu_has_avx2() {
#if defined(LIFTCAL_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table* pick_initial() {
  const Table* best = avx2() ? avx2() : &scalar();
  if (const char* env = std::getenv("LIFTCAL_ISA")) {
    std::string_view v(env);
    if (v == "scalar") return &scalar();
    if (v == "avx2" && avx2()) return avx2();
  }
  return best;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{pick_initial()};
  return t;
}

} // namespace

const Table* avx2() {
  static const Table* t = cpu_has_avx2() ? detail::avx2_table() : nullptr;
  return t;
}

bool supported(Isa isa) { return isa == Isa::Scalar || avx2() != nullptr; }

const char* isa_name(Isa isa) { return isa == Isa::Scalar ? "scalar" : "avx2"; }

const Table& active() { return *current().load(std::memory_order_relaxed); }

void use(Isa isa) {
  if (!supported(isa)) {
    throw SemanticError(std::string("instruction set not available: ") + isa_name(isa));
  }
  current().store(isa == Isa::Scalar ? &scalar() : avx2(), std::memory_order_relaxed);
}

void join(Lattice l, std::span<const int64_t> a, std::span<const int64_t> b,
          std::span<int64_t> out) {
  active().join(l, a.data(), b.data(), out.data(), out.size());
}

void meet(Lattice l, std::span<const int64_t> a, std::span<const int64_t> b,
          std::span<int64_t> out) {
  active().meet(l, a.data(), b.data(), out.data(), out.size());
}

bool leq(std::span<const int64_t> a, std::span<const int64_t> b) {
  return active().leq(a.data(), b.data(), a.size());
}

void binop(ArithOp op, std::span<const int64_t> a, std::span<const int64_t> b,
           std::span<int64_t> out) {
  active().binop(op, a.data(), b.data(), out.data(), out.size());
}

void select(std::span<const uint8_t> mask, std::span<const int64_t> a,
            std::span<const int64_t> b, std::span<int64_t> out) {
  active().select(mask.data(), a.data(), b.data(), out.data(), out.size());
}

int64_t reduce_join(Lattice l, std::span<const int64_t> a) {
  return active().reduce_join(l, a.data(), a.size());
}

} // namespace liftcal::kernels
