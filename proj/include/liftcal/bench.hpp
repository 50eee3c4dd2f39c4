#pragma once

#include <cstdint>

#include "liftcal/lang.hpp"

namespace liftcal {

inline constexpr size_t kMaxBenchFeatures = 20;

// N unconstrained features A1..AN and a straight-line body of N #if blocks,
// block i guarded by Ai. seed only permutes the block order.
Program bench_program(size_t n, uint64_t seed = 0);

struct BenchRow {
  size_t features = 0;
  size_t configs = 0;
  double lifted_ms = 0;
  double join_ms = 0;
  double half_ms = 0;  // proj(A1 & .. & A(N/2)) >> join

  double join_speedup() const { return lifted_ms / join_ms; }
  double half_speedup() const { return lifted_ms / half_ms; }
};

// Wall time per analysis run (best of several batches). Configuration
// enumeration and abstraction plans are built outside the timed region.
// Throws std::invalid_argument for n > kMaxBenchFeatures.
BenchRow run_bench(size_t n, uint64_t seed = 0);

} // namespace liftcal
