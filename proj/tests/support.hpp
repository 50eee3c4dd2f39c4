#pragma once

#include <memory>
#include <string>
#include <vector>

#include "liftcal/abstraction.hpp"
#include "liftcal/lang.hpp"
#include "liftcal/lattice.hpp"

namespace liftcal::test {

inline constexpr const char* kS1 =
    "features A, B; model A | B; begin x := 0; #if (A) { x := x + 1 }; #if (B) { x := 1 } end";
inline constexpr const char* kS2 =
    "features A, B; model A | B; begin x := 0; #if (A) { x := x + 1 }; #if (B) { x := x - 1 } end";
inline constexpr const char* kS1Prime =
    "features A, B; model A | B; begin #if (A) { x := x + 1 }; #if (B) { x := 1 } end";

struct Fixture {
  Program program;
  std::shared_ptr<const ConfigSet> K;
  std::vector<std::string> vars;

  explicit Fixture(std::string_view src)
      : program(parse_program(src)),
        K(std::make_shared<const ConfigSet>(valid_configs(program.model))),
        vars(program_vars(program)) {}

  LiftedStore top(Lattice l = Lattice::Const) const { return LiftedStore::top(l, K, vars); }
  LiftedStore top_over(std::shared_ptr<const ConfigSet> c, Lattice l = Lattice::Const) const {
    return LiftedStore::top(l, std::move(c), vars);
  }
};

// Rendered values of one variable, component by component.
inline std::vector<std::string> column_of(const LiftedStore& d, std::string_view var) {
  std::vector<std::string> out;
  auto v = d.var_index(var);
  for (size_t k = 0; k < d.size(); ++k) out.push_back(v ? render_value(d.at(k, *v)) : "top");
  return out;
}

inline std::vector<std::string> formulas_of(const ConfigSet& K) {
  std::vector<std::string> out;
  for (size_t j = 0; j < K.size(); ++j) out.push_back(K.formula(j).render());
  return out;
}

inline LiftedStore store_x(Lattice l, std::shared_ptr<const ConfigSet> K,
                           std::vector<Value> xs) {
  LiftedStore s = LiftedStore::top(l, std::move(K), {"x"});
  for (size_t k = 0; k < xs.size(); ++k) s.set(k, "x", xs[k]);
  return s;
}

} // namespace liftcal::test
