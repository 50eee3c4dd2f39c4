#pragma once

#include <memory>

#include "liftcal/abstraction.hpp"
#include "liftcal/lang.hpp"
#include "liftcal/lattice.hpp"

namespace liftcal {

// lub(s0, s1): analyzed as the join of both; printed as if (0) {..} else {..}.
StmtPtr make_lub(StmtPtr s0, StmtPtr s1);

struct Reconfigured {
  Program program;
  RenameTable renames;
  // Abstract configurations in abstraction order (not the rewritten model's
  // canonical order).
  std::shared_ptr<const AbstractedConfigs> configs;
};

// Rewrites every #if of p so that the lifted analysis of the result equals
// the abstracted analysis of p under alpha, up to component order. With
// simplify, guards that hold in every (or no) abstract config are dropped.
Reconfigured reconfigure(const Program& p, const Abstraction& alpha, bool simplify = false);

// The same components in target's order. Both sets must hold the same
// valuations of the same space.
LiftedStore reindex(const LiftedStore& d, std::shared_ptr<const ConfigSet> target);

} // namespace liftcal
