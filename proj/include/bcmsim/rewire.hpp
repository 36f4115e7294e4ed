#pragma once

#include <vector>

#include "bcmsim/topology.hpp"

namespace bcmsim {

// One accepted rewiring move. The removed link existed before the step, the
// added link did not, and the metric strictly decreased.
struct RewireStep {
  Edge removed;
  Edge added;
  double bcm_before = 0.0;
  double bcm_after = 0.0;
};

struct RewireConfig {
  int max_steps = 0;           // 0 means no steps are taken
  double target_bcm = 0.0;     // stop once BCM <= target
  int candidate_budget = 0;    // (removal, addition) pairs tried per step; 0 = unlimited
};

// The existing link whose endpoint row-sum total is smallest, skipping
// bridges so removal never disconnects the graph. Ties break on the smaller
// endpoint pair. Throws NoRemovableEdgeError when every link is a bridge.
Edge select_removal(const Topology& t, const HopMatrix& m);

// The non-adjacent node pair whose endpoint row-sum total is largest; ties
// prefer the pair that is currently farther apart, then the smaller endpoint
// pair. Throws NoAddableEdgeError on a complete graph.
Edge select_addition(const Topology& t, const HopMatrix& m);

struct RewireOutcome {
  Topology topology;
  RewireStep step;
};

// Applies the highest-ranked (removal, addition) move that strictly lowers
// the BCM, examining candidate pairs in removal-major rank order and rolling
// back moves that do not improve. Node count, link count and connectivity are
// preserved. Throws LocalMinimumError when no candidate within the budget
// improves.
RewireOutcome rewire_step(const Topology& t, int candidate_budget = 0);

struct RewireResult {
  Topology topology;
  std::vector<RewireStep> trace;
};

// Iterates rewire_step until BCM <= target_bcm, a local minimum, or
// max_steps. The BCM sequence along the trace is strictly decreasing, and
// replaying the trace on the input reproduces the returned topology.
RewireResult rewire_until(const Topology& t, const RewireConfig& cfg);

}  // namespace bcmsim
