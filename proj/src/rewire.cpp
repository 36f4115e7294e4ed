#include "bcmsim/rewire.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

namespace bcmsim {

namespace {

// Guard against float noise when demanding a strict decrease.
constexpr double kImprovementEps = 1e-12;

std::vector<Edge> removal_candidates(const Topology& t, const HopMatrix& m) {
  std::vector<Edge> out;
  for (const Edge& e : t.edges()) {
    if (t.without_edge(e).connected()) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [&](const Edge& a, const Edge& b) {
    const long long sa = m.row_sums[a.u] + m.row_sums[a.v];
    const long long sb = m.row_sums[b.u] + m.row_sums[b.v];
    return std::tie(sa, a.u, a.v) < std::tie(sb, b.u, b.v);
  });
  return out;
}

std::vector<Edge> addition_candidates(const Topology& t, const HopMatrix& m) {
  std::vector<Edge> out;
  for (int u = 0; u < t.node_count(); ++u) {
    for (int v = u + 1; v < t.node_count(); ++v) {
      if (!t.has_edge(u, v)) out.push_back(Edge{u, v});
    }
  }
  std::sort(out.begin(), out.end(), [&](const Edge& a, const Edge& b) {
    const long long sa = m.row_sums[a.u] + m.row_sums[a.v];
    const long long sb = m.row_sums[b.u] + m.row_sums[b.v];
    if (sa != sb) return sa > sb;
    const int da = m.at(a.u, a.v);
    const int db = m.at(b.u, b.v);
    if (da != db) return da > db;
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return out;
}

}  // namespace

Edge select_removal(const Topology& t, const HopMatrix& m) {
  std::vector<Edge> candidates = removal_candidates(t, m);
  if (candidates.empty()) {
    throw NoRemovableEdgeError("every link is a bridge; nothing can be removed");
  }
  return candidates.front();
}

Edge select_addition(const Topology& t, const HopMatrix& m) {
  std::vector<Edge> candidates = addition_candidates(t, m);
  if (candidates.empty()) {
    throw NoAddableEdgeError("graph is complete; nothing can be added");
  }
  return candidates.front();
}

RewireOutcome rewire_step(const Topology& t, int candidate_budget) {
  const HopMatrix m = hop_matrix(t);
  const double before = bcm(m);

  const std::vector<Edge> removals = removal_candidates(t, m);
  if (removals.empty()) {
    throw NoRemovableEdgeError("every link is a bridge; nothing can be removed");
  }
  const std::vector<Edge> additions = addition_candidates(t, m);
  if (additions.empty()) {
    throw NoAddableEdgeError("graph is complete; nothing can be added");
  }

  double best_seen = std::numeric_limits<double>::infinity();
  int tried = 0;
  for (const Edge& removed : removals) {
    // Removal candidates already preserve connectivity, and adding a link
    // cannot disconnect, so each trial graph is connected.
    const Topology base = t.without_edge(removed);
    for (const Edge& added : additions) {
      if (candidate_budget > 0 && tried >= candidate_budget) {
        throw LocalMinimumError("no improving rewiring within candidate budget " +
                                    std::to_string(candidate_budget) + "; best candidate BCM " +
                                    std::to_string(best_seen) + " vs current " +
                                    std::to_string(before),
                                best_seen);
      }
      ++tried;
      const Topology trial = base.with_edge(added);
      const double after = bcm(hop_matrix(trial));
      best_seen = std::min(best_seen, after);
      if (after < before - kImprovementEps) {
        return RewireOutcome{trial, RewireStep{removed, added, before, after}};
      }
    }
  }
  throw LocalMinimumError("no rewiring strictly improves BCM " + std::to_string(before) +
                              "; best candidate " + std::to_string(best_seen),
                          best_seen);
}

RewireResult rewire_until(const Topology& t, const RewireConfig& cfg) {
  if (cfg.max_steps < 0 || cfg.target_bcm < 0.0 || cfg.candidate_budget < 0) {
    throw InvalidParamsError("rewire config fields must be nonnegative");
  }
  RewireResult result{t, {}};
  if (cfg.max_steps == 0) return result;

  double current = bcm(hop_matrix(result.topology));
  while (static_cast<int>(result.trace.size()) < cfg.max_steps && current > cfg.target_bcm) {
    try {
      RewireOutcome out = rewire_step(result.topology, cfg.candidate_budget);
      current = out.step.bcm_after;
      result.topology = std::move(out.topology);
      result.trace.push_back(out.step);
    } catch (const LocalMinimumError&) {
      break;
    }
  }
  return result;
}

}  // namespace bcmsim
