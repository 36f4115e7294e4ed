#include "bcmsim/routing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bcmsim {

namespace {

struct PathSearch {
  const Topology& t;
  const HopMatrix& m;
  int dst;
  int min_hops;
  int max_per_class;
  std::vector<int> current;
  std::vector<char> on_path;
  std::vector<Path>* min_paths;
  std::vector<Path>* alt_paths;

  bool full() const {
    return static_cast<int>(min_paths->size()) >= max_per_class &&
           static_cast<int>(alt_paths->size()) >= max_per_class;
  }

  // Neighbors are explored in ascending order, so paths are produced in
  // lexicographic order of their node sequences.
  void extend(int node) {
    if (node == dst) {
      const int hops = static_cast<int>(current.size()) - 1;
      std::vector<Path>* bucket = hops == min_hops ? min_paths : alt_paths;
      if (static_cast<int>(bucket->size()) < max_per_class) {
        bucket->push_back(Path{current});
      }
      return;
    }
    const int hops_so_far = static_cast<int>(current.size()) - 1;
    for (int nb : t.neighbors(node)) {
      if (full()) return;
      if (on_path[nb]) continue;
      const int rest = m.at(nb, dst);
      if (rest == HopMatrix::kUnreachable) continue;
      if (hops_so_far + 1 + rest > min_hops + 1) continue;
      current.push_back(nb);
      on_path[nb] = 1;
      extend(nb);
      on_path[nb] = 0;
      current.pop_back();
    }
  }
};

}  // namespace

CandidatePathSet enumerate_candidates(const Topology& t, const HopMatrix& m, int src, int dst,
                                      int max_per_class) {
  if (src < 0 || dst < 0 || src >= t.node_count() || dst >= t.node_count()) {
    throw InvalidParamsError("path endpoints out of range");
  }
  if (max_per_class < 1) {
    throw InvalidParamsError("max_per_class must be >= 1");
  }
  if (src == dst) {
    throw NoPathError("no path from a node to itself (" + std::to_string(src) + ")");
  }
  const int min_hops = m.at(src, dst);
  if (min_hops == HopMatrix::kUnreachable) {
    throw NoPathError("nodes " + std::to_string(src) + " and " + std::to_string(dst) +
                      " are not connected");
  }

  CandidatePathSet set;
  set.src = src;
  set.dst = dst;
  PathSearch search{t,  m, dst, min_hops, max_per_class, {src}, std::vector<char>(t.node_count(), 0),
                    &set.min_paths, &set.alt_paths};
  search.on_path[src] = 1;
  search.extend(src);
  return set;
}

SampleWindow::SampleWindow(int capacity) {
  if (capacity < 1) {
    throw InvalidParamsError("window capacity must be >= 1");
  }
  buffer_.resize(capacity);
}

void SampleWindow::push(double value) {
  const int cap = capacity();
  if (size_ < cap) {
    buffer_[(head_ + size_) % cap] = value;
    ++size_;
  } else {
    buffer_[head_] = value;  // overwrite the oldest
    head_ = (head_ + 1) % cap;
  }
}

double SampleWindow::operator[](int logical) const {
  return buffer_[(head_ + logical) % capacity()];
}

double SampleWindow::sum() const {
  double total = 0.0;
  for (int i = 0; i < size_; ++i) total += (*this)[i];
  return total;
}

double SampleWindow::mean() const { return size_ == 0 ? 0.0 : sum() / size_; }

double CbrState::blocking_prob() const {
  if (window.size() == 0) return 0.0;
  int rejects = 0;
  for (int i = 0; i < window.size(); ++i) {
    if (window[i] == 0.0) ++rejects;
  }
  return static_cast<double>(rejects) / window.size();
}

namespace {

// Index of the highest-credit path within [begin, end); credit ties prefer
// the lower blocking probability, then the earlier list position.
int best_by_credits(const std::vector<CbrState>& states, int begin, int end) {
  int best = begin;
  for (int i = begin + 1; i < end; ++i) {
    if (states[i].credits > states[best].credits ||
        (states[i].credits == states[best].credits &&
         states[i].blocking_prob() < states[best].blocking_prob())) {
      best = i;
    }
  }
  return best;
}

}  // namespace

int cbr_select(const std::vector<CbrState>& states, const CandidatePathSet& c, double phi) {
  if (c.size() == 0 || c.min_count() == 0) {
    throw NoPathError("empty candidate set for (" + std::to_string(c.src) + "," +
                      std::to_string(c.dst) + ")");
  }
  const int best_min = best_by_credits(states, 0, c.min_count());
  if (c.min_count() == c.size()) return best_min;
  const int best_alt = best_by_credits(states, c.min_count(), c.size());
  return states[best_min].credits >= phi * states[best_alt].credits ? best_min : best_alt;
}

void cbr_update(CbrState& state, bool accepted, const CbrParams& params) {
  state.window.push(accepted ? 1.0 : 0.0);
  if (params.plain_increments) {
    state.credits += accepted ? 1.0 : -1.0;
  } else {
    // Blocking-coupled updates: a path that blocks often earns less and
    // loses more.
    const double bp = state.blocking_prob();
    state.credits += accepted ? (1.0 - bp) : -(1.0 + bp);
  }
  state.credits = std::clamp(state.credits, 0.0, params.max_credits);
}

double qbr_quality(bool accepted, double residual_after, double requested) {
  if (!(requested > 0.0)) {
    throw InvalidRequestError("requested bandwidth must be positive");
  }
  if (accepted) {
    if (residual_after >= requested) return 1.0;
    return std::clamp(residual_after / requested, 0.0, 1.0);
  }
  return -std::clamp((requested - residual_after) / requested, 0.0, 1.0);
}

void qbr_update(QbrState& state, double quality) {
  if (!(quality >= -1.0 && quality <= 1.0)) {
    throw InvalidQualityError("quality " + std::to_string(quality) + " outside [-1, 1]");
  }
  state.window.push(quality);
}

int qbr_select(const std::vector<QbrState>& states, const CandidatePathSet& c) {
  if (c.size() == 0) {
    throw NoPathError("empty candidate set for (" + std::to_string(c.src) + "," +
                      std::to_string(c.dst) + ")");
  }
  // Minimum-hop paths come first, so a strict comparison also settles the
  // fewer-hops and list-order tie rules.
  int best = 0;
  for (int i = 1; i < c.size(); ++i) {
    if (states[i].average_quality() > states[best].average_quality()) best = i;
  }
  return best;
}

PsrState::PsrState(int min_path_count, int total_path_count, const PsrParams& params)
    : min_count_(min_path_count), params_(params) {
  if (min_path_count < 1 || total_path_count < min_path_count) {
    throw InvalidParamsError("need at least one minimum-hop path");
  }
  if (params.gamma_hat < 1 || !(params.psi > 0.0 && params.psi <= 1.0) ||
      params.observation_period_cycles < 1) {
    throw InvalidParamsError("psr parameters out of range");
  }
  paths_.resize(total_path_count);
  for (auto& rec : paths_) {
    rec.gamma = params.gamma_hat;
    rec.alpha = 1.0 / total_path_count;
  }
}

void PsrState::end_cycle() {
  ++cycles_completed_;
  for (auto& rec : paths_) {
    rec.eligible = true;
    rec.blocked_this_cycle = 0;
  }
  if (cycles_completed_ >= params_.observation_period_cycles) end_period();
}

void PsrState::end_period() {
  cycles_completed_ = 0;
  long long total_attempts = 0;
  for (const auto& rec : paths_) total_attempts += rec.observed_attempts;
  if (total_attempts == 0) return;  // nothing observed, keep proportions

  const double eps = 1.0 / (2.0 * static_cast<double>(total_attempts));
  std::vector<double> blocking(paths_.size(), 0.0);
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (paths_[i].observed_attempts > 0) {
      blocking[i] = static_cast<double>(paths_[i].observed_blocks) /
                    static_cast<double>(paths_[i].observed_attempts);
    }
  }

  // Minimum-hop proportions equalize toward equal blocking: reweight by the
  // inverse observed blocking probability, preserving the class's total mass.
  double min_mass = 0.0;
  double weight_sum = 0.0;
  for (int i = 0; i < min_count_; ++i) {
    min_mass += paths_[i].alpha;
    weight_sum += paths_[i].alpha / std::max(blocking[i], eps);
  }
  if (weight_sum > 0.0) {
    for (int i = 0; i < min_count_; ++i) {
      paths_[i].alpha = (paths_[i].alpha / std::max(blocking[i], eps)) * min_mass / weight_sum;
    }
  }

  // Alternative paths gain or lose blocking allowance relative to the best
  // minimum-hop path.
  double best_min_blocking = blocking.empty() ? 0.0 : blocking[0];
  for (int i = 1; i < min_count_; ++i) best_min_blocking = std::min(best_min_blocking, blocking[i]);
  for (int i = min_count_; i < static_cast<int>(paths_.size()); ++i) {
    if (blocking[i] < params_.psi * best_min_blocking) {
      paths_[i].gamma = std::min(paths_[i].gamma + 1, params_.gamma_hat);
    } else if (blocking[i] > best_min_blocking) {
      paths_[i].gamma = std::max(paths_[i].gamma - 1, 1);
    }
  }

  for (auto& rec : paths_) {
    rec.observed_blocks = 0;
    rec.observed_attempts = 0;
  }
}

int psr_select(PsrState& state, double draw) {
  bool any_eligible = false;
  for (const auto& rec : state.paths_) {
    if (rec.eligible) {
      any_eligible = true;
      break;
    }
  }
  if (!any_eligible) state.end_cycle();

  double total = 0.0;
  for (const auto& rec : state.paths_) {
    if (rec.eligible) total += rec.alpha;
  }
  int last_eligible = -1;
  if (total > 0.0) {
    const double target = draw * total;
    double acc = 0.0;
    for (int i = 0; i < state.path_count(); ++i) {
      if (!state.paths_[i].eligible) continue;
      acc += state.paths_[i].alpha;
      last_eligible = i;
      if (target < acc) return i;
    }
    return last_eligible;  // rounding fell past the final bucket
  }
  for (int i = 0; i < state.path_count(); ++i) {
    if (state.paths_[i].eligible) return i;
  }
  return 0;  // unreachable: end_cycle restored eligibility
}

void psr_update(PsrState& state, int path_index, bool accepted) {
  if (path_index < 0 || path_index >= state.path_count()) {
    throw InvalidPathError("path index " + std::to_string(path_index) +
                           " outside candidate set of " + std::to_string(state.path_count()));
  }
  PsrPathRecord& rec = state.paths_[path_index];
  ++rec.observed_attempts;
  if (!accepted) {
    ++rec.observed_blocks;
    ++rec.blocked_this_cycle;
    if (rec.blocked_this_cycle >= rec.gamma) rec.eligible = false;
  }
}

}  // namespace bcmsim
