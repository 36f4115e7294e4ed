#pragma once

#include <vector>

#include "bcmsim/topology.hpp"

namespace bcmsim {

// Simple path: consecutive nodes adjacent, no repeats, at least one hop.
struct Path {
  std::vector<int> nodes;
  int hops() const { return static_cast<int>(nodes.size()) - 1; }
  friend bool operator==(const Path&, const Path&) = default;
};

// Candidate paths for one source-destination pair: every minimum-hop path
// plus the alternatives with exactly one extra hop, each class ordered
// lexicographically by node sequence and truncated to the per-class cap.
// Paths are addressed by a unified index, minimum-hop paths first.
struct CandidatePathSet {
  int src = 0;
  int dst = 0;
  std::vector<Path> min_paths;
  std::vector<Path> alt_paths;

  int size() const { return static_cast<int>(min_paths.size() + alt_paths.size()); }
  int min_count() const { return static_cast<int>(min_paths.size()); }
  bool is_min(int index) const { return index < min_count(); }
  const Path& path(int index) const {
    return index < min_count() ? min_paths[index] : alt_paths[index - min_count()];
  }
};

// Depth-bounded enumeration of all simple paths with at most one hop more
// than the minimum. Throws NoPathError when dst is unreachable or src == dst.
CandidatePathSet enumerate_candidates(const Topology& t, const HopMatrix& m, int src, int dst,
                                      int max_per_class = 8);

// Bounded FIFO of samples. The sum is taken oldest-to-newest so a freshly
// filled window reproduces plain sequential accumulation.
class SampleWindow {
 public:
  explicit SampleWindow(int capacity);

  void push(double value);
  int size() const { return size_; }
  int capacity() const { return static_cast<int>(buffer_.size()); }
  double operator[](int logical) const;  // 0 = oldest
  double sum() const;
  double mean() const;  // 0 when empty

 private:
  std::vector<double> buffer_;
  int head_ = 0;  // index of the oldest sample
  int size_ = 0;
};

// -- credit-based selection ---------------------------------------------------

struct CbrParams {
  double max_credits = 5.0;
  double phi = 1.0;          // alternative-path usage factor, <= 1
  int window = 20;           // accept/reject samples per path
  bool plain_increments = false;  // +/-1 updates instead of blocking-coupled
};

// Per-path credit state. Paths start with full credits so every candidate
// gets probed.
struct CbrState {
  double credits;
  SampleWindow window;

  explicit CbrState(const CbrParams& params)
      : credits(params.max_credits), window(params.window) {}

  // Fraction of rejects in the window; 0 while no samples exist.
  double blocking_prob() const;
};

// Highest-credit minimum-hop path unless the best alternative beats it under
// the phi test: the minimum-hop choice wins iff its credits >= phi * the
// alternative's. Ties inside a class break on lower blocking probability,
// then list order. Returns a unified path index.
int cbr_select(const std::vector<CbrState>& states, const CandidatePathSet& c, double phi);

// Pushes the accept/reject sample, then rewards or penalizes credits, scaled
// by the refreshed blocking probability and clamped to [0, max_credits].
void cbr_update(CbrState& state, bool accepted, const CbrParams& params);

// -- quality-based selection --------------------------------------------------

struct QbrParams {
  int window = 20;  // quality samples per path
};

struct QbrState {
  SampleWindow window;

  explicit QbrState(const QbrParams& params) : window(params.window) {}

  double average_quality() const { return window.mean(); }
};

// Maps one admission outcome to a quality sample in [-1, 1]:
//   accepted, bottleneck residual >= requested  ->  1
//   accepted, residual below requested          ->  residual / requested
//   rejected                                    -> -(requested - residual) / requested,
// floored at -1. residual_after is the bottleneck residual after reservation
// on accept, or the current bottleneck residual on reject.
double qbr_quality(bool accepted, double residual_after, double requested);

void qbr_update(QbrState& state, double quality);

// Path with the best average quality over the whole candidate set; ties
// prefer fewer hops, then list order. Returns a unified path index.
int qbr_select(const std::vector<QbrState>& states, const CandidatePathSet& c);

// -- proportional sticky selection ---------------------------------------------

struct PsrParams {
  int gamma_hat = 5;                // blocking allowance ceiling
  double psi = 0.9;                 // damping on alternative-path promotion
  int observation_period_cycles = 5;
};

struct PsrPathRecord {
  int gamma = 0;                 // blocks tolerated per cycle before ineligibility
  int blocked_this_cycle = 0;
  bool eligible = true;
  double alpha = 0.0;            // flow proportion; sums to 1 over the set
  long long observed_blocks = 0;
  long long observed_attempts = 0;
};

// Per source-destination pair state for proportional sticky routing. Flows
// are spread over eligible paths in proportion to alpha; a path blocking
// gamma times in a cycle sits out until the cycle resets; every
// observation_period_cycles cycles the proportions are recomputed from the
// observed blocking probabilities.
class PsrState {
 public:
  PsrState(int min_path_count, int total_path_count, const PsrParams& params);

  int path_count() const { return static_cast<int>(paths_.size()); }
  int min_path_count() const { return min_count_; }
  const PsrPathRecord& record(int index) const { return paths_[index]; }
  int cycles_completed() const { return cycles_completed_; }
  const PsrParams& params() const { return params_; }

  friend int psr_select(PsrState& state, double draw);
  friend void psr_update(PsrState& state, int path_index, bool accepted);

 private:
  void end_cycle();
  void end_period();

  std::vector<PsrPathRecord> paths_;
  int min_count_;
  PsrParams params_;
  int cycles_completed_ = 0;
};

// Samples an eligible path with probability proportional to alpha using the
// supplied uniform [0,1) draw. If every path is ineligible the cycle ends
// first: eligibility and per-cycle block counts reset, and after
// observation_period_cycles cycles the proportions are refreshed.
int psr_select(PsrState& state, double draw);

// Records the attempt. A rejection counts against the path's per-cycle
// allowance and marks it ineligible once gamma rejections accumulate.
void psr_update(PsrState& state, int path_index, bool accepted);

}  // namespace bcmsim
