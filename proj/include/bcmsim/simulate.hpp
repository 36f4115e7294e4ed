#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "bcmsim/rng.hpp"
#include "bcmsim/routing.hpp"
#include "bcmsim/topology.hpp"

namespace bcmsim {

enum class Algorithm { Cbr, Qbr, Psr };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

// Two-class destination skew: destinations sharing the source's label are
// intra_weight times as likely as the rest.
struct TwoSubnetTraffic {
  std::vector<int> labels;   // 0/1 per node
  double intra_weight = 3.0;
};

struct SimConfig {
  double lambda_per_source = 1.0;  // Poisson flow arrival rate per node
  double mean_holding_time = 0.0;  // exactly one of this pair must be > 0
  double target_load = 0.0;        // offered load rho; converted via the load formula
  double bw_min = 0.1;             // requested bandwidth ~ Uniform[bw_min, bw_max]
  double bw_max = 2.0;
  double link_capacity = 150.0;
  long long warmup_requests = 20000;   // arrivals ignored by the metrics
  long long total_requests = 220000;   // run length in arrivals
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::Cbr;
  CbrParams cbr;
  QbrParams qbr;
  PsrParams psr;
  int max_paths_per_class = 8;
  std::optional<TwoSubnetTraffic> two_subnet;  // empty = uniform destinations
};

// Post-warmup admission counters. flow_bp = rejected / requests,
// bw_bp = rejected bandwidth / requested bandwidth.
struct RunMetrics {
  long long requests = 0;
  long long accepted = 0;
  long long rejected = 0;
  double bw_requested_total = 0.0;
  double bw_blocked_total = 0.0;
  double flow_bp = 0.0;
  double bw_bp = 0.0;
};

// Mean holding time 1/mu that produces the given offered load:
// rho = lambda * N * hbar * b / (mu * L * C) with b the mean requested
// bandwidth, so 1/mu = rho * L * C / (lambda * N * hbar * b).
double holding_time_for_load(double target_rho, const TopologyStats& stats, const SimConfig& cfg);

// Inverse of holding_time_for_load: the offered load at a holding time.
double offered_load(double mean_holding_time, const TopologyStats& stats, const SimConfig& cfg);

// Destination for a flow from src given one uniform [0,1) draw. Uniform over
// the other nodes, or weighted per TwoSubnetTraffic when given.
int sample_destination(int src, int node_count, const TwoSubnetTraffic* two_subnet, double draw);

// Flow-level discrete-event loop: Poisson arrivals per source, exponential
// holding times, uniform bandwidth demands. Each arrival gets exactly one
// candidate path from the configured algorithm and is admitted iff every
// link on it has residual capacity for the demand; admitted flows reserve on
// all links and release on departure. Deterministic given (topology, config,
// seed): traffic is drawn from independent per-purpose substreams so the
// algorithm choice never perturbs the offered traffic.
class FlowSimulator {
 public:
  // track_active_flows keeps a per-flow ledger so tests can audit link
  // reservations; leave off for production runs.
  FlowSimulator(const Topology& t, const SimConfig& cfg, bool track_active_flows = false);

  // Processes one event. Returns false once the event queue is exhausted.
  bool step();

  // Runs to completion (all arrivals processed, reservations drained) and
  // returns the finalized metrics.
  RunMetrics run();

  long long arrivals_seen() const { return arrivals_; }
  int link_count() const { return static_cast<int>(reserved_.size()); }
  double reserved(int link_index) const { return reserved_[link_index]; }
  const RunMetrics& metrics() const { return metrics_; }

  // Largest |reserved - sum of active flow bandwidths| over links. Requires
  // track_active_flows.
  double max_conservation_error() const;

 private:
  struct Event {
    double time;
    std::uint64_t seq;
    int pair_index;  // -1 for arrivals
    int path_index;
    double bandwidth;
  };
  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  struct PairRouting {
    CandidatePathSet candidates;
    std::vector<std::vector<int>> path_links;  // unified path index -> link ids
    std::vector<CbrState> cbr;
    std::vector<QbrState> qbr;
    std::optional<PsrState> psr;
  };
  struct ActiveFlow {
    std::uint64_t seq;
    int pair_index;
    int path_index;
    double bandwidth;
  };

  void schedule_arrival();
  void process_arrival();
  void process_departure(const Event& ev);
  int select_path(PairRouting& pair);
  void update_state(PairRouting& pair, int path_index, bool accepted, double residual_after,
                    double requested);

  const SimConfig cfg_;
  int node_count_;
  double holding_time_;
  std::vector<PairRouting> pairs_;       // index src * N + dst
  std::vector<double> reserved_;         // per link
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  RandomStream arrival_stream_;
  RandomStream dest_stream_;
  RandomStream bw_stream_;
  RandomStream duration_stream_;
  RandomStream algo_stream_;
  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  long long arrivals_ = 0;
  RunMetrics metrics_;
  bool track_active_;
  std::vector<ActiveFlow> active_;
};

RunMetrics run_simulation(const Topology& t, const SimConfig& cfg);

// Mean with a Student-t 95% confidence interval; a single sample gives a
// degenerate interval at the point value.
struct Aggregate {
  double mean = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  int n = 0;
};

Aggregate aggregate_metric(const std::vector<double>& values);

struct ReplicationResult {
  std::vector<std::uint64_t> seeds;
  std::vector<RunMetrics> runs;
  Aggregate flow_bp;
  Aggregate bw_bp;
};

// Runs the same configuration once per seed and aggregates both blocking
// metrics.
ReplicationResult replicate(const Topology& t, const SimConfig& cfg,
                            const std::vector<std::uint64_t>& seeds);

}  // namespace bcmsim
