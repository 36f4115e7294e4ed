#include "bcmsim/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace bcmsim {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Cbr:
      return "CBR";
    case Algorithm::Qbr:
      return "QBR";
    case Algorithm::Psr:
      return "PSR";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  std::string upper;
  upper.reserve(name.size());
  for (char c : name) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (upper == "CBR") return Algorithm::Cbr;
  if (upper == "QBR") return Algorithm::Qbr;
  if (upper == "PSR") return Algorithm::Psr;
  return std::nullopt;
}

double holding_time_for_load(double target_rho, const TopologyStats& stats, const SimConfig& cfg) {
  if (!(target_rho > 0.0)) {
    throw InvalidParamsError("target load must be positive");
  }
  if (stats.link_count == 0 || !(stats.avg_path_length > 0.0)) {
    throw InvalidTopologyError("load formula undefined: no links or zero average path length");
  }
  const double mean_bw = (cfg.bw_min + cfg.bw_max) / 2.0;
  if (!(mean_bw > 0.0) || !(cfg.lambda_per_source > 0.0) || !(cfg.link_capacity > 0.0)) {
    throw InvalidParamsError("lambda, capacity and mean bandwidth must be positive");
  }
  return target_rho * stats.link_count * cfg.link_capacity /
         (cfg.lambda_per_source * stats.node_count * stats.avg_path_length * mean_bw);
}

double offered_load(double mean_holding_time, const TopologyStats& stats, const SimConfig& cfg) {
  if (!(mean_holding_time > 0.0)) {
    throw InvalidParamsError("mean holding time must be positive");
  }
  if (stats.link_count == 0 || !(stats.avg_path_length > 0.0)) {
    throw InvalidTopologyError("load formula undefined: no links or zero average path length");
  }
  const double mean_bw = (cfg.bw_min + cfg.bw_max) / 2.0;
  return cfg.lambda_per_source * stats.node_count * stats.avg_path_length * mean_bw *
         mean_holding_time / (stats.link_count * cfg.link_capacity);
}

int sample_destination(int src, int node_count, const TwoSubnetTraffic* two_subnet, double draw) {
  if (node_count < 2 || src < 0 || src >= node_count) {
    throw InvalidParamsError("sample_destination needs node_count >= 2 and src in range");
  }
  if (two_subnet == nullptr) {
    int idx = static_cast<int>(draw * (node_count - 1));
    idx = std::min(idx, node_count - 2);  // draw == 1 - ulp edge
    return idx < src ? idx : idx + 1;
  }

  if (static_cast<int>(two_subnet->labels.size()) < node_count) {
    throw InvalidParamsError("two_subnet labels shorter than node count");
  }
  if (!(two_subnet->intra_weight > 0.0)) {
    throw InvalidParamsError("intra_weight must be positive");
  }
  const int my_label = two_subnet->labels[src];
  double total = 0.0;
  for (int d = 0; d < node_count; ++d) {
    if (d == src) continue;
    total += two_subnet->labels[d] == my_label ? two_subnet->intra_weight : 1.0;
  }
  const double target = draw * total;
  double acc = 0.0;
  int last = -1;
  for (int d = 0; d < node_count; ++d) {
    if (d == src) continue;
    acc += two_subnet->labels[d] == my_label ? two_subnet->intra_weight : 1.0;
    last = d;
    if (target < acc) return d;
  }
  return last;
}

namespace {

enum Stream : std::uint64_t {
  kArrivalStream = 0,
  kDestinationStream = 1,
  kBandwidthStream = 2,
  kDurationStream = 3,
  kAlgorithmStream = 4,
};

void validate_config(const Topology& t, const SimConfig& cfg) {
  if (!(cfg.bw_min > 0.0) || cfg.bw_min > cfg.bw_max) {
    throw InvalidConfigError("need 0 < bw_min <= bw_max");
  }
  if (!(cfg.link_capacity > 0.0)) {
    throw InvalidConfigError("link capacity must be positive");
  }
  if (!(cfg.lambda_per_source > 0.0)) {
    throw InvalidConfigError("lambda must be positive");
  }
  const bool has_holding = cfg.mean_holding_time > 0.0;
  const bool has_load = cfg.target_load > 0.0;
  if (has_holding == has_load) {
    throw InvalidConfigError("set exactly one of mean_holding_time and target_load");
  }
  if (cfg.warmup_requests < 0 || cfg.total_requests < 1 ||
      cfg.warmup_requests >= cfg.total_requests) {
    throw InvalidConfigError("need 0 <= warmup_requests < total_requests");
  }
  if (cfg.max_paths_per_class < 1) {
    throw InvalidConfigError("max_paths_per_class must be >= 1");
  }
  if (!(cfg.cbr.phi <= 1.0)) {
    throw InvalidConfigError("cbr phi must be <= 1");
  }
  if (cfg.two_subnet) {
    if (static_cast<int>(cfg.two_subnet->labels.size()) != t.node_count()) {
      throw InvalidConfigError("two_subnet labels must cover every node");
    }
    for (int label : cfg.two_subnet->labels) {
      if (label != 0 && label != 1) {
        throw InvalidConfigError("two_subnet labels must be 0 or 1");
      }
    }
  }
  if (t.node_count() < 2) {
    throw InvalidConfigError("simulation needs at least two nodes");
  }
}

}  // namespace

FlowSimulator::FlowSimulator(const Topology& t, const SimConfig& cfg, bool track_active_flows)
    : cfg_(cfg),
      node_count_(t.node_count()),
      arrival_stream_(RandomStream::substream(cfg.seed, kArrivalStream)),
      dest_stream_(RandomStream::substream(cfg.seed, kDestinationStream)),
      bw_stream_(RandomStream::substream(cfg.seed, kBandwidthStream)),
      duration_stream_(RandomStream::substream(cfg.seed, kDurationStream)),
      algo_stream_(RandomStream::substream(cfg.seed, kAlgorithmStream)),
      track_active_(track_active_flows) {
  validate_config(t, cfg);
  if (!t.connected()) {
    throw DisconnectedTopologyError("simulation requires a connected topology");
  }

  const HopMatrix m = hop_matrix(t);
  const TopologyStats stats = topology_stats(t, m);
  holding_time_ = cfg.mean_holding_time > 0.0 ? cfg.mean_holding_time
                                              : holding_time_for_load(cfg.target_load, stats, cfg);

  // Link ids follow the sorted edge list.
  reserved_.assign(t.link_count(), 0.0);
  std::vector<int> link_id(static_cast<std::size_t>(node_count_) * node_count_, -1);
  for (int i = 0; i < t.link_count(); ++i) {
    const Edge& e = t.edges()[i];
    link_id[static_cast<std::size_t>(e.u) * node_count_ + e.v] = i;
    link_id[static_cast<std::size_t>(e.v) * node_count_ + e.u] = i;
  }

  // Candidate sets are fixed for the whole run and shared by every arrival.
  pairs_.resize(static_cast<std::size_t>(node_count_) * node_count_);
  for (int s = 0; s < node_count_; ++s) {
    for (int d = 0; d < node_count_; ++d) {
      if (s == d) continue;
      PairRouting& pair = pairs_[static_cast<std::size_t>(s) * node_count_ + d];
      pair.candidates = enumerate_candidates(t, m, s, d, cfg.max_paths_per_class);
      pair.path_links.resize(pair.candidates.size());
      for (int p = 0; p < pair.candidates.size(); ++p) {
        const Path& path = pair.candidates.path(p);
        auto& links = pair.path_links[p];
        links.reserve(path.nodes.size() - 1);
        for (std::size_t h = 0; h + 1 < path.nodes.size(); ++h) {
          links.push_back(link_id[static_cast<std::size_t>(path.nodes[h]) * node_count_ +
                                  path.nodes[h + 1]]);
        }
      }
      switch (cfg.algorithm) {
        case Algorithm::Cbr:
          pair.cbr.assign(pair.candidates.size(), CbrState(cfg.cbr));
          break;
        case Algorithm::Qbr:
          pair.qbr.assign(pair.candidates.size(), QbrState(cfg.qbr));
          break;
        case Algorithm::Psr:
          pair.psr.emplace(pair.candidates.min_count(), pair.candidates.size(), cfg.psr);
          break;
      }
    }
  }

  schedule_arrival();
}

void FlowSimulator::schedule_arrival() {
  // Superposed per-source Poisson processes: aggregate rate N * lambda.
  const double gap =
      arrival_stream_.exponential(1.0 / (node_count_ * cfg_.lambda_per_source));
  queue_.push(Event{now_ + gap, next_seq_++, -1, -1, 0.0});
}

int FlowSimulator::select_path(PairRouting& pair) {
  switch (cfg_.algorithm) {
    case Algorithm::Cbr:
      return cbr_select(pair.cbr, pair.candidates, cfg_.cbr.phi);
    case Algorithm::Qbr:
      return qbr_select(pair.qbr, pair.candidates);
    case Algorithm::Psr:
      return psr_select(*pair.psr, algo_stream_.uniform01());
  }
  return 0;
}

void FlowSimulator::update_state(PairRouting& pair, int path_index, bool accepted,
                                 double residual_after, double requested) {
  switch (cfg_.algorithm) {
    case Algorithm::Cbr:
      cbr_update(pair.cbr[path_index], accepted, cfg_.cbr);
      break;
    case Algorithm::Qbr:
      qbr_update(pair.qbr[path_index], qbr_quality(accepted, residual_after, requested));
      break;
    case Algorithm::Psr:
      psr_update(*pair.psr, path_index, accepted);
      break;
  }
}

void FlowSimulator::process_arrival() {
  ++arrivals_;
  if (arrivals_ < cfg_.total_requests) schedule_arrival();

  const int src = arrival_stream_.uniform_int(node_count_);
  const int dst = sample_destination(src, node_count_,
                                     cfg_.two_subnet ? &*cfg_.two_subnet : nullptr,
                                     dest_stream_.uniform01());
  const double bw = bw_stream_.uniform(cfg_.bw_min, cfg_.bw_max);
  const double duration = duration_stream_.exponential(holding_time_);

  const int pair_index = src * node_count_ + dst;
  PairRouting& pair = pairs_[pair_index];
  const int path_index = select_path(pair);

  double min_residual = std::numeric_limits<double>::infinity();
  for (int link : pair.path_links[path_index]) {
    min_residual = std::min(min_residual, cfg_.link_capacity - reserved_[link]);
  }
  const bool accepted = min_residual >= bw;

  if (accepted) {
    for (int link : pair.path_links[path_index]) reserved_[link] += bw;
    const std::uint64_t seq = next_seq_++;
    queue_.push(Event{now_ + duration, seq, pair_index, path_index, bw});
    if (track_active_) active_.push_back(ActiveFlow{seq, pair_index, path_index, bw});
  }
  update_state(pair, path_index, accepted, accepted ? min_residual - bw : min_residual, bw);

  if (arrivals_ > cfg_.warmup_requests) {
    ++metrics_.requests;
    metrics_.bw_requested_total += bw;
    if (accepted) {
      ++metrics_.accepted;
    } else {
      ++metrics_.rejected;
      metrics_.bw_blocked_total += bw;
    }
  }
}

void FlowSimulator::process_departure(const Event& ev) {
  for (int link : pairs_[ev.pair_index].path_links[ev.path_index]) {
    reserved_[link] -= ev.bandwidth;
  }
  if (track_active_) {
    for (std::size_t i = 0; i < active_.size(); ++i) {
      if (active_[i].seq == ev.seq) {
        active_[i] = active_.back();
        active_.pop_back();
        break;
      }
    }
  }
}

bool FlowSimulator::step() {
  if (queue_.empty()) return false;
  const Event ev = queue_.top();
  queue_.pop();
  now_ = ev.time;
  if (ev.pair_index < 0) {
    process_arrival();
  } else {
    process_departure(ev);
  }
  return true;
}

RunMetrics FlowSimulator::run() {
  while (step()) {
  }
  metrics_.flow_bp =
      metrics_.requests > 0 ? static_cast<double>(metrics_.rejected) / metrics_.requests : 0.0;
  metrics_.bw_bp = metrics_.bw_requested_total > 0.0
                       ? metrics_.bw_blocked_total / metrics_.bw_requested_total
                       : 0.0;
  return metrics_;
}

double FlowSimulator::max_conservation_error() const {
  std::vector<double> expected(reserved_.size(), 0.0);
  for (const ActiveFlow& flow : active_) {
    for (int link : pairs_[flow.pair_index].path_links[flow.path_index]) {
      expected[link] += flow.bandwidth;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < reserved_.size(); ++i) {
    worst = std::max(worst, std::abs(expected[i] - reserved_[i]));
  }
  return worst;
}

RunMetrics run_simulation(const Topology& t, const SimConfig& cfg) {
  return FlowSimulator(t, cfg).run();
}

namespace {

// Two-sided 97.5% Student-t quantiles for df 1..30; 1.96 beyond.
double t_quantile_975(int df) {
  static constexpr double kTable[30] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df <= 30) return kTable[df - 1];
  return 1.960;
}

}  // namespace

Aggregate aggregate_metric(const std::vector<double>& values) {
  if (values.empty()) {
    throw InvalidParamsError("cannot aggregate zero values");
  }
  Aggregate agg;
  agg.n = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean = sum / agg.n;
  if (agg.n == 1) {
    agg.ci95_low = agg.ci95_high = agg.mean;
    return agg;
  }
  double sq = 0.0;
  for (double v : values) sq += (v - agg.mean) * (v - agg.mean);
  const double stddev = std::sqrt(sq / (agg.n - 1));
  const double half_width = t_quantile_975(agg.n - 1) * stddev / std::sqrt(agg.n);
  agg.ci95_low = agg.mean - half_width;
  agg.ci95_high = agg.mean + half_width;
  return agg;
}

ReplicationResult replicate(const Topology& t, const SimConfig& cfg,
                            const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) {
    throw InvalidParamsError("replicate needs at least one seed");
  }
  ReplicationResult result;
  result.seeds = seeds;
  result.runs.reserve(seeds.size());
  std::vector<double> flow_bps, bw_bps;
  for (std::uint64_t seed : seeds) {
    SimConfig run_cfg = cfg;
    run_cfg.seed = seed;
    result.runs.push_back(run_simulation(t, run_cfg));
    flow_bps.push_back(result.runs.back().flow_bp);
    bw_bps.push_back(result.runs.back().bw_bp);
  }
  result.flow_bp = aggregate_metric(flow_bps);
  result.bw_bp = aggregate_metric(bw_bps);
  return result;
}

}  // namespace bcmsim
