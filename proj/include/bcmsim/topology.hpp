#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "bcmsim/errors.hpp"

namespace bcmsim {

// Undirected link between two distinct nodes, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Normalizes endpoint order; rejects self-loops and negative indices.
Edge make_edge(int a, int b);

// Simple undirected graph: no self-loops, no parallel edges. Immutable after
// construction; modified copies are produced by with_edge/without_edge.
class Topology {
 public:
  Topology(int node_count, const std::vector<Edge>& edges);

  int node_count() const { return n_; }
  int link_count() const { return static_cast<int>(edges_.size()); }

  // Sorted lexicographically, each normalized u < v.
  const std::vector<Edge>& edges() const { return edges_; }

  // Ascending neighbor list.
  const std::vector<int>& neighbors(int node) const { return adj_[node]; }
  int degree(int node) const { return static_cast<int>(adj_[node].size()); }

  bool has_edge(int a, int b) const;
  bool connected() const;

  Topology with_edge(Edge e) const;     // throws DuplicateEdgeError if present
  Topology without_edge(Edge e) const;  // throws InvalidEdgeError if absent

  // Flattened n*n 0/1 adjacency matrix, symmetric with zero diagonal.
  std::vector<std::uint8_t> adjacency_matrix() const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// All-pairs minimum hop counts. Unreachable pairs hold kUnreachable and clear
// the reachable flag; row_sums cover the finite entries of each row.
struct HopMatrix {
  static constexpr int kUnreachable = -1;

  int n = 0;
  std::vector<int> dist;               // row-major n*n
  std::vector<long long> row_sums;     // per-node sum of hop counts
  bool reachable = false;

  int at(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
};

struct TopologyStats {
  int node_count = 0;
  int link_count = 0;
  double bcm = 0.0;
  double avg_path_length = 0.0;        // total_distance / (N (N-1))
  long long total_distance = 0;        // sum of all off-diagonal hop counts
  int diameter = 0;
  double avg_degree_undirected = 0.0;  // 2 L / N
  double links_per_node = 0.0;         // L / N
  double clustering_coefficient = 0.0;
  double mean_row_sum = 0.0;
};

// Breadth-first hop distances from every node.
HopMatrix hop_matrix(const Topology& t);

// Balance clustering metric: sample standard deviation of the hop-matrix row
// sums, sqrt(sum_i (row_i - mean)^2 / (N - 1)). Zero iff all row sums are
// equal. Throws DisconnectedTopologyError on unreachable pairs and
// DegenerateTopologyError for N = 1.
double bcm(const HopMatrix& m);

// Structural metrics of a connected topology. The clustering coefficient is
// the node average of (links among neighbors) / (k(k-1)/2), counting nodes of
// degree < 2 as 0.
TopologyStats topology_stats(const Topology& t, const HopMatrix& m);

// Rebuilds the graph whose edges are exactly the hop-count-1 pairs.
Topology adjacency_from_hop_matrix(const HopMatrix& m);

}  // namespace bcmsim
