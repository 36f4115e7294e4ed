#include "bcmsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace bcmsim {

Edge make_edge(int a, int b) {
  if (a == b) {
    throw InvalidEdgeError("self-loop (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  if (a < 0 || b < 0) {
    throw InvalidEdgeError("negative node index (" + std::to_string(a) + "," +
                           std::to_string(b) + ")");
  }
  return a < b ? Edge{a, b} : Edge{b, a};
}

Topology::Topology(int node_count, const std::vector<Edge>& edges) : n_(node_count) {
  if (node_count < 1) {
    throw InvalidParamsError("node_count must be >= 1, got " + std::to_string(node_count));
  }
  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    Edge norm = make_edge(e.u, e.v);
    if (norm.v >= n_) {
      throw InvalidEdgeError("endpoint out of range in (" + std::to_string(e.u) + "," +
                             std::to_string(e.v) + "), node_count=" + std::to_string(n_));
    }
    edges_.push_back(norm);
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw DuplicateEdgeError("duplicate edge (" + std::to_string(dup->u) + "," +
                             std::to_string(dup->v) + ")");
  }
  adj_.resize(n_);
  for (const Edge& e : edges_) {
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

bool Topology::has_edge(int a, int b) const {
  if (a == b) return false;
  const auto& nbrs = adj_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

bool Topology::connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(n_, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop();
    for (int nb : adj_[cur]) {
      if (!seen[nb]) {
        seen[nb] = 1;
        ++visited;
        frontier.push(nb);
      }
    }
  }
  return visited == n_;
}

Topology Topology::with_edge(Edge e) const {
  Edge norm = make_edge(e.u, e.v);
  if (has_edge(norm.u, norm.v)) {
    throw DuplicateEdgeError("edge (" + std::to_string(norm.u) + "," + std::to_string(norm.v) +
                             ") already present");
  }
  std::vector<Edge> edges = edges_;
  edges.push_back(norm);
  return Topology(n_, edges);
}

Topology Topology::without_edge(Edge e) const {
  Edge norm = make_edge(e.u, e.v);
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  bool found = false;
  for (const Edge& cur : edges_) {
    if (cur == norm) {
      found = true;
    } else {
      edges.push_back(cur);
    }
  }
  if (!found) {
    throw InvalidEdgeError("edge (" + std::to_string(norm.u) + "," + std::to_string(norm.v) +
                           ") not present");
  }
  return Topology(n_, edges);
}

std::vector<std::uint8_t> Topology::adjacency_matrix() const {
  std::vector<std::uint8_t> a(static_cast<std::size_t>(n_) * n_, 0);
  for (const Edge& e : edges_) {
    a[static_cast<std::size_t>(e.u) * n_ + e.v] = 1;
    a[static_cast<std::size_t>(e.v) * n_ + e.u] = 1;
  }
  return a;
}

HopMatrix hop_matrix(const Topology& t) {
  const int n = t.node_count();
  HopMatrix m;
  m.n = n;
  m.dist.assign(static_cast<std::size_t>(n) * n, HopMatrix::kUnreachable);
  m.row_sums.assign(n, 0);
  m.reachable = true;

  std::vector<int> dist(n);
  std::queue<int> frontier;
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), HopMatrix::kUnreachable);
    dist[src] = 0;
    frontier.push(src);
    while (!frontier.empty()) {
      int cur = frontier.front();
      frontier.pop();
      for (int nb : t.neighbors(cur)) {
        if (dist[nb] == HopMatrix::kUnreachable) {
          dist[nb] = dist[cur] + 1;
          frontier.push(nb);
        }
      }
    }
    long long row = 0;
    for (int j = 0; j < n; ++j) {
      m.dist[static_cast<std::size_t>(src) * n + j] = dist[j];
      if (dist[j] == HopMatrix::kUnreachable) {
        m.reachable = false;
      } else {
        row += dist[j];
      }
    }
    m.row_sums[src] = row;
  }
  return m;
}

double bcm(const HopMatrix& m) {
  if (!m.reachable) {
    throw DisconnectedTopologyError("BCM undefined: topology has unreachable node pairs");
  }
  if (m.n < 2) {
    throw DegenerateTopologyError("BCM undefined for a single-node topology");
  }
  long long total = 0;
  for (long long row : m.row_sums) total += row;
  const double mean = static_cast<double>(total) / m.n;
  double sq = 0.0;
  for (long long row : m.row_sums) {
    const double d = static_cast<double>(row) - mean;
    sq += d * d;
  }
  return std::sqrt(sq / (m.n - 1));
}

TopologyStats topology_stats(const Topology& t, const HopMatrix& m) {
  TopologyStats s;
  s.bcm = bcm(m);  // validates reachability and N >= 2

  const int n = t.node_count();
  const int links = t.link_count();
  s.node_count = n;
  s.link_count = links;

  long long total = 0;
  int diameter = 0;
  for (int i = 0; i < n; ++i) {
    total += m.row_sums[i];
    for (int j = 0; j < n; ++j) diameter = std::max(diameter, m.at(i, j));
  }
  s.total_distance = total;
  s.diameter = diameter;
  s.avg_path_length = static_cast<double>(total) / (static_cast<double>(n) * (n - 1));
  s.mean_row_sum = static_cast<double>(total) / n;
  s.avg_degree_undirected = 2.0 * links / n;
  s.links_per_node = static_cast<double>(links) / n;

  double coeff_sum = 0.0;
  for (int node = 0; node < n; ++node) {
    const auto& nbrs = t.neighbors(node);
    const int k = static_cast<int>(nbrs.size());
    if (k < 2) continue;
    int among = 0;
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        if (t.has_edge(nbrs[a], nbrs[b])) ++among;
      }
    }
    coeff_sum += 2.0 * among / (static_cast<double>(k) * (k - 1));
  }
  s.clustering_coefficient = coeff_sum / n;
  return s;
}

Topology adjacency_from_hop_matrix(const HopMatrix& m) {
  std::vector<Edge> edges;
  for (int i = 0; i < m.n; ++i) {
    for (int j = i + 1; j < m.n; ++j) {
      if (m.at(i, j) == 1) edges.push_back(Edge{i, j});
    }
  }
  return Topology(m.n, edges);
}

}  // namespace bcmsim
