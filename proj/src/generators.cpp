#include "bcmsim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "bcmsim/rng.hpp"

namespace bcmsim {

namespace {

constexpr int kMaxPlacementAttempts = 1000;
constexpr int kMaxAcceptancePasses = 500;

long long max_links(int n) { return static_cast<long long>(n) * (n - 1) / 2; }

}  // namespace

Topology generate_waxman(const WaxmanParams& p) {
  if (p.node_count < 1) {
    throw GenerationFailedError("waxman: node_count must be >= 1");
  }
  if (p.target_links < p.node_count - 1) {
    throw GenerationFailedError("waxman: target_links " + std::to_string(p.target_links) +
                                " below spanning-tree minimum " +
                                std::to_string(p.node_count - 1));
  }
  if (p.target_links > max_links(p.node_count)) {
    throw GenerationFailedError("waxman: target_links " + std::to_string(p.target_links) +
                                " exceeds complete-graph maximum " +
                                std::to_string(max_links(p.node_count)));
  }
  if (!(p.alpha > 0.0 && p.alpha <= 1.0) || !(p.beta > 0.0 && p.beta <= 1.0)) {
    throw GenerationFailedError("waxman: alpha and beta must lie in (0, 1]");
  }
  if (!(p.plane_size > 0.0)) {
    throw GenerationFailedError("waxman: plane_size must be positive");
  }

  const int n = p.node_count;
  RandomStream rng(mix_seed(p.seed));

  std::vector<double> xs(n), ys(n);
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> accept_prob;
  pairs.reserve(max_links(n));
  accept_prob.reserve(max_links(n));

  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    for (int i = 0; i < n; ++i) {
      xs[i] = rng.uniform(0.0, p.plane_size);
      ys[i] = rng.uniform(0.0, p.plane_size);
    }
    pairs.clear();
    accept_prob.clear();
    double d_max = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        pairs.emplace_back(i, j);
        d_max = std::max(d_max, std::hypot(xs[i] - xs[j], ys[i] - ys[j]));
      }
    }
    for (const auto& [i, j] : pairs) {
      const double d = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
      accept_prob.push_back(d_max > 0.0 ? p.alpha * std::exp(-d / (p.beta * d_max)) : p.alpha);
    }

    // Fisher-Yates on the candidate order, then repeated acceptance passes
    // until the link budget is met.
    std::vector<int> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_int(i + 1)]);
    }

    std::vector<char> chosen(pairs.size(), 0);
    int accepted = 0;
    for (int pass = 0; pass < kMaxAcceptancePasses && accepted < p.target_links; ++pass) {
      for (int idx : order) {
        if (chosen[idx]) continue;
        if (rng.uniform01() < accept_prob[idx]) {
          chosen[idx] = 1;
          if (++accepted == p.target_links) break;
        }
      }
    }
    if (accepted != p.target_links) continue;

    std::vector<Edge> edges;
    edges.reserve(accepted);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (chosen[i]) edges.push_back(Edge{pairs[i].first, pairs[i].second});
    }
    Topology t(n, edges);
    if (t.connected()) return t;
  }
  throw GenerationFailedError("waxman: no connected placement with " +
                              std::to_string(p.target_links) + " links after " +
                              std::to_string(kMaxPlacementAttempts) + " attempts");
}

Topology generate_barabasi_albert(const BaParams& p) {
  const int m = p.links_per_new_node;
  const int m0 = p.initial_clique > 0 ? p.initial_clique : m + 1;
  if (m < 1 || m > m0 || m0 >= p.node_count) {
    throw InvalidParamsError("barabasi-albert: need 1 <= m <= m0 < node_count (m=" +
                             std::to_string(m) + ", m0=" + std::to_string(m0) +
                             ", node_count=" + std::to_string(p.node_count) + ")");
  }

  RandomStream rng(mix_seed(p.seed));
  std::vector<Edge> edges;
  std::vector<long long> degree(p.node_count, 0);
  for (int i = 0; i < m0; ++i) {
    for (int j = i + 1; j < m0; ++j) {
      edges.push_back(Edge{i, j});
      ++degree[i];
      ++degree[j];
    }
  }

  std::vector<char> picked(p.node_count, 0);
  for (int node = m0; node < p.node_count; ++node) {
    // Degrees are snapshotted at the start of the node's attachment round;
    // the m picks are distinct.
    std::fill(picked.begin(), picked.begin() + node, 0);
    long long total = 0;
    for (int i = 0; i < node; ++i) total += degree[i];
    for (int pick = 0; pick < m; ++pick) {
      const double target = rng.uniform01() * static_cast<double>(total);
      double acc = 0.0;
      int chosen = -1;
      for (int i = 0; i < node; ++i) {
        if (picked[i]) continue;
        acc += static_cast<double>(degree[i]);
        if (target < acc) {
          chosen = i;
          break;
        }
      }
      if (chosen < 0) {  // numeric edge of the cumulative walk
        for (int i = node - 1; i >= 0; --i) {
          if (!picked[i]) {
            chosen = i;
            break;
          }
        }
      }
      picked[chosen] = 1;
      total -= degree[chosen];
      edges.push_back(Edge{chosen, node});
    }
    for (int i = 0; i < node; ++i) {
      if (picked[i]) ++degree[i];
    }
    degree[node] = m;
  }
  return Topology(p.node_count, edges);
}

Topology parse_topology(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  long long declared_links = -1;
  std::vector<Edge> edges;

  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;

    std::istringstream fields(line);
    if (n < 0) {
      long long links = 0;
      if (!(fields >> n >> links) || n < 1 || links < 0) {
        throw ParseError("expected header \"<node_count> <link_count>\"", line_no);
      }
      std::string extra;
      if (fields >> extra) {
        throw ParseError("trailing data after header", line_no);
      }
      declared_links = links;
      continue;
    }
    int u = 0, v = 0;
    if (!(fields >> u >> v)) {
      throw ParseError("expected edge line \"<u> <v>\"", line_no);
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError("trailing data after edge", line_no);
    }
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ParseError("edge endpoint out of range [0, " + std::to_string(n) + ")", line_no);
    }
    if (u == v) {
      throw ParseError("self-loop (" + std::to_string(u) + "," + std::to_string(v) + ")", line_no);
    }
    if (u >= v) {
      throw ParseError("edge must be written with u < v", line_no);
    }
    if (static_cast<long long>(edges.size()) == declared_links) {
      throw ParseError("more edges than the declared " + std::to_string(declared_links), line_no);
    }
    edges.push_back(Edge{u, v});
  }

  if (n < 0) {
    throw ParseError("missing header \"<node_count> <link_count>\"", line_no + 1);
  }
  if (static_cast<long long>(edges.size()) != declared_links) {
    throw ParseError("declared " + std::to_string(declared_links) + " edges but found " +
                         std::to_string(edges.size()),
                     line_no + 1);
  }
  try {
    return Topology(n, edges);
  } catch (const Error& e) {
    throw ParseError(e.what(), line_no);
  }
}

void serialize_topology(const Topology& t, std::ostream& out) {
  out << t.node_count() << ' ' << t.link_count() << '\n';
  for (const Edge& e : t.edges()) {
    out << e.u << ' ' << e.v << '\n';
  }
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open topology file '" + path + "'");
  }
  return parse_topology(in);
}

void save_topology(const Topology& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write topology file '" + path + "'");
  }
  serialize_topology(t, out);
  out.flush();
  if (!out) {
    throw Error("failed writing topology file '" + path + "'");
  }
}

namespace {

// Induced subgraph on the nodes carrying the given label, nodes reindexed in
// ascending order.
Topology induced_subgraph(const Topology& t, const std::vector<int>& labels, int label) {
  std::vector<int> dense(t.node_count(), -1);
  int count = 0;
  for (int i = 0; i < t.node_count(); ++i) {
    if (labels[i] == label) dense[i] = count++;
  }
  std::vector<Edge> edges;
  for (const Edge& e : t.edges()) {
    if (dense[e.u] >= 0 && dense[e.v] >= 0) {
      edges.push_back(Edge{dense[e.u], dense[e.v]});
    }
  }
  return Topology(count, edges);
}

}  // namespace

SubnetAssignment assign_subnetworks(const Topology& t, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != t.node_count()) {
    throw InvalidParamsError("labels size " + std::to_string(labels.size()) +
                             " does not match node count " + std::to_string(t.node_count()));
  }
  int counts[2] = {0, 0};
  for (int label : labels) {
    if (label != 0 && label != 1) {
      throw InvalidParamsError("labels must be 0 or 1");
    }
    ++counts[label];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw InvalidParamsError("both subnet classes must be non-empty");
  }

  SubnetAssignment result;
  result.labels = labels;
  for (int label = 0; label < 2; ++label) {
    Topology sub = induced_subgraph(t, labels, label);
    if (!sub.connected()) {
      throw DisconnectedSubnetError("subnet " + std::to_string(label) +
                                    " induces a disconnected subgraph");
    }
    result.per_subnet_bcm[label] = bcm(hop_matrix(sub));
  }
  result.whole_bcm = bcm(hop_matrix(t));
  return result;
}

}  // namespace bcmsim
