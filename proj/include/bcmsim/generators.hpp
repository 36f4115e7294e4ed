#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bcmsim/topology.hpp"

namespace bcmsim {

// Waxman random graph: nodes placed uniformly on a square, candidate links
// accepted with probability alpha * exp(-d / (beta * d_max)). Placements are
// retried until the result is connected with exactly target_links links.
struct WaxmanParams {
  int node_count = 0;
  int target_links = 0;
  double alpha = 0.15;
  double beta = 0.2;
  double plane_size = 1000.0;
  std::uint64_t seed = 1;
};

Topology generate_waxman(const WaxmanParams& p);

// Preferential attachment: start from a clique of initial_clique nodes, then
// attach each new node to links_per_new_node distinct existing nodes chosen
// with probability proportional to current degree.
// initial_clique == 0 selects the default links_per_new_node + 1.
struct BaParams {
  int node_count = 0;
  int links_per_new_node = 0;  // m
  int initial_clique = 0;      // m0
  std::uint64_t seed = 1;
};

Topology generate_barabasi_albert(const BaParams& p);

// Line-oriented topology file: '#' lines are comments, first data line is
// "<N> <L>", followed by exactly L lines "<u> <v>" with 0-based indices and
// u < v. Writers emit edges in sorted order.
Topology parse_topology(std::istream& in);
void serialize_topology(const Topology& t, std::ostream& out);
Topology load_topology(const std::string& path);
void save_topology(const Topology& t, const std::string& path);

// Two-way node partition with the balance metric of each induced subgraph.
struct SubnetAssignment {
  std::vector<int> labels;                 // 0 or 1 per node
  std::array<double, 2> per_subnet_bcm{};  // metric of each induced subgraph
  double whole_bcm = 0.0;
};

// Labels must cover both classes and induce two connected subgraphs.
// Inter-subnet links are ignored when scoring a subnet.
SubnetAssignment assign_subnetworks(const Topology& t, const std::vector<int>& labels);

}  // namespace bcmsim
