#include "bcmsim/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bcmsim/generators.hpp"
#include "bcmsim/rewire.hpp"
#include "bcmsim/simulate.hpp"
#include "bcmsim/topology.hpp"

namespace bcmsim {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    if (begin == std::string::npos) {
      parts.push_back("");
      continue;
    }
    const auto end = item.find_last_not_of(" \t");
    parts.push_back(item.substr(begin, end - begin + 1));
  }
  return parts;
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfigError("bad numeric value '" + text + "' for " + what);
  }
}

long long to_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfigError("bad integer value '" + text + "' for " + what);
  }
}

bool to_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidConfigError("bad boolean value '" + text + "' for " + what);
}

std::vector<double> to_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) out.push_back(to_double(item, what));
  return out;
}

std::vector<std::uint64_t> to_seed_list(const std::string& text, const std::string& what) {
  std::vector<std::uint64_t> out;
  for (const std::string& item : split_list(text)) {
    const long long v = to_int(item, what);
    if (v < 0) throw InvalidConfigError("seed must be nonnegative in " + what);
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::vector<Algorithm> to_algorithm_list(const std::string& text) {
  std::vector<Algorithm> out;
  for (const std::string& item : split_list(text)) {
    const auto alg = algorithm_from_name(item);
    if (!alg) throw InvalidConfigError("unknown algorithm '" + item + "'");
    out.push_back(*alg);
  }
  return out;
}

std::string file_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// Writes text to the path, or to fallback when the path is empty.
void emit(const std::string& text, const std::string& path, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write output file '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw Error("failed writing output file '" + path + "'");
}

// ---------------------------------------------------------------------------
// sweep configuration

struct SweepConfig {
  std::string topology_path;
  std::string name;
  std::string out_path;
  std::vector<Algorithm> algorithms;
  std::vector<double> loads;
  std::vector<double> holding_times;
  std::vector<std::uint64_t> seeds;
  std::string traffic = "uniform";
  std::vector<int> subnet_labels;
  double intra_weight = 3.0;
  SimConfig base;
};

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig sc;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key=value", line_no);
    }
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      if (key == "topology") {
        sc.topology_path = value;
      } else if (key == "name") {
        sc.name = value;
      } else if (key == "out") {
        sc.out_path = value;
      } else if (key == "algorithms" || key == "algorithm") {
        sc.algorithms = to_algorithm_list(value);
      } else if (key == "loads") {
        sc.loads = to_double_list(value, key);
      } else if (key == "holding_times") {
        sc.holding_times = to_double_list(value, key);
      } else if (key == "seeds") {
        sc.seeds = to_seed_list(value, key);
      } else if (key == "lambda") {
        sc.base.lambda_per_source = to_double(value, key);
      } else if (key == "bw_min") {
        sc.base.bw_min = to_double(value, key);
      } else if (key == "bw_max") {
        sc.base.bw_max = to_double(value, key);
      } else if (key == "capacity") {
        sc.base.link_capacity = to_double(value, key);
      } else if (key == "warmup") {
        sc.base.warmup_requests = to_int(value, key);
      } else if (key == "total") {
        sc.base.total_requests = to_int(value, key);
      } else if (key == "max_paths_per_class") {
        sc.base.max_paths_per_class = static_cast<int>(to_int(value, key));
      } else if (key == "traffic") {
        if (value != "uniform" && value != "two_subnet") {
          throw InvalidConfigError("traffic must be 'uniform' or 'two_subnet'");
        }
        sc.traffic = value;
      } else if (key == "subnet_labels") {
        sc.subnet_labels.clear();
        for (const std::string& item : split_list(value)) {
          sc.subnet_labels.push_back(static_cast<int>(to_int(item, key)));
        }
      } else if (key == "intra_weight") {
        sc.intra_weight = to_double(value, key);
      } else if (key == "cbr_max_credits") {
        sc.base.cbr.max_credits = to_double(value, key);
      } else if (key == "cbr_phi") {
        sc.base.cbr.phi = to_double(value, key);
      } else if (key == "cbr_window") {
        sc.base.cbr.window = static_cast<int>(to_int(value, key));
      } else if (key == "cbr_plain_increments") {
        sc.base.cbr.plain_increments = to_bool(value, key);
      } else if (key == "qbr_window") {
        sc.base.qbr.window = static_cast<int>(to_int(value, key));
      } else if (key == "psr_gamma_hat") {
        sc.base.psr.gamma_hat = static_cast<int>(to_int(value, key));
      } else if (key == "psr_psi") {
        sc.base.psr.psi = to_double(value, key);
      } else if (key == "psr_observation_cycles") {
        sc.base.psr.observation_period_cycles = static_cast<int>(to_int(value, key));
      } else {
        throw InvalidConfigError("unknown config key '" + key + "'");
      }
    } catch (const InvalidConfigError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return sc;
}

void validate_sweep_config(const SweepConfig& sc) {
  if (sc.topology_path.empty()) {
    throw InvalidConfigError("sweep config needs a topology");
  }
  if (sc.algorithms.empty()) {
    throw InvalidConfigError("sweep config needs at least one algorithm");
  }
  if (sc.seeds.empty()) {
    throw InvalidConfigError("sweep config needs a non-empty seed list");
  }
  const bool has_loads = !sc.loads.empty();
  const bool has_times = !sc.holding_times.empty();
  if (has_loads == has_times) {
    throw InvalidConfigError("set exactly one of 'loads' and 'holding_times'");
  }
  if (sc.traffic == "two_subnet" && sc.subnet_labels.empty()) {
    throw InvalidConfigError("two_subnet traffic needs subnet_labels");
  }
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_analyze(const std::string& topology_path, const std::string& out_path,
                std::ostream& out) {
  const Topology t = load_topology(topology_path);
  const TopologyStats stats = topology_stats(t, hop_matrix(t));
  std::ostringstream csv;
  csv << "name,nodes,links,links_per_node,avg_degree,avg_path_length,diameter,"
         "clustering_coefficient,bcm\n";
  csv << file_stem(topology_path) << ',' << stats.node_count << ',' << stats.link_count << ','
      << fixed6(stats.links_per_node) << ',' << fixed6(stats.avg_degree_undirected) << ','
      << fixed6(stats.avg_path_length) << ',' << stats.diameter << ','
      << fixed6(stats.clustering_coefficient) << ',' << fixed6(stats.bcm) << '\n';
  emit(csv.str(), out_path, out);
  return 0;
}

struct GenerateArgs {
  std::string kind;
  int nodes = 0;
  int links = 0;
  double alpha = 0.15;
  double beta = 0.2;
  double plane = 1000.0;
  int m = 2;
  int m0 = 0;  // 0 = m + 1
  std::uint64_t seed = 1;
  std::string out_path;
};

int cmd_generate(const GenerateArgs& args) {
  Topology t = [&] {
    if (args.kind == "waxman") {
      // Parameter problems are configuration errors at the CLI surface.
      if (args.nodes < 1 || args.links < args.nodes - 1 ||
          static_cast<long long>(args.links) >
              static_cast<long long>(args.nodes) * (args.nodes - 1) / 2 ||
          !(args.alpha > 0.0 && args.alpha <= 1.0) || !(args.beta > 0.0 && args.beta <= 1.0) ||
          !(args.plane > 0.0)) {
        throw InvalidParamsError("waxman: need nodes >= 1, nodes-1 <= links <= nodes*(nodes-1)/2, "
                                 "alpha and beta in (0,1], plane > 0");
      }
      return generate_waxman(
          WaxmanParams{args.nodes, args.links, args.alpha, args.beta, args.plane, args.seed});
    }
    if (args.kind == "ba") {
      const int m0 = args.m0 > 0 ? args.m0 : args.m + 1;
      if (args.m < 1 || args.m > m0 || m0 >= args.nodes) {
        throw InvalidParamsError("ba: need 1 <= m <= m0 < nodes");
      }
      return generate_barabasi_albert(BaParams{args.nodes, args.m, m0, args.seed});
    }
    throw InvalidParamsError("unknown generator kind '" + args.kind + "'");
  }();
  save_topology(t, args.out_path);
  return 0;
}

int cmd_rewire(const std::string& topology_path, double target_bcm, int max_steps,
               int candidate_budget, const std::string& out_path, const std::string& trace_path,
               std::ostream& out) {
  const Topology t = load_topology(topology_path);
  RewireConfig cfg;
  cfg.target_bcm = target_bcm;
  cfg.max_steps = max_steps >= 0 ? max_steps : 10 * t.link_count();
  cfg.candidate_budget = candidate_budget;
  const RewireResult result = rewire_until(t, cfg);

  if (!out_path.empty()) save_topology(result.topology, out_path);

  std::ostringstream csv;
  csv << "step,removed_u,removed_v,added_u,added_v,bcm_before,bcm_after\n";
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const RewireStep& s = result.trace[i];
    csv << (i + 1) << ',' << s.removed.u << ',' << s.removed.v << ',' << s.added.u << ','
        << s.added.v << ',' << fixed6(s.bcm_before) << ',' << fixed6(s.bcm_after) << '\n';
  }
  emit(csv.str(), trace_path, out);
  return 0;
}

int cmd_sweep(const SweepConfig& sc, std::ostream& out) {
  const Topology t = load_topology(sc.topology_path);
  const TopologyStats stats = topology_stats(t, hop_matrix(t));
  const std::string name = sc.name.empty() ? file_stem(sc.topology_path) : sc.name;

  SimConfig base = sc.base;
  if (sc.traffic == "two_subnet") {
    base.two_subnet = TwoSubnetTraffic{sc.subnet_labels, sc.intra_weight};
  }

  // The load axis: given loads are converted to holding times, given holding
  // times are annotated with their offered load.
  struct LoadPoint {
    double rho;
    double holding;
  };
  std::vector<LoadPoint> points;
  for (double rho : sc.loads) {
    points.push_back({rho, holding_time_for_load(rho, stats, base)});
  }
  for (double holding : sc.holding_times) {
    points.push_back({offered_load(holding, stats, base), holding});
  }

  std::ostringstream csv;
  csv << "topology,algorithm,load_rho,mean_holding_time,seed,requests,accepted,rejected,"
         "flow_bp,bw_bp,mean,ci95_low,ci95_high,n_seeds,error\n";
  bool any_failed = false;
  for (const LoadPoint& point : points) {
    for (Algorithm alg : sc.algorithms) {
      const std::string prefix = name + ',' + algorithm_name(alg) + ',' + fixed6(point.rho) +
                                 ',' + fixed6(point.holding) + ',';
      try {
        SimConfig cfg = base;
        cfg.algorithm = alg;
        cfg.mean_holding_time = point.holding;
        cfg.target_load = 0.0;
        const ReplicationResult rep = replicate(t, cfg, sc.seeds);
        for (std::size_t i = 0; i < sc.seeds.size(); ++i) {
          const RunMetrics& run = rep.runs[i];
          csv << prefix << sc.seeds[i] << ',' << run.requests << ',' << run.accepted << ','
              << run.rejected << ',' << fixed6(run.flow_bp) << ',' << fixed6(run.bw_bp)
              << ",,,,,\n";
        }
        csv << prefix << ",,,,,," << fixed6(rep.flow_bp.mean) << ',' << fixed6(rep.flow_bp.ci95_low)
            << ',' << fixed6(rep.flow_bp.ci95_high) << ',' << rep.flow_bp.n << ",\n";
      } catch (const Error& e) {
        any_failed = true;
        std::string msg = e.what();
        for (char& c : msg) {
          if (c == ',' || c == '\n') c = ';';
        }
        csv << prefix << ",,,,,,,,,," << msg << '\n';
      }
    }
  }
  emit(csv.str(), sc.out_path, out);
  return any_failed ? 3 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"BCM topology toolkit and flow-level QoS routing simulator"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Report structural metrics of a topology file");
  std::string an_topology, an_out;
  analyze->add_option("--topology", an_topology, "topology file")->required();
  analyze->add_option("--out", an_out, "write the CSV here instead of stdout");

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a topology file");
  GenerateArgs gen;
  generate->add_option("--kind", gen.kind, "waxman or ba")->required();
  generate->add_option("--nodes", gen.nodes, "node count")->required();
  generate->add_option("--links", gen.links, "target link count (waxman)");
  generate->add_option("--alpha", gen.alpha, "waxman alpha");
  generate->add_option("--beta", gen.beta, "waxman beta");
  generate->add_option("--plane", gen.plane, "waxman placement square side");
  generate->add_option("--m", gen.m, "links per new node (ba)");
  generate->add_option("--m0", gen.m0, "initial clique size (ba), default m+1");
  generate->add_option("--seed", gen.seed, "generator seed");
  generate->add_option("--out", gen.out_path, "output topology file")->required();

  // rewire
  auto* rewire = app.add_subcommand("rewire", "Greedily rewire a topology to lower its BCM");
  std::string rw_topology, rw_out, rw_trace;
  double rw_target = 0.0;
  int rw_max_steps = -1;
  int rw_budget = 0;
  rewire->add_option("--topology", rw_topology, "topology file")->required();
  rewire->add_option("--target-bcm", rw_target, "stop once BCM <= target (default 0)");
  rewire->add_option("--max-steps", rw_max_steps, "step cap (default 10x link count)");
  rewire->add_option("--candidate-budget", rw_budget,
                     "candidate pairs tried per step (0 = unlimited)");
  rewire->add_option("--out", rw_out, "rewired topology file");
  rewire->add_option("--trace", rw_trace, "write the step trace CSV here instead of stdout");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a blocking-probability sweep from a config file");
  std::string sw_config, sw_topology, sw_out, sw_seeds, sw_algorithms, sw_loads, sw_times;
  sweep->add_option("--config", sw_config, "key=value config file")->required();
  sweep->add_option("--topology", sw_topology, "override the config topology");
  sweep->add_option("--out", sw_out, "override the config output path");
  sweep->add_option("--seeds", sw_seeds, "override seeds, comma separated");
  sweep->add_option("--algorithms", sw_algorithms, "override algorithms, comma separated");
  sweep->add_option("--loads", sw_loads, "override offered loads, comma separated");
  sweep->add_option("--holding-times", sw_times, "override holding times, comma separated");

  std::vector<std::string> argv_store;
  argv_store.push_back("bcmsim");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_store.size());
  for (const std::string& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) {
      return cmd_analyze(an_topology, an_out, out);
    }
    if (generate->parsed()) {
      return cmd_generate(gen);
    }
    if (rewire->parsed()) {
      if (rw_target < 0.0 || rw_budget < 0) {
        throw InvalidParamsError("target-bcm and candidate-budget must be nonnegative");
      }
      return cmd_rewire(rw_topology, rw_target, rw_max_steps, rw_budget, rw_out, rw_trace, out);
    }
    if (sweep->parsed()) {
      std::ifstream in(sw_config);
      if (!in) throw InvalidConfigError("cannot open config file '" + sw_config + "'");
      SweepConfig sc = parse_sweep_config(in);
      if (!sw_topology.empty()) sc.topology_path = sw_topology;
      if (!sw_out.empty()) sc.out_path = sw_out;
      if (!sw_seeds.empty()) sc.seeds = to_seed_list(sw_seeds, "--seeds");
      if (!sw_algorithms.empty()) sc.algorithms = to_algorithm_list(sw_algorithms);
      if (!sw_loads.empty()) {
        sc.loads = to_double_list(sw_loads, "--loads");
        sc.holding_times.clear();
      }
      if (!sw_times.empty()) {
        sc.holding_times = to_double_list(sw_times, "--holding-times");
        sc.loads.clear();
      }
      validate_sweep_config(sc);
      return cmd_sweep(sc, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParamsError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace bcmsim
