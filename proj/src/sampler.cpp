#include "sge/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "sge/parallel.hpp"

namespace sge {

void SamplerParams::validate() const {
  if (runs < 1) throw std::invalid_argument("M must be at least 1");
  if (max_edges < 1) throw std::invalid_argument("T must be at least 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed, std::string_view graph_id, std::uint64_t run_index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a(graph_id));
  return splitmix64(h ^ run_index);
}

std::uint64_t RunRng::below(std::uint64_t bound) {
  // rejection on the largest multiple of bound
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

double RunRng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

RunTrace sample_run(const Graph& g, const SamplerParams& params, std::uint64_t run_index) {
  params.validate();
  if (g.num_edges() == 0) throw DataError("graph " + g.id() + " has no edges");
  if (run_index >= params.runs) throw std::invalid_argument("run index out of range");

  RunRng rng(run_seed(params.seed, g.id(), run_index));
  const bool node_labels = g.has_node_labels();
  const bool edge_labels = g.has_edge_labels();

  Graphlet current;
  std::unordered_map<NodeId, NodeId> local;
  std::vector<std::size_t> unvisited_degree;  // per local node
  std::vector<char> edge_used(g.num_edges(), 0);

  auto visit = [&](NodeId v) {
    const auto [it, inserted] = local.try_emplace(v, static_cast<NodeId>(current.nodes.size()));
    if (inserted) {
      current.nodes.push_back(v);
      if (node_labels) current.node_labels.push_back(g.node_labels()[v]);
      std::size_t free_edges = 0;
      for (const Incidence& inc : g.neighbors(v)) free_edges += edge_used[inc.edge] ? 0 : 1;
      unvisited_degree.push_back(free_edges);
    }
    return it->second;
  };

  NodeId frontier = visit(static_cast<NodeId>(rng.below(g.num_nodes())));

  RunTrace trace;
  trace.graphlets.reserve(params.max_edges);
  std::vector<NodeId> eligible;
  std::vector<Incidence> options;
  for (std::uint32_t t = 1; t <= params.max_edges; ++t) {
    eligible.clear();
    for (NodeId i = 0; i < current.nodes.size(); ++i) {
      if (unvisited_degree[i] > 0) eligible.push_back(i);
    }
    if (eligible.empty()) {
      trace.dead_end = true;
      break;
    }
    NodeId from = frontier;
    const bool walk = rng.unit() < params.alpha;
    if (!walk || unvisited_degree[frontier] == 0) from = eligible[rng.below(eligible.size())];

    options.clear();
    for (const Incidence& inc : g.neighbors(current.nodes[from])) {
      if (!edge_used[inc.edge]) options.push_back(inc);
    }
    const Incidence chosen = options[rng.below(options.size())];
    edge_used[chosen.edge] = 1;
    // decrement the free-edge count of already visited endpoints before a
    // newly visited endpoint computes its own count
    --unvisited_degree[from];
    const auto known = local.find(chosen.node);
    if (known != local.end()) --unvisited_degree[known->second];
    const NodeId to = visit(chosen.node);

    current.edges.push_back(make_edge(from, to));
    if (edge_labels) current.edge_labels.push_back(g.edge_labels()[chosen.edge]);
    frontier = to;
    trace.graphlets.push_back(current);
  }
  return trace;
}

std::vector<RunTrace> sample_all(const Graph& g, const SamplerParams& params, unsigned threads) {
  params.validate();
  if (g.num_edges() == 0) throw DataError("graph " + g.id() + " has no edges");
  std::vector<RunTrace> traces(params.runs);
  parallel_for(params.runs, threads, [&](std::size_t i) { traces[i] = sample_run(g, params, i); });
  return traces;
}

std::uint64_t sample_size(std::uint64_t a, double epsilon, double delta) {
  if (a < 1) throw std::invalid_argument("a must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const long double eps = epsilon;
  const long double value =
      2.0L * (static_cast<long double>(a) * std::log(2.0L) + std::log(1.0L / delta)) / (eps * eps);
  return static_cast<std::uint64_t>(std::ceil(value));
}

std::uint64_t graphlet_count_table(int t) {
  static constexpr std::uint64_t counts[] = {1, 1, 3, 5, 12, 30, 79, 227, 710, 2322};
  if (t < 1 || t > 10) {
    throw std::out_of_range("graphlet count known only for t in [1, 10]; supply a explicitly");
  }
  return counts[t - 1];
}

}  // namespace sge
