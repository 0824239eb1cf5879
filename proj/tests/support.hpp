#pragma once

// Test-only helpers: random graph generators and brute-force oracles that are
// deliberately independent of the library's algorithms.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sge/graph.hpp"
#include "sge/rational.hpp"

namespace sge::test {

inline bool slow_tests_enabled() {
  const char* v = std::getenv("SGE_SLOW");
  return v != nullptr && std::string(v) == "1";
}

inline Graphlet make_graphlet(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) {
  Graphlet g;
  g.nodes.resize(n);
  std::iota(g.nodes.begin(), g.nodes.end(), NodeId{0});
  for (auto [u, v] : edges) g.edges.push_back(make_edge(u, v));
  return g;
}

inline Graph make_graph(std::string id, std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) {
  std::vector<Edge> es;
  for (auto [u, v] : edges) es.push_back(make_edge(u, v));
  return Graph(std::move(id), n, std::move(es));
}

inline Graphlet triangle() { return make_graphlet(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Graphlet path(std::size_t edges) {
  std::vector<std::pair<NodeId, NodeId>> es;
  for (NodeId i = 0; i < edges; ++i) es.emplace_back(i, i + 1);
  return make_graphlet(edges + 1, es);
}
inline Graphlet star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> es;
  for (NodeId i = 1; i <= leaves; ++i) es.emplace_back(0, i);
  return make_graphlet(leaves + 1, es);
}

/// Erdos-Renyi style graph with n nodes and about m distinct edges.
inline Graph random_graph(std::mt19937_64& rng, std::string id, std::size_t n, std::size_t m,
                          bool labeled = false) {
  std::set<Edge> edges;
  if (n >= 2) {
    const std::size_t max_edges = n * (n - 1) / 2;
    m = std::min(m, max_edges);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    while (edges.size() < m) {
      const NodeId a = pick(rng);
      const NodeId b = pick(rng);
      if (a != b) edges.insert(make_edge(a, b));
    }
  }
  std::vector<Edge> es(edges.begin(), edges.end());
  std::shuffle(es.begin(), es.end(), rng);
  std::vector<std::string> node_labels;
  std::vector<std::string> edge_labels;
  if (labeled) {
    static const char* node_alphabet[] = {"C", "N", "O"};
    static const char* edge_alphabet[] = {"1", "2"};
    for (std::size_t i = 0; i < n; ++i) node_labels.emplace_back(node_alphabet[rng() % 3]);
    for (std::size_t i = 0; i < es.size(); ++i) edge_labels.emplace_back(edge_alphabet[rng() % 2]);
  }
  return Graph(std::move(id), n, std::move(es), std::move(node_labels), std::move(edge_labels));
}

/// Random connected graphlet with exactly t edges grown edge by edge.
inline Graphlet random_connected_graphlet(std::mt19937_64& rng, std::size_t t, bool labeled) {
  Graphlet g;
  g.nodes = {0, 1};
  g.edges = {Edge{0, 1}};
  std::set<Edge> present{Edge{0, 1}};
  while (g.edges.size() < t) {
    const auto n = static_cast<NodeId>(g.nodes.size());
    const NodeId u = static_cast<NodeId>(rng() % n);
    const bool grow = (rng() % 2 == 0) || n * (n - 1) / 2 == present.size();
    if (grow) {
      g.nodes.push_back(n);
      g.edges.push_back(Edge{u, n});
      present.insert(Edge{u, n});
    } else {
      const NodeId v = static_cast<NodeId>(rng() % n);
      if (u == v || present.count(make_edge(u, v))) continue;
      g.edges.push_back(make_edge(u, v));
      present.insert(make_edge(u, v));
    }
  }
  if (labeled) {
    static const char* node_alphabet[] = {"C", "N", "O"};
    static const char* edge_alphabet[] = {"1", "2", "3"};
    for (std::size_t i = 0; i < g.nodes.size(); ++i) g.node_labels.emplace_back(node_alphabet[rng() % 3]);
    for (std::size_t i = 0; i < g.edges.size(); ++i) g.edge_labels.emplace_back(edge_alphabet[rng() % 3]);
  }
  return g;
}

inline std::vector<NodeId> random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<NodeId> p(n);
  std::iota(p.begin(), p.end(), NodeId{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Also shuffles the edge list (labels travel with their edges).
inline Graphlet shuffled_copy(std::mt19937_64& rng, const Graphlet& g) {
  Graphlet p = permute(g, random_permutation(rng, g.num_nodes()));
  std::vector<std::size_t> order(p.edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  Graphlet out = p;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.edges[i] = p.edges[order[i]];
    if (!p.edge_labels.empty()) out.edge_labels[i] = p.edge_labels[order[i]];
  }
  return out;
}

inline std::vector<std::vector<char>> adjacency_matrix(const Graphlet& g) {
  std::vector<std::vector<char>> a(g.num_nodes(), std::vector<char>(g.num_nodes(), 0));
  for (const Edge& e : g.edges) a[e.u][e.v] = a[e.v][e.u] = 1;
  return a;
}

// ---- oracles ---------------------------------------------------------------

/// Betweenness by listing every shortest path explicitly for every ordered pair.
inline std::vector<Rational> betweenness_by_path_listing(const Graphlet& g) {
  const std::size_t n = g.num_nodes();
  const auto a = adjacency_matrix(g);
  std::vector<Rational> bc(n);
  for (NodeId s = 0; s < n; ++s) {
    // BFS distances from s
    std::vector<int> dist(n, -1);
    std::vector<NodeId> queue{s};
    dist[s] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (NodeId w = 0; w < n; ++w) {
        if (a[queue[h]][w] && dist[w] < 0) {
          dist[w] = dist[queue[h]] + 1;
          queue.push_back(w);
        }
      }
    }
    for (NodeId t = 0; t < n; ++t) {
      if (t == s || dist[t] < 0) continue;
      std::vector<std::vector<NodeId>> paths;
      std::vector<NodeId> cur{s};
      std::function<void(NodeId)> dfs = [&](NodeId v) {
        if (v == t) {
          paths.push_back(cur);
          return;
        }
        for (NodeId w = 0; w < n; ++w) {
          if (a[v][w] && dist[w] == dist[v] + 1) {
            cur.push_back(w);
            dfs(w);
            cur.pop_back();
          }
        }
      };
      dfs(s);
      const auto sigma = static_cast<std::int64_t>(paths.size());
      for (const auto& p : paths) {
        for (std::size_t i = 1; i + 1 < p.size(); ++i) bc[p[i]] += Rational(1, sigma);
      }
    }
  }
  std::ranges::sort(bc);
  return bc;
}

/// Core numbers straight from the definition: largest k whose k-core (iterated
/// removal of nodes with degree < k) still contains the node.
inline std::vector<std::int64_t> core_by_definition(const Graphlet& g) {
  const std::size_t n = g.num_nodes();
  const auto a = adjacency_matrix(g);
  std::vector<std::int64_t> core(n, 0);
  for (std::int64_t k = 1; k <= static_cast<std::int64_t>(n); ++k) {
    std::vector<char> alive(n, 1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (NodeId v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        std::int64_t d = 0;
        for (NodeId w = 0; w < n; ++w) d += (alive[w] && a[v][w]) ? 1 : 0;
        if (d < k) {
          alive[v] = 0;
          changed = true;
        }
      }
    }
    for (NodeId v = 0; v < n; ++v) {
      if (alive[v]) core[v] = k;
    }
  }
  std::ranges::sort(core);
  return core;
}

inline std::vector<Rational> clustering_by_triples(const Graphlet& g) {
  const std::size_t n = g.num_nodes();
  const auto a = adjacency_matrix(g);
  std::vector<Rational> cc;
  for (NodeId v = 0; v < n; ++v) {
    std::int64_t closed = 0;
    std::int64_t triples = 0;
    for (NodeId x = 0; x < n; ++x) {
      for (NodeId y = x + 1; y < n; ++y) {
        if (a[v][x] && a[v][y]) {
          ++triples;
          if (a[x][y]) ++closed;
        }
      }
    }
    cc.push_back(triples == 0 ? Rational{} : Rational(closed, triples));
  }
  std::ranges::sort(cc);
  return cc;
}

/// Isomorphism by trying every permutation (small graphs only).
inline bool isomorphic_by_permutations(const Graphlet& x, const Graphlet& y) {
  if (x.num_nodes() != y.num_nodes() || x.t() != y.t()) return false;
  const auto ay = adjacency_matrix(y);
  std::vector<NodeId> p(x.num_nodes());
  std::iota(p.begin(), p.end(), NodeId{0});
  do {
    bool ok = true;
    for (const Edge& e : x.edges) {
      if (!ay[p[e.u]][p[e.v]]) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

/// Components by flood fill from every unvisited node.
inline std::size_t components_by_flood_fill(const Graph& g) {
  std::vector<char> seen(g.num_nodes(), 0);
  std::size_t count = 0;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::vector<NodeId> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (const Edge& e : g.edges()) {
        const NodeId other = e.u == v ? e.v : (e.v == v ? e.u : v);
        if (other != v && !seen[other]) {
          seen[other] = 1;
          stack.push_back(other);
        }
      }
    }
  }
  return count;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sge::test
