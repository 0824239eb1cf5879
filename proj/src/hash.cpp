#include "sge/hash.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "sge/audit.hpp"

namespace sge {

std::string_view to_string(HashFunctionId f) {
  switch (f) {
    case HashFunctionId::degree: return "degree";
    case HashFunctionId::betweenness: return "betweenness";
    case HashFunctionId::core: return "core";
    case HashFunctionId::clustering: return "clustering";
    case HashFunctionId::automatic: return "auto";
  }
  return "auto";
}

HashFunctionId parse_hash_function(std::string_view name) {
  if (name == "degree") return HashFunctionId::degree;
  if (name == "betweenness") return HashFunctionId::betweenness;
  if (name == "core") return HashFunctionId::core;
  if (name == "clustering") return HashFunctionId::clustering;
  if (name == "auto") return HashFunctionId::automatic;
  throw std::invalid_argument("unknown hash function '" + std::string(name) + "'");
}

HashFunctionId resolve(HashFunctionId f, std::size_t t) {
  if (f != HashFunctionId::automatic) return f;
  return t <= 4 ? HashFunctionId::degree : HashFunctionId::betweenness;
}

int compute_cost_rank(HashFunctionId f) {
  switch (f) {
    case HashFunctionId::degree: return 0;
    case HashFunctionId::core: return 1;
    case HashFunctionId::clustering: return 2;
    case HashFunctionId::betweenness: return 3;
    case HashFunctionId::automatic: return 4;
  }
  return 4;
}

std::vector<std::int64_t> node_degrees(const Graphlet& g) {
  std::vector<std::int64_t> deg(g.num_nodes(), 0);
  for (const Edge& e : g.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

// Brandes accumulation over every source; summing dependencies over all
// sources counts each ordered pair (s, t) once.
std::vector<Rational> node_betweenness(const Graphlet& g) {
  const std::size_t n = g.num_nodes();
  const auto adj = adjacency(g);
  std::vector<Rational> bc(n);
  std::vector<std::int64_t> sigma(n);
  std::vector<int> dist(n);
  std::vector<Rational> delta(n);
  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    std::ranges::fill(sigma, 0);
    std::ranges::fill(dist, -1);
    order.clear();
    sigma[s] = 1;
    dist[s] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      for (NodeId w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    std::ranges::fill(delta, Rational{});
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : adj[w]) {
        if (dist[v] == dist[w] - 1) {
          delta[v] += Rational(sigma[v], sigma[w]) * (Rational(1) + delta[w]);
        }
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  return bc;
}

std::vector<std::int64_t> node_core_numbers(const Graphlet& g) {
  const std::size_t n = g.num_nodes();
  const auto adj = adjacency(g);
  std::vector<std::int64_t> deg = node_degrees(g);
  std::vector<std::int64_t> core(n, 0);
  std::vector<char> removed(n, 0);
  std::int64_t k = 0;
  for (std::size_t step = 0; step < n; ++step) {
    NodeId best = 0;
    std::int64_t best_deg = -1;
    for (NodeId v = 0; v < n; ++v) {
      if (!removed[v] && (best_deg < 0 || deg[v] < best_deg)) {
        best = v;
        best_deg = deg[v];
      }
    }
    k = std::max(k, best_deg);
    core[best] = k;
    removed[best] = 1;
    for (NodeId w : adj[best]) {
      if (!removed[w]) --deg[w];
    }
  }
  return core;
}

std::vector<Rational> node_clustering(const Graphlet& g) {
  const std::size_t n = g.num_nodes();
  const auto adj = adjacency(g);
  std::vector<Rational> cc(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto d = static_cast<std::int64_t>(adj[v].size());
    if (d < 2) continue;
    std::int64_t triangles = 0;
    for (std::size_t i = 0; i < adj[v].size(); ++i) {
      for (std::size_t j = i + 1; j < adj[v].size(); ++j) {
        if (std::ranges::binary_search(adj[adj[v][i]], adj[v][j])) ++triangles;
      }
    }
    cc[v] = Rational(triangles, d * (d - 1) / 2);
  }
  return cc;
}

namespace {

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
  std::ranges::sort(v);
  return v;
}

std::vector<Rational> measure(const Graphlet& g, HashFunctionId fn) {
  auto widen = [](const std::vector<std::int64_t>& v) { return std::vector<Rational>(v.begin(), v.end()); };
  switch (fn) {
    case HashFunctionId::degree: return widen(node_degrees(g));
    case HashFunctionId::betweenness: return node_betweenness(g);
    case HashFunctionId::core: return widen(node_core_numbers(g));
    case HashFunctionId::clustering: return node_clustering(g);
    case HashFunctionId::automatic: break;
  }
  throw std::logic_error("unresolved hash function");
}

template <typename Range>
std::string join(const Range& items) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += ',';
    first = false;
    out += item;
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> degree_vector(const Graphlet& g) { return sorted(node_degrees(g)); }
std::vector<Rational> betweenness_vector(const Graphlet& g) { return sorted(node_betweenness(g)); }
std::vector<std::int64_t> core_vector(const Graphlet& g) { return sorted(node_core_numbers(g)); }
std::vector<Rational> clustering_vector(const Graphlet& g) { return sorted(node_clustering(g)); }

std::string escape_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    switch (c) {
      case '%': out += "%25"; break;
      case ',': out += "%2C"; break;
      case '|': out += "%7C"; break;
      default: out += c;
    }
  }
  return out;
}

std::string HashCode::str() const {
  std::string out = std::to_string(t);
  out += '|';
  out += to_string(fn);
  out += '|';
  out += topo_key;
  out += '|';
  out += node_label_key;
  out += '|';
  out += edge_label_key;
  return out;
}

HashCode hash_code(const Graphlet& g, HashFunctionId fn, bool use_labels) {
  HashCode code;
  code.t = g.t();
  code.fn = resolve(fn, g.t());
  const std::vector<Rational> values = measure(g, code.fn);

  std::vector<Rational> sorted_values = sorted(values);
  const bool triangle_free = std::ranges::all_of(values, &Rational::is_zero);
  if (code.fn == HashFunctionId::clustering && triangle_free) {
    // every triangle-free graphlet of a given size shares one clustering code
    code.topo_key = "0";
  } else {
    std::vector<std::string> parts;
    parts.reserve(sorted_values.size());
    for (const Rational& r : sorted_values) parts.push_back(r.str());
    code.topo_key = join(parts);
  }

  const bool node_labels = use_labels && !g.node_labels.empty();
  const bool edge_labels = use_labels && !g.edge_labels.empty();
  if (!node_labels && !edge_labels) return code;

  const std::size_t n = g.num_nodes();
  static const std::string no_label;
  auto label_of = [&](NodeId v) -> const std::string& { return node_labels ? g.node_labels[v] : no_label; };

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::ranges::stable_sort(order, [&](NodeId a, NodeId b) {
    return std::tie(values[a], label_of(a)) < std::tie(values[b], label_of(b));
  });
  // nodes that agree on (measure, label) share the rank of their group's
  // first position, so the edge part is independent of storage order
  std::vector<std::size_t> rank(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const NodeId v = order[pos];
    if (pos > 0) {
      const NodeId prev = order[pos - 1];
      const bool tied = values[prev] == values[v] && label_of(prev) == label_of(v);
      rank[v] = tied ? rank[prev] : pos;
    } else {
      rank[v] = 0;
    }
  }

  if (node_labels) {
    std::vector<std::string> parts;
    parts.reserve(n);
    for (NodeId v : order) parts.push_back(escape_label(g.node_labels[v]));
    code.node_label_key = join(parts);
  }
  if (edge_labels) {
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> keyed;
    keyed.reserve(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto a = rank[g.edges[e].u];
      const auto b = rank[g.edges[e].v];
      keyed.emplace_back(std::min(a, b), std::max(a, b), escape_label(g.edge_labels[e]));
    }
    std::ranges::sort(keyed);
    std::vector<std::string> parts;
    parts.reserve(keyed.size());
    for (auto& k : keyed) parts.push_back(std::move(std::get<2>(k)));
    code.edge_label_key = join(parts);
  }
  return code;
}

HashFunctionId select_hash_function(std::span<const HashFunctionId> candidates, std::size_t t,
                                    std::span<const CollisionReport> reports) {
  if (candidates.empty()) throw std::invalid_argument("no candidate hash functions");
  if (reports.size() != candidates.size()) throw std::invalid_argument("one report per candidate required");
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (reports[i].t != t || reports[i].fn != resolve(candidates[i], t)) {
      throw std::invalid_argument("report does not match candidate " + std::string(to_string(candidates[i])));
    }
    if (i == 0) continue;
    const auto rate = reports[i].e_f;
    const auto best_rate = reports[best].e_f;
    if (rate < best_rate ||
        (rate == best_rate && compute_cost_rank(candidates[i]) < compute_cost_rank(candidates[best]))) {
      best = i;
    }
  }
  return candidates[best];
}

}  // namespace sge
