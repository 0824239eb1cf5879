#include "sge/audit.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "sge/parallel.hpp"

namespace sge {

namespace {

struct OracleView {
  std::size_t n = 0;
  std::vector<std::uint32_t> adj;  // bitmask rows
  std::vector<std::vector<NodeId>> lists;
  std::map<Edge, std::string_view> edge_label;
  std::vector<std::vector<std::size_t>> signature;  // degree, then sorted neighbor degrees
};

OracleView make_view(const Graphlet& g) {
  OracleView view;
  view.n = g.num_nodes();
  view.adj.assign(view.n, 0);
  view.lists = adjacency(g);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge& ed = g.edges[e];
    view.adj[ed.u] |= 1u << ed.v;
    view.adj[ed.v] |= 1u << ed.u;
    if (!g.edge_labels.empty()) view.edge_label[ed] = g.edge_labels[e];
  }
  view.signature.resize(view.n);
  for (NodeId v = 0; v < view.n; ++v) {
    auto& sig = view.signature[v];
    sig.push_back(view.lists[v].size());
    std::vector<std::size_t> nd;
    for (NodeId w : view.lists[v]) nd.push_back(view.lists[w].size());
    std::ranges::sort(nd);
    sig.insert(sig.end(), nd.begin(), nd.end());
  }
  return view;
}

class Matcher {
 public:
  Matcher(const Graphlet& a, const Graphlet& b) : ga_(a), gb_(b), va_(make_view(a)), vb_(make_view(b)) {}

  bool run() {
    const std::size_t n = va_.n;
    // visit a's nodes so that each (after the first of its component) is adjacent to an earlier one
    std::vector<char> placed(n, 0);
    while (order_.size() < n) {
      NodeId start = 0;
      std::size_t best_deg = 0;
      bool found = false;
      for (NodeId v = 0; v < n; ++v) {
        if (!placed[v] && (!found || va_.lists[v].size() > best_deg)) {
          start = v;
          best_deg = va_.lists[v].size();
          found = true;
        }
      }
      placed[start] = 1;
      order_.push_back(start);
      for (std::size_t head = order_.size() - 1; head < order_.size(); ++head) {
        for (NodeId w : va_.lists[order_[head]]) {
          if (!placed[w]) {
            placed[w] = 1;
            order_.push_back(w);
          }
        }
      }
    }
    candidates_.resize(n);
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId w = 0; w < n; ++w) {
        if (va_.signature[v] == vb_.signature[w] && node_label(ga_, v) == node_label(gb_, w)) {
          candidates_[v].push_back(w);
        }
      }
      if (candidates_[v].empty()) return false;
    }
    map_.assign(n, kUnmapped);
    used_.assign(n, 0);
    return extend(0);
  }

 private:
  static constexpr NodeId kUnmapped = ~NodeId{0};

  static std::string_view node_label(const Graphlet& g, NodeId v) {
    return g.node_labels.empty() ? std::string_view{} : std::string_view(g.node_labels[v]);
  }

  bool consistent(NodeId v, NodeId w) const {
    for (std::size_t i = 0; i < va_.n; ++i) {
      const NodeId mapped = map_[i];
      if (mapped == kUnmapped) continue;
      const bool ea = (va_.adj[v] >> i) & 1u;
      const bool eb = (vb_.adj[w] >> mapped) & 1u;
      if (ea != eb) return false;
      if (ea && !va_.edge_label.empty() &&
          va_.edge_label.at(make_edge(v, static_cast<NodeId>(i))) != vb_.edge_label.at(make_edge(w, mapped))) {
        return false;
      }
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const NodeId v = order_[depth];
    for (NodeId w : candidates_[v]) {
      if (used_[w] || !consistent(v, w)) continue;
      map_[v] = w;
      used_[w] = 1;
      if (extend(depth + 1)) return true;
      map_[v] = kUnmapped;
      used_[w] = 0;
    }
    return false;
  }

  const Graphlet& ga_;
  const Graphlet& gb_;
  OracleView va_;
  OracleView vb_;
  std::vector<NodeId> order_;
  std::vector<std::vector<NodeId>> candidates_;
  std::vector<NodeId> map_;
  std::vector<char> used_;
};

std::vector<std::string> sorted_copy(std::vector<std::string> v) {
  std::ranges::sort(v);
  return v;
}

// Isomorphism-invariant bucket key used to limit oracle calls during enumeration.
std::string invariant_key(const Graphlet& g) {
  const OracleView view = make_view(g);
  std::vector<std::vector<std::size_t>> sigs = view.signature;
  std::ranges::sort(sigs);
  std::string key = std::to_string(g.num_nodes()) + "#";
  for (const auto& s : sigs) {
    for (auto x : s) key += std::to_string(x) + ".";
    key += ";";
  }
  key += "#" + hash_code(g, HashFunctionId::betweenness, false).topo_key;
  return key;
}

Graphlet single_edge() {
  Graphlet g;
  g.nodes = {0, 1};
  g.edges = {Edge{0, 1}};
  return g;
}

}  // namespace

bool is_isomorphic(const Graphlet& a, const Graphlet& b) {
  if (a.num_nodes() > kMaxOracleNodes || b.num_nodes() > kMaxOracleNodes) {
    throw std::invalid_argument("isomorphism oracle limited to " + std::to_string(kMaxOracleNodes) + " nodes");
  }
  if (a.num_nodes() != b.num_nodes() || a.t() != b.t()) return false;
  if (a.node_labels.empty() != b.node_labels.empty() || a.edge_labels.empty() != b.edge_labels.empty()) {
    return false;
  }
  if (degree_vector(a) != degree_vector(b)) return false;
  if (sorted_copy(a.node_labels) != sorted_copy(b.node_labels)) return false;
  if (sorted_copy(a.edge_labels) != sorted_copy(b.edge_labels)) return false;
  return Matcher(a, b).run();
}

std::vector<std::vector<Graphlet>> enumerate_connected_levels(std::size_t max_t) {
  if (max_t < 1 || max_t > kMaxEnumeratedEdges) {
    throw std::out_of_range("enumeration supports 1 <= t <= " + std::to_string(kMaxEnumeratedEdges));
  }
  std::vector<std::vector<Graphlet>> levels;
  levels.push_back({single_edge()});
  for (std::size_t t = 2; t <= max_t; ++t) {
    std::vector<Graphlet> next;
    std::unordered_map<std::string, std::vector<std::size_t>> buckets;
    auto offer = [&](Graphlet&& candidate) {
      auto& bucket = buckets[invariant_key(candidate)];
      for (std::size_t idx : bucket) {
        if (is_isomorphic(next[idx], candidate)) return;
      }
      bucket.push_back(next.size());
      next.push_back(std::move(candidate));
    };
    for (const Graphlet& g : levels.back()) {
      const auto n = static_cast<NodeId>(g.num_nodes());
      const auto adj = adjacency(g);
      for (NodeId u = 0; u < n; ++u) {
        Graphlet h = g;
        h.nodes.push_back(n);
        h.edges.push_back(Edge{u, n});
        offer(std::move(h));
      }
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
          if (std::ranges::binary_search(adj[u], v)) continue;
          Graphlet h = g;
          h.edges.push_back(Edge{u, v});
          offer(std::move(h));
        }
      }
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

std::vector<Graphlet> enumerate_connected(std::size_t t) {
  auto levels = enumerate_connected_levels(t);
  return std::move(levels.back());
}

CollisionReport collision_report(HashFunctionId fn, std::size_t t, unsigned threads) {
  return collision_report(fn, t, enumerate_connected(t), threads);
}

CollisionReport collision_report(HashFunctionId fn, std::size_t t, const std::vector<Graphlet>& graphs,
                                 unsigned threads) {
  CollisionReport r;
  r.fn = resolve(fn, t);
  r.t = t;
  r.graphs = graphs;
  r.n_graphs = graphs.size();
  r.n_pairs = r.n_graphs * (r.n_graphs - (r.n_graphs > 0 ? 1 : 0)) / 2;

  std::vector<std::string> codes(graphs.size());
  parallel_for(graphs.size(), threads, [&](std::size_t i) {
    if (graphs[i].t() != t) throw std::invalid_argument("graph with wrong edge count in collision report");
    codes[i] = hash_code(graphs[i], r.fn, false).str();
  });
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < codes.size(); ++i) groups[codes[i]].push_back(i);
  r.n_collisions = r.n_graphs - groups.size();
  for (const auto& [code, members] : groups) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) r.colliding_pairs.emplace_back(members[a], members[b]);
    }
  }
  std::ranges::sort(r.colliding_pairs);
  r.e_f = r.n_pairs == 0 ? Rational{} : Rational(static_cast<std::int64_t>(r.n_collisions),
                                                  static_cast<std::int64_t>(r.n_pairs));
  return r;
}

std::string format_decimal(const Rational& r, int digits) {
  __int128 scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool negative = r.num() < 0;
  const __int128 num = negative ? -static_cast<__int128>(r.num()) : r.num();
  // round half up on the magnitude
  const __int128 scaled = (num * scale * 2 + r.den()) / (static_cast<__int128>(r.den()) * 2);
  const auto whole = static_cast<long long>(scaled / scale);
  auto frac = static_cast<long long>(scaled % scale);
  std::string frac_str = std::to_string(frac);
  frac_str.insert(0, static_cast<std::size_t>(digits) - frac_str.size(), '0');
  std::string out = (negative && scaled != 0 ? "-" : "") + std::to_string(whole);
  if (digits > 0) out += "." + frac_str;
  return out;
}

void write_report_header(std::ostream& out) {
  out << "fn\tt\tn_graphs\tn_pairs\tn_collisions\te_f\te_f_decimal\n";
}

void write_report_row(std::ostream& out, const CollisionReport& r) {
  out << to_string(r.fn) << '\t' << r.t << '\t' << r.n_graphs << '\t' << r.n_pairs << '\t' << r.n_collisions
      << '\t' << r.e_f.str() << '\t' << format_decimal(r.e_f, 5) << '\n';
}

void write_colliding_pairs(std::ostream& out, const CollisionReport& r) {
  std::size_t k = 0;
  for (const auto& [a, b] : r.colliding_pairs) {
    const std::string prefix = std::string(to_string(r.fn)) + "_t" + std::to_string(r.t) + "_pair" + std::to_string(k);
    out << "# " << prefix << ": classes " << a << " and " << b << " share code "
        << hash_code(r.graphs[a], r.fn, false).str() << '\n';
    out << serialize_graph(to_graph(r.graphs[a], prefix + "_a"));
    out << serialize_graph(to_graph(r.graphs[b], prefix + "_b"));
    ++k;
  }
}

}  // namespace sge
