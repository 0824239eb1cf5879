#include "sge/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace sge {

Graph::Graph(std::string id, std::size_t num_nodes, std::vector<Edge> edges,
             std::vector<std::string> node_labels, std::vector<std::string> edge_labels)
    : id_(std::move(id)),
      edges_(std::move(edges)),
      node_labels_(std::move(node_labels)),
      edge_labels_(std::move(edge_labels)),
      adjacency_(num_nodes) {
  if (!node_labels_.empty() && node_labels_.size() != num_nodes) {
    throw DataError("graph " + id_ + ": node label count does not match node count");
  }
  if (!edge_labels_.empty() && edge_labels_.size() != edges_.size()) {
    throw DataError("graph " + id_ + ": edge label count does not match edge count");
  }
  std::set<Edge> seen;
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    Edge& ed = edges_[e];
    if (ed.u == ed.v) throw DataError("graph " + id_ + ": self-loop on node " + std::to_string(ed.u));
    if (ed.u >= num_nodes || ed.v >= num_nodes) {
      throw DataError("graph " + id_ + ": edge endpoint out of range");
    }
    ed = make_edge(ed.u, ed.v);
    if (!seen.insert(ed).second) {
      throw DataError("graph " + id_ + ": duplicate edge " + std::to_string(ed.u) + " " +
                      std::to_string(ed.v));
    }
    adjacency_[ed.u].push_back({ed.v, e});
    adjacency_[ed.v].push_back({ed.u, e});
  }
}

bool structurally_equal(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges()) return false;
  if (!std::ranges::equal(a.node_labels(), b.node_labels())) return false;
  if (a.has_edge_labels() != b.has_edge_labels()) return false;
  auto keyed = [](const Graph& g) {
    std::map<Edge, std::string> m;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      m[g.edge(e)] = g.has_edge_labels() ? g.edge_labels()[e] : std::string{};
    }
    return m;
  };
  return keyed(a) == keyed(b);
}

std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count) {
  // union-find with path halving
  std::vector<std::uint32_t> parent(g.num_nodes());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Edge& e : g.edges()) {
    const auto a = find(e.u);
    const auto b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> comp(g.num_nodes());
  std::unordered_map<std::uint32_t, std::uint32_t> index;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto root = find(v);
    auto [it, inserted] = index.try_emplace(root, static_cast<std::uint32_t>(index.size()));
    comp[v] = it->second;
  }
  if (count != nullptr) *count = index.size();
  return comp;
}

std::vector<std::vector<NodeId>> adjacency(const Graphlet& g) {
  std::vector<std::vector<NodeId>> adj(g.num_nodes());
  for (const Edge& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::ranges::sort(a);
  return adj;
}

bool is_connected(const Graphlet& g) {
  if (g.num_nodes() == 0) return true;
  const auto adj = adjacency(g);
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == g.num_nodes();
}

Graphlet as_graphlet(const Graph& g) {
  Graphlet out;
  out.nodes.resize(g.num_nodes());
  std::iota(out.nodes.begin(), out.nodes.end(), NodeId{0});
  out.edges.assign(g.edges().begin(), g.edges().end());
  out.node_labels.assign(g.node_labels().begin(), g.node_labels().end());
  out.edge_labels.assign(g.edge_labels().begin(), g.edge_labels().end());
  return out;
}

Graph to_graph(const Graphlet& g, std::string id) {
  return Graph(std::move(id), g.num_nodes(), g.edges, g.node_labels, g.edge_labels);
}

Graphlet permute(const Graphlet& g, std::span<const NodeId> perm) {
  Graphlet out;
  const std::size_t n = g.num_nodes();
  out.nodes.resize(n);
  if (!g.node_labels.empty()) out.node_labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.nodes[perm[i]] = g.nodes[i];
    if (!g.node_labels.empty()) out.node_labels[perm[i]] = g.node_labels[i];
  }
  out.edges.reserve(g.edges.size());
  for (const Edge& e : g.edges) out.edges.push_back(make_edge(perm[e.u], perm[e.v]));
  out.edge_labels = g.edge_labels;
  return out;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::optional<NodeId> parse_index(std::string_view tok) {
  NodeId value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

struct PendingGraph {
  std::string id;
  std::size_t line = 0;
  std::map<NodeId, std::optional<std::string>> nodes;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  std::vector<std::optional<std::string>> edge_labels;
};

Graph finish(PendingGraph& p) {
  const std::size_t n = p.nodes.size();
  NodeId expected = 0;
  std::size_t labeled_nodes = 0;
  std::vector<std::string> node_labels;
  for (const auto& [id, label] : p.nodes) {
    if (id != expected) {
      throw ParseError(p.line, "graph " + p.id + ": node ids must be contiguous from 0 (missing " +
                                   std::to_string(expected) + ")");
    }
    ++expected;
    if (label) ++labeled_nodes;
  }
  if (labeled_nodes != 0 && labeled_nodes != n) {
    throw ParseError(p.line, "graph " + p.id + ": mixed labeled and unlabeled nodes");
  }
  if (labeled_nodes == n && n > 0) {
    for (const auto& [id, label] : p.nodes) node_labels.push_back(*label);
  }
  std::size_t labeled_edges = 0;
  std::set<Edge> seen;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const Edge& e = p.edges[i];
    if (e.v >= n) {
      throw ParseError(p.edge_lines[i], "dangling edge endpoint " + std::to_string(e.v));
    }
    if (!seen.insert(e).second) {
      throw ParseError(p.edge_lines[i],
                       "duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
    if (p.edge_labels[i]) ++labeled_edges;
  }
  if (labeled_edges != 0 && labeled_edges != p.edges.size()) {
    throw ParseError(p.line, "graph " + p.id + ": mixed labeled and unlabeled edges");
  }
  std::vector<std::string> edge_labels;
  if (labeled_edges == p.edges.size() && labeled_edges > 0) {
    for (auto& l : p.edge_labels) edge_labels.push_back(*l);
  }
  return Graph(p.id, n, std::move(p.edges), std::move(node_labels), std::move(edge_labels));
}

}  // namespace

std::vector<Graph> parse_graphs(std::istream& in) {
  std::vector<Graph> graphs;
  std::unordered_set<std::string> ids;
  std::optional<PendingGraph> current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    const std::string_view kind = tokens[0];
    if (kind == "t") {
      if (tokens.size() != 2) throw ParseError(lineno, "expected 't <graph_id>'");
      if (current) graphs.push_back(finish(*current));
      current.emplace();
      current->id = std::string(tokens[1]);
      current->line = lineno;
      if (!ids.insert(current->id).second) {
        throw ParseError(lineno, "duplicate graph id " + current->id);
      }
    } else if (kind == "v") {
      if (!current) throw ParseError(lineno, "node declared before any 't' line");
      if (tokens.size() < 2 || tokens.size() > 3) throw ParseError(lineno, "expected 'v <node_id> [<label>]'");
      const auto id = parse_index(tokens[1]);
      if (!id) throw ParseError(lineno, "invalid node id '" + std::string(tokens[1]) + "'");
      std::optional<std::string> label;
      if (tokens.size() == 3) label = std::string(tokens[2]);
      if (!current->nodes.emplace(*id, std::move(label)).second) {
        throw ParseError(lineno, "duplicate node id " + std::to_string(*id));
      }
    } else if (kind == "e") {
      if (!current) throw ParseError(lineno, "edge declared before any 't' line");
      if (tokens.size() < 3 || tokens.size() > 4) throw ParseError(lineno, "expected 'e <u> <v> [<label>]'");
      const auto u = parse_index(tokens[1]);
      const auto v = parse_index(tokens[2]);
      if (!u || !v) throw ParseError(lineno, "invalid edge endpoint");
      if (*u == *v) throw ParseError(lineno, "self-loop on node " + std::to_string(*u));
      current->edges.push_back(make_edge(*u, *v));
      current->edge_lines.push_back(lineno);
      current->edge_labels.push_back(tokens.size() == 4 ? std::optional<std::string>(tokens[3])
                                                        : std::nullopt);
    } else {
      throw ParseError(lineno, "unknown record type '" + std::string(kind) + "'");
    }
  }
  if (current) graphs.push_back(finish(*current));
  return graphs;
}

std::vector<Graph> parse_graphs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_graphs(in);
}

std::vector<Graph> read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file " + path);
  return parse_graphs(in);
}

std::string serialize_graph(const Graph& g) {
  std::string out = "t " + g.id() + "\n";
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out += "v " + std::to_string(v);
    if (g.has_node_labels()) out += " " + g.node_labels()[v];
    out += "\n";
  }
  std::vector<EdgeId> order(g.num_edges());
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::ranges::sort(order, [&](EdgeId a, EdgeId b) { return g.edge(a) < g.edge(b); });
  for (EdgeId e : order) {
    out += "e " + std::to_string(g.edge(e).u) + " " + std::to_string(g.edge(e).v);
    if (g.has_edge_labels()) out += " " + g.edge_labels()[e];
    out += "\n";
  }
  return out;
}

void write_graphs(std::ostream& out, std::span<const Graph> graphs) {
  for (const Graph& g : graphs) out << serialize_graph(g);
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
    case Split::unsplit: return "unsplit";
  }
  return "unsplit";
}

DatasetManifest parse_manifest(std::istream& in) {
  DatasetManifest m;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) throw ParseError(lineno, "expected '<graph_id>\\t<class_label>\\t<split>'");
    ManifestEntry entry{fields[0], fields[1], Split::unsplit};
    if (fields[2] == "train") {
      entry.split = Split::train;
    } else if (fields[2] == "valid") {
      entry.split = Split::valid;
    } else if (fields[2] == "test") {
      entry.split = Split::test;
    } else if (fields[2] != "unsplit") {
      throw ParseError(lineno, "unknown split '" + fields[2] + "'");
    }
    if (entry.graph_id.empty()) throw ParseError(lineno, "empty graph id");
    if (!ids.insert(entry.graph_id).second) throw ParseError(lineno, "duplicate graph id " + entry.graph_id);
    m.entries.push_back(std::move(entry));
  }
  return m;
}

DatasetManifest read_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path);
  return parse_manifest(in);
}

void write_manifest(std::ostream& out, const DatasetManifest& m) {
  for (const auto& e : m.entries) out << e.graph_id << '\t' << e.class_label << '\t' << to_string(e.split) << '\n';
}

std::vector<Graph> select_by_manifest(const std::vector<Graph>& graphs, const DatasetManifest& m) {
  std::unordered_map<std::string_view, const Graph*> by_id;
  for (const Graph& g : graphs) by_id.emplace(g.id(), &g);
  std::vector<Graph> out;
  out.reserve(m.entries.size());
  for (const auto& e : m.entries) {
    const auto it = by_id.find(e.graph_id);
    if (it == by_id.end()) throw DataError("manifest id " + e.graph_id + " not found in graph file");
    out.push_back(*it->second);
  }
  return out;
}

}  // namespace sge
