#pragma once

#include <compare>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sge {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Any problem with input data (as opposed to a usage error).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input file; carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Undirected edge, stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

struct Incidence {
  NodeId node;
  EdgeId edge;
};

/// Simple undirected graph with optional discrete node and edge labels.
/// Labels are either present on every node (edge) or on none. Immutable once
/// constructed; the constructor validates the structure and throws DataError.
class Graph {
 public:
  Graph() = default;
  Graph(std::string id, std::size_t num_nodes, std::vector<Edge> edges,
        std::vector<std::string> node_labels = {}, std::vector<std::string> edge_labels = {});

  const std::string& id() const { return id_; }
  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Incidence> neighbors(NodeId v) const { return adjacency_[v]; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  bool has_node_labels() const { return !node_labels_.empty(); }
  bool has_edge_labels() const { return !edge_labels_.empty(); }
  std::span<const std::string> node_labels() const { return node_labels_; }
  std::span<const std::string> edge_labels() const { return edge_labels_; }

 private:
  std::string id_;
  std::vector<Edge> edges_;
  std::vector<std::string> node_labels_;
  std::vector<std::string> edge_labels_;
  std::vector<std::vector<Incidence>> adjacency_;
};

/// Same node count, same edge set, same labels on the same elements.
bool structurally_equal(const Graph& a, const Graph& b);

/// Component index per node (components numbered in order of their smallest node).
std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count = nullptr);

/// Connected edge-induced subgraph of a parent graph. `nodes[i]` is the parent
/// id of local node i; edges use local indices. Labels are inherited from the
/// parent and are empty when the parent is unlabeled.
struct Graphlet {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  std::vector<std::string> node_labels;
  std::vector<std::string> edge_labels;

  std::size_t t() const { return edges.size(); }
  std::size_t num_nodes() const { return nodes.size(); }
  bool labeled() const { return !node_labels.empty() || !edge_labels.empty(); }
};

/// Local adjacency lists of a graphlet, neighbors in ascending order.
std::vector<std::vector<NodeId>> adjacency(const Graphlet& g);

bool is_connected(const Graphlet& g);

/// Treat a whole graph as one graphlet (identity node mapping).
Graphlet as_graphlet(const Graph& g);

/// Graphlet as a standalone graph with nodes 0..n-1.
Graph to_graph(const Graphlet& g, std::string id);

/// Graphlet with node i moved to position perm[i]; labels travel with their nodes.
Graphlet permute(const Graphlet& g, std::span<const NodeId> perm);

std::vector<Graph> parse_graphs(std::istream& in);
std::vector<Graph> parse_graphs(std::string_view text);
std::vector<Graph> read_graph_file(const std::string& path);

/// Canonical transaction-format text: nodes by index, edges sorted by (min, max).
std::string serialize_graph(const Graph& g);
void write_graphs(std::ostream& out, std::span<const Graph> graphs);

enum class Split { train, valid, test, unsplit };
std::string_view to_string(Split s);

struct ManifestEntry {
  std::string graph_id;
  std::string class_label;
  Split split = Split::unsplit;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

DatasetManifest parse_manifest(std::istream& in);
DatasetManifest read_manifest_file(const std::string& path);
void write_manifest(std::ostream& out, const DatasetManifest& m);

/// Reorders `graphs` to follow the manifest; throws DataError for ids the
/// graph file does not contain.
std::vector<Graph> select_by_manifest(const std::vector<Graph>& graphs, const DatasetManifest& m);

}  // namespace sge
