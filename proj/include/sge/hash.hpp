#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sge/graph.hpp"
#include "sge/rational.hpp"

namespace sge {

enum class HashFunctionId { degree, betweenness, core, clustering, automatic };

std::string_view to_string(HashFunctionId f);
/// Accepts degree, betweenness, core, clustering, auto.
HashFunctionId parse_hash_function(std::string_view name);
/// `automatic` becomes degree for t <= 4 and betweenness above; others unchanged.
HashFunctionId resolve(HashFunctionId f, std::size_t t);

/// Rank used to break E(f) ties: cheaper functions first.
int compute_cost_rank(HashFunctionId f);

// Per-node measures, indexed by local node.
std::vector<std::int64_t> node_degrees(const Graphlet& g);
std::vector<Rational> node_betweenness(const Graphlet& g);
std::vector<std::int64_t> node_core_numbers(const Graphlet& g);
std::vector<Rational> node_clustering(const Graphlet& g);

// The same measures sorted ascending.
std::vector<std::int64_t> degree_vector(const Graphlet& g);
std::vector<Rational> betweenness_vector(const Graphlet& g);
std::vector<std::int64_t> core_vector(const Graphlet& g);
std::vector<Rational> clustering_vector(const Graphlet& g);

struct HashCode {
  std::size_t t = 0;
  HashFunctionId fn = HashFunctionId::degree;
  std::string topo_key;
  std::string node_label_key;
  std::string edge_label_key;

  /// `<t>|<fn>|<values>|<nodeLabels>|<edgeLabels>`, the persisted vocabulary key.
  std::string str() const;
  friend bool operator==(const HashCode&, const HashCode&) = default;
};

/// Permutation-invariant code of a graphlet. Labels contribute only when
/// `use_labels` is set and the graphlet carries them.
HashCode hash_code(const Graphlet& g, HashFunctionId fn, bool use_labels = true);

struct CollisionReport;

/// argmin of E(f) at size t over the candidates' reports (reports[i] belongs
/// to candidates[i]); ties go to the cheaper function.
HashFunctionId select_hash_function(std::span<const HashFunctionId> candidates, std::size_t t,
                                    std::span<const CollisionReport> reports);

/// Escapes `%`, `,` and `|` so labels cannot break the code grammar.
std::string escape_label(std::string_view label);

}  // namespace sge
