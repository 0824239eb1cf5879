#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "sge/graph.hpp"
#include "sge/hash.hpp"
#include "sge/rational.hpp"

namespace sge {

/// Largest graph the isomorphism oracle accepts.
inline constexpr std::size_t kMaxOracleNodes = 12;
/// Largest edge count enumerate_connected supports.
inline constexpr std::size_t kMaxEnumeratedEdges = 10;

/// Exact isomorphism test by backtracking (labels must match when present).
/// Throws std::invalid_argument if either graph exceeds kMaxOracleNodes.
bool is_isomorphic(const Graphlet& a, const Graphlet& b);

/// One representative per isomorphism class of connected simple graphs with
/// t edges, in deterministic generation order.
std::vector<Graphlet> enumerate_connected(std::size_t t);

/// Every level 1..max_t, reusing each level to build the next.
std::vector<std::vector<Graphlet>> enumerate_connected_levels(std::size_t max_t);

/// Collision statistics of a hash function over all classes of size t.
///
/// `n_collisions` counts graphs whose code was already taken by an earlier
/// class, i.e. n_graphs minus the number of distinct codes. `colliding_pairs`
/// lists every pair (i, j), i < j, of classes sharing a code; a code shared by
/// k classes adds k - 1 to n_collisions and k(k-1)/2 pairs.
struct CollisionReport {
  HashFunctionId fn = HashFunctionId::degree;
  std::size_t t = 0;
  std::uint64_t n_graphs = 0;
  std::uint64_t n_pairs = 0;
  std::uint64_t n_collisions = 0;
  Rational e_f;  // n_collisions / n_pairs, 0 when there are no pairs
  std::vector<std::pair<std::size_t, std::size_t>> colliding_pairs;
  std::vector<Graphlet> graphs;  // the enumerated representatives
};

CollisionReport collision_report(HashFunctionId fn, std::size_t t, unsigned threads = 1);
CollisionReport collision_report(HashFunctionId fn, std::size_t t, const std::vector<Graphlet>& graphs,
                                 unsigned threads = 1);

/// `fn t n_graphs n_pairs n_collisions e_f e_f_decimal` header line.
void write_report_header(std::ostream& out);
/// One TSV row for the report.
void write_report_row(std::ostream& out, const CollisionReport& r);
/// Colliding pairs as transaction blocks `pair<k>_a` / `pair<k>_b`.
void write_colliding_pairs(std::ostream& out, const CollisionReport& r);

/// e_f rounded to `digits` decimals.
std::string format_decimal(const Rational& r, int digits);

}  // namespace sge
