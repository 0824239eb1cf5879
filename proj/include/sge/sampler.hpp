#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sge/graph.hpp"

namespace sge {

struct SamplerParams {
  std::uint64_t runs = 1;       // M
  std::uint32_t max_edges = 1;  // T
  double alpha = 0.5;           // probability of extending from the last reached node
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when M < 1, T < 1 or alpha outside [0, 1].
  void validate() const;
};

/// Snapshots of one random walk: graphlets[i] has i + 1 edges and extends
/// graphlets[i - 1] by exactly one edge.
struct RunTrace {
  std::vector<Graphlet> graphlets;
  bool dead_end = false;
};

/// Stable 64-bit mix of (seed, graph id, run index); the seed of run `run_index`.
std::uint64_t run_seed(std::uint64_t seed, std::string_view graph_id, std::uint64_t run_index);

/// Portable generator wrapper: the engine is fully specified by the standard
/// and the bounded/real draws below are implemented here, so streams are
/// identical across standard libraries.
class RunRng {
 public:
  explicit RunRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform real in [0, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// One run of the random walk with restarts. Throws DataError for edgeless graphs.
RunTrace sample_run(const Graph& g, const SamplerParams& params, std::uint64_t run_index);

/// Runs 0..M-1, concurrently on up to `threads` workers; result is in run order.
std::vector<RunTrace> sample_all(const Graph& g, const SamplerParams& params, unsigned threads = 1);

/// ceil(2 (a ln 2 + ln(1/delta)) / epsilon^2): runs sufficient for the empirical
/// distribution over `a` classes to be within epsilon (L1) with probability 1 - delta.
std::uint64_t sample_size(std::uint64_t a, double epsilon, double delta);

/// Number of non-isomorphic connected graphs with t edges, t in [1, 10].
std::uint64_t graphlet_count_table(int t);

}  // namespace sge
