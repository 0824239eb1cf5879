#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sge/graph.hpp"
#include "sge/hash.hpp"
#include "sge/sampler.hpp"

namespace sge {

/// Code key -> number of sampled graphlets carrying it, for one graph.
using CodeCounts = std::map<std::string, std::uint64_t>;

struct GraphHistogram {
  std::string graph_id;
  CodeCounts counts;
  std::uint64_t dead_end_runs = 0;
  std::uint64_t sampled = 0;  // graphlets counted (sum of counts)
};

struct EmbeddingMeta {
  std::uint64_t runs = 0;  // M (the largest per-size budget when budgets differ)
  std::uint32_t max_edges = 0;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  HashFunctionId fn = HashFunctionId::automatic;
  std::uint32_t t_min = 1;
  bool labeled = false;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Sorts and deduplicates the keys.
  explicit Vocabulary(std::vector<std::string> keys);
  /// Keeps the given order (line number = bin); throws DataError on duplicates.
  static Vocabulary in_order(std::vector<std::string> keys);

  std::size_t size() const { return entries_.size(); }
  std::span<const std::string> entries() const { return entries_; }
  /// Bin of `key`, or size() when the key is unknown.
  std::size_t index_of(const std::string& key) const;

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Embedding {
  std::string graph_id;
  std::vector<std::int64_t> counts;
  EmbeddingMeta meta;
  std::uint64_t oov_count = 0;  // graphlets whose code is missing from the vocabulary
};

/// Samples g and counts the codes of every graphlet with t >= t_min.
GraphHistogram embed_graph(const Graph& g, const SamplerParams& params, HashFunctionId fn, std::uint32_t t_min,
                           bool use_labels = false, unsigned threads = 1);

/// Per-size budgets: for each t in [t_min, T], `runs_per_t[t - t_min]` separate
/// runs of length t contribute only their size-t graphlet.
GraphHistogram embed_graph_per_size(const Graph& g, std::span<const std::uint64_t> runs_per_t,
                                    const SamplerParams& params, HashFunctionId fn, std::uint32_t t_min,
                                    bool use_labels = false, unsigned threads = 1);

/// Sorted union of all keys; independent of input order.
Vocabulary build_vocabulary(std::span<const GraphHistogram> histograms);

/// Dense vectors aligned to `vocab`; unknown codes are dropped and counted in oov_count.
std::vector<Embedding> finalize_embeddings(std::span<const GraphHistogram> histograms, const Vocabulary& vocab,
                                           const EmbeddingMeta& meta);

struct LabeledEmbedding {
  Vocabulary vocab;
  Embedding embedding;
};

/// Concatenates one graph's embeddings over several t ranges. Throws DataError
/// when the graph ids differ.
LabeledEmbedding concat_embeddings(std::span<const LabeledEmbedding> parts);

std::vector<double> as_values(const Embedding& e, bool l1_normalize = false);

void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in);

/// A row of an embedding file; values are counts or normalized frequencies.
struct EmbeddingRow {
  std::string graph_id;
  std::vector<double> values;
};

/// Header `graph_id<TAB>bin0<TAB>bin1...`, then one row per embedding.
void write_embeddings(std::ostream& out, std::span<const Embedding> embeddings, bool l1_normalize = false);
std::vector<EmbeddingRow> read_embeddings(std::istream& in);
std::vector<EmbeddingRow> read_embedding_file(const std::string& path);

/// `%.17g`: 17 significant digits, enough to round-trip any double.
std::string format_real(double x);

}  // namespace sge
