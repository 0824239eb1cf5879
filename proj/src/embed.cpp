#include "sge/embed.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sge/parallel.hpp"

namespace sge {

Vocabulary::Vocabulary(std::vector<std::string> keys) : entries_(std::move(keys)) {
  std::ranges::sort(entries_);
  const auto dup = std::ranges::unique(entries_);
  entries_.erase(dup.begin(), dup.end());
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i], i);
}

Vocabulary Vocabulary::in_order(std::vector<std::string> keys) {
  Vocabulary v;
  v.entries_ = std::move(keys);
  v.index_.reserve(v.entries_.size());
  for (std::size_t i = 0; i < v.entries_.size(); ++i) {
    if (!v.index_.emplace(v.entries_[i], i).second) throw DataError("duplicate vocabulary key " + v.entries_[i]);
  }
  return v;
}

std::size_t Vocabulary::index_of(const std::string& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? entries_.size() : it->second;
}

namespace {

constexpr std::uint64_t kRunsPerChunk = 256;

struct ChunkResult {
  CodeCounts counts;
  std::uint64_t dead_ends = 0;
  std::uint64_t sampled = 0;
};

// Runs [0, params.runs) split into fixed chunks; merging is a commutative sum,
// so the result does not depend on how chunks are scheduled.
GraphHistogram sample_and_count(const Graph& g, const SamplerParams& params, HashFunctionId fn,
                                std::uint32_t t_min, std::uint32_t t_max, bool use_labels, unsigned threads) {
  const std::uint64_t chunks = (params.runs + kRunsPerChunk - 1) / kRunsPerChunk;
  std::vector<ChunkResult> results(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    ChunkResult& out = results[c];
    const std::uint64_t end = std::min<std::uint64_t>(params.runs, (c + 1) * kRunsPerChunk);
    for (std::uint64_t run = c * kRunsPerChunk; run < end; ++run) {
      const RunTrace trace = sample_run(g, params, run);
      if (trace.dead_end) ++out.dead_ends;
      for (const Graphlet& graphlet : trace.graphlets) {
        if (graphlet.t() < t_min || graphlet.t() > t_max) continue;
        ++out.counts[hash_code(graphlet, fn, use_labels).str()];
        ++out.sampled;
      }
    }
  });
  GraphHistogram h;
  h.graph_id = g.id();
  for (const ChunkResult& r : results) {
    for (const auto& [key, n] : r.counts) h.counts[key] += n;
    h.dead_end_runs += r.dead_ends;
    h.sampled += r.sampled;
  }
  return h;
}

void check_t_min(const SamplerParams& params, std::uint32_t t_min) {
  if (t_min < 1 || t_min > params.max_edges) throw std::invalid_argument("t_min must lie in [1, T]");
}

}  // namespace

GraphHistogram embed_graph(const Graph& g, const SamplerParams& params, HashFunctionId fn, std::uint32_t t_min,
                           bool use_labels, unsigned threads) {
  params.validate();
  check_t_min(params, t_min);
  if (g.num_edges() == 0) throw DataError("graph " + g.id() + " has no edges");
  return sample_and_count(g, params, fn, t_min, params.max_edges, use_labels, threads);
}

GraphHistogram embed_graph_per_size(const Graph& g, std::span<const std::uint64_t> runs_per_t,
                                    const SamplerParams& params, HashFunctionId fn, std::uint32_t t_min,
                                    bool use_labels, unsigned threads) {
  params.validate();
  check_t_min(params, t_min);
  if (runs_per_t.size() != params.max_edges - t_min + 1) {
    throw std::invalid_argument("one run budget per size in [t_min, T] required");
  }
  if (g.num_edges() == 0) throw DataError("graph " + g.id() + " has no edges");
  GraphHistogram total;
  total.graph_id = g.id();
  for (std::uint32_t t = t_min; t <= params.max_edges; ++t) {
    SamplerParams sized = params;
    sized.runs = runs_per_t[t - t_min];
    sized.max_edges = t;
    sized.seed = run_seed(params.seed, "size", t);
    const GraphHistogram part = sample_and_count(g, sized, fn, t, t, use_labels, threads);
    for (const auto& [key, n] : part.counts) total.counts[key] += n;
    total.dead_end_runs += part.dead_end_runs;
    total.sampled += part.sampled;
  }
  return total;
}

Vocabulary build_vocabulary(std::span<const GraphHistogram> histograms) {
  std::vector<std::string> keys;
  for (const GraphHistogram& h : histograms) {
    for (const auto& [key, n] : h.counts) keys.push_back(key);
  }
  return Vocabulary(std::move(keys));
}

std::vector<Embedding> finalize_embeddings(std::span<const GraphHistogram> histograms, const Vocabulary& vocab,
                                           const EmbeddingMeta& meta) {
  std::vector<Embedding> out;
  out.reserve(histograms.size());
  for (const GraphHistogram& h : histograms) {
    Embedding e;
    e.graph_id = h.graph_id;
    e.meta = meta;
    e.counts.assign(vocab.size(), 0);
    for (const auto& [key, n] : h.counts) {
      const std::size_t bin = vocab.index_of(key);
      if (bin == vocab.size()) {
        e.oov_count += n;
      } else {
        e.counts[bin] += static_cast<std::int64_t>(n);
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

LabeledEmbedding concat_embeddings(std::span<const LabeledEmbedding> parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to concatenate");
  std::vector<std::string> keys;
  LabeledEmbedding out;
  out.embedding.graph_id = parts.front().embedding.graph_id;
  out.embedding.meta = parts.front().embedding.meta;
  for (const LabeledEmbedding& p : parts) {
    if (p.embedding.graph_id != out.embedding.graph_id) {
      throw DataError("cannot concatenate embeddings of " + out.embedding.graph_id + " and " + p.embedding.graph_id);
    }
    if (p.embedding.counts.size() != p.vocab.size()) throw DataError("embedding not aligned to its vocabulary");
    keys.insert(keys.end(), p.vocab.entries().begin(), p.vocab.entries().end());
    out.embedding.counts.insert(out.embedding.counts.end(), p.embedding.counts.begin(), p.embedding.counts.end());
    out.embedding.oov_count += p.embedding.oov_count;
    out.embedding.meta.t_min = std::min(out.embedding.meta.t_min, p.embedding.meta.t_min);
    out.embedding.meta.max_edges = std::max(out.embedding.meta.max_edges, p.embedding.meta.max_edges);
  }
  out.vocab = Vocabulary::in_order(std::move(keys));
  return out;
}

std::vector<double> as_values(const Embedding& e, bool l1_normalize) {
  std::vector<double> v(e.counts.begin(), e.counts.end());
  if (l1_normalize) {
    double sum = 0.0;
    for (double x : v) sum += x;
    if (sum > 0.0) {
      for (double& x : v) x /= sum;
    }
  }
  return v;
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (const std::string& key : vocab.entries()) out << key << '\n';
}

Vocabulary read_vocabulary(std::istream& in) {
  std::vector<std::string> keys;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) keys.push_back(line);
  }
  return Vocabulary::in_order(std::move(keys));
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_embeddings(std::ostream& out, std::span<const Embedding> embeddings, bool l1_normalize) {
  const std::size_t dim = embeddings.empty() ? 0 : embeddings.front().counts.size();
  out << "graph_id";
  for (std::size_t i = 0; i < dim; ++i) out << "\tbin" << i;
  out << '\n';
  for (const Embedding& e : embeddings) {
    if (e.counts.size() != dim) throw std::invalid_argument("embeddings of different dimension");
    out << e.graph_id;
    if (l1_normalize) {
      for (double x : as_values(e, true)) out << '\t' << format_real(x);
    } else {
      for (std::int64_t c : e.counts) out << '\t' << c;
    }
    out << '\n';
  }
}

std::vector<EmbeddingRow> read_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("graph_id", 0) != 0) {
    throw ParseError(1, "embedding file must start with a graph_id header");
  }
  const auto dim = static_cast<std::size_t>(std::ranges::count(line, '\t'));
  std::vector<EmbeddingRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    EmbeddingRow row;
    std::string field;
    std::getline(fields, row.graph_id, '\t');
    while (std::getline(fields, field, '\t')) {
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(lineno, "invalid embedding value '" + field + "'");
      }
      row.values.push_back(value);
    }
    if (row.values.size() != dim) throw ParseError(lineno, "row length does not match header");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EmbeddingRow> read_embedding_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path);
  return read_embeddings(in);
}

}  // namespace sge
