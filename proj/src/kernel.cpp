#include "sge/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sge/embed.hpp"
#include "sge/parallel.hpp"

namespace sge {

std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::dot: return "dot";
    case KernelKind::rbf: return "rbf";
    case KernelKind::hist_intersection: return "hist-int";
    case KernelKind::cosine: return "cosine";
  }
  return "dot";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "dot") return KernelKind::dot;
  if (name == "rbf") return KernelKind::rbf;
  if (name == "hist-int" || name == "hist_intersection") return KernelKind::hist_intersection;
  if (name == "cosine") return KernelKind::cosine;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (kind == KernelKind::rbf) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("rbf kernel needs a positive gamma");
  } else if (gamma != 0.0) {
    throw std::invalid_argument("gamma applies only to the rbf kernel");
  }
}

double kernel_value(std::span<const double> x, std::span<const double> y, const KernelSpec& spec) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("embedding lengths differ: " + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()));
  }
  switch (spec.kind) {
    case KernelKind::dot: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
      return s;
    }
    case KernelKind::rbf: {
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] - y[i]) * (x[i] - y[i]);
      return std::exp(-spec.gamma * d);
    }
    case KernelKind::hist_intersection: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += std::min(x[i], y[i]);
      return s;
    }
    case KernelKind::cosine: {
      double dot = 0.0;
      double xx = 0.0;
      double yy = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        xx += x[i] * x[i];
        yy += y[i] * y[i];
      }
      if (xx == 0.0 || yy == 0.0) return 0.0;
      // clamp: rounding can push the self-similarity just above 1
      return std::clamp(dot / (std::sqrt(xx) * std::sqrt(yy)), -1.0, 1.0);
    }
  }
  return 0.0;
}

KernelMatrix kernel_matrix(std::span<const std::vector<double>> embeddings, const KernelSpec& spec,
                           unsigned threads) {
  spec.validate();
  if (embeddings.empty()) throw std::invalid_argument("kernel matrix of an empty list");
  const std::size_t n = embeddings.size();
  for (const auto& e : embeddings) {
    if (e.size() != embeddings.front().size()) throw std::invalid_argument("embeddings of different lengths");
  }
  KernelMatrix k(n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) k(i, j) = kernel_value(embeddings[i], embeddings[j], spec);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) k(i, j) = k(j, i);
  }
  return k;
}

std::vector<std::size_t> rank_by_similarity(std::span<const double> similarities, std::size_t exclude) {
  std::vector<std::size_t> order;
  order.reserve(similarities.size());
  for (std::size_t i = 0; i < similarities.size(); ++i) {
    if (i != exclude) order.push_back(i);
  }
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return similarities[a] > similarities[b]; });
  return order;
}

std::string majority_label(std::span<const std::size_t> ranked, std::span<const std::string> labels, std::size_t k) {
  if (k == 0 || k > ranked.size()) throw std::invalid_argument("k must lie in [1, number of candidates]");
  std::map<std::string_view, std::size_t> votes;
  for (std::size_t i = 0; i < k; ++i) ++votes[labels[ranked[i]]];
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return std::string(best->first);
}

std::string knn_classify(std::span<const std::vector<double>> train, std::span<const std::string> labels,
                         std::span<const double> query, std::size_t k, const KernelSpec& spec) {
  spec.validate();
  if (train.empty()) throw std::invalid_argument("empty training set");
  if (labels.size() != train.size()) throw std::invalid_argument("one label per training item required");
  if (k == 0 || k > train.size()) throw std::invalid_argument("k must lie in [1, |train|]");
  std::vector<double> sims(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) sims[i] = kernel_value(train[i], query, spec);
  const auto ranked = rank_by_similarity(sims);
  return majority_label(ranked, labels, k);
}

std::vector<std::uint64_t> knn_retrieval_scores(const KernelMatrix& similarity, std::span<const std::string> labels,
                                                std::size_t k) {
  const std::size_t n = similarity.size();
  if (n == 0) throw std::invalid_argument("empty dataset");
  if (labels.size() != n) throw std::invalid_argument("one label per item required");
  if (k == 0 || k >= n) throw std::invalid_argument("k must lie in [1, n - 1]");
  std::vector<std::uint64_t> hits(k, 0);
  for (std::size_t q = 0; q < n; ++q) {
    const auto ranked = rank_by_similarity(similarity.row(q), q);
    for (std::size_t j = 0; j < k; ++j) {
      if (labels[ranked[j]] == labels[q]) ++hits[j];
    }
  }
  return hits;
}

std::vector<std::uint64_t> knn_retrieval_scores(std::span<const std::vector<double>> dataset,
                                                std::span<const std::string> labels, std::size_t k,
                                                const KernelSpec& spec, unsigned threads) {
  if (dataset.empty()) throw std::invalid_argument("empty dataset");
  return knn_retrieval_scores(kernel_matrix(dataset, spec, threads), labels, k);
}

double rho_score(const RankingPair& pair) {
  if (pair.r_cg < 1 || pair.r_gc < 1) throw std::invalid_argument("ranks start at 1");
  return 0.5 * (1.0 / static_cast<double>(pair.r_cg) + 1.0 / static_cast<double>(pair.r_gc));
}

void write_precomputed_kernel(std::ostream& out, const KernelMatrix& k, std::span<const std::string> labels) {
  if (labels.size() != k.size()) throw std::invalid_argument("one label per kernel row required");
  for (std::size_t i = 0; i < k.size(); ++i) {
    out << labels[i] << " 0:" << (i + 1);
    for (std::size_t j = 0; j < k.size(); ++j) out << ' ' << (j + 1) << ':' << format_real(k(i, j));
    out << '\n';
  }
}

void write_retrieval_report(std::ostream& out, std::span<const std::uint64_t> hits) {
  out << "rank\thit_count\n";
  for (std::size_t j = 0; j < hits.size(); ++j) out << (j + 1) << '\t' << hits[j] << '\n';
}

}  // namespace sge
