#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sge {

enum class KernelKind { dot, rbf, hist_intersection, cosine };

std::string_view to_string(KernelKind k);
/// Accepts dot, rbf, hist-int (or hist_intersection), cosine.
KernelKind parse_kernel_kind(std::string_view name);

struct KernelSpec {
  KernelKind kind = KernelKind::dot;
  double gamma = 0.0;  // rbf only

  /// gamma must be positive for rbf and unset (0) for every other kind.
  void validate() const;
};

/// Throws std::invalid_argument on length mismatch.
double kernel_value(std::span<const double> x, std::span<const double> y, const KernelSpec& spec);

/// Dense symmetric n x n matrix, row-major.
class KernelMatrix {
 public:
  explicit KernelMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Upper triangle computed (rows in parallel) and mirrored, so K(i,j) == K(j,i) exactly.
KernelMatrix kernel_matrix(std::span<const std::vector<double>> embeddings, const KernelSpec& spec,
                           unsigned threads = 1);

/// Indices sorted by decreasing similarity, ties by index; `exclude` is skipped.
std::vector<std::size_t> rank_by_similarity(std::span<const double> similarities,
                                            std::size_t exclude = static_cast<std::size_t>(-1));

/// Most frequent label among the first k ranked items; ties go to the
/// lexicographically smallest label.
std::string majority_label(std::span<const std::size_t> ranked, std::span<const std::string> labels, std::size_t k);

std::string knn_classify(std::span<const std::vector<double>> train, std::span<const std::string> labels,
                         std::span<const double> query, std::size_t k, const KernelSpec& spec);

/// hits[j] = number of queries whose (j+1)-th nearest other item shares their label.
std::vector<std::uint64_t> knn_retrieval_scores(std::span<const std::vector<double>> dataset,
                                                std::span<const std::string> labels, std::size_t k,
                                                const KernelSpec& spec, unsigned threads = 1);
/// Same, from a precomputed similarity matrix.
std::vector<std::uint64_t> knn_retrieval_scores(const KernelMatrix& similarity, std::span<const std::string> labels,
                                                std::size_t k);

struct RankingPair {
  std::uint64_t r_cg = 1;  // ground-truth rank of the system's top model
  std::uint64_t r_gc = 1;  // system rank of the ground truth's top model
};

/// (1/r_cg + 1/r_gc) / 2.
double rho_score(const RankingPair& pair);

/// One row per item: `<label> 0:<i+1> 1:<K(i,0)> ... n:<K(i,n-1)>`.
void write_precomputed_kernel(std::ostream& out, const KernelMatrix& k, std::span<const std::string> labels);

/// `rank<TAB>hit_count` with ranks from 1.
void write_retrieval_report(std::ostream& out, std::span<const std::uint64_t> hits);

}  // namespace sge
