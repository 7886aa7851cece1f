#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tsclust/series.hpp"

namespace tsclust {

/// Cross-tabulation of predicted clusters (rows) against true classes
/// (columns). Both label vectors are remapped to dense codes first.
class ContingencyTable {
 public:
  ContingencyTable(std::span<const int> y_true, std::span<const int> y_pred);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t total() const noexcept { return n_; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return counts_[r * cols_ + c]; }
  const std::vector<std::int64_t>& row_sums() const noexcept { return row_sums_; }
  const std::vector<std::int64_t>& col_sums() const noexcept { return col_sums_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t n_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> row_sums_;
  std::vector<std::int64_t> col_sums_;
};

/// Minimum-cost perfect assignment on a rows x cols matrix (rows <= cols).
/// Returns the column chosen for each row.
std::vector<std::size_t> hungarian_assignment(std::span<const double> cost, std::size_t rows,
                                              std::size_t cols);

double clustering_accuracy(std::span<const int> y_true, std::span<const int> y_pred);
double rand_index(std::span<const int> y_true, std::span<const int> y_pred);
double adjusted_rand_index(std::span<const int> y_true, std::span<const int> y_pred);
/// Natural-log mutual information.
double mutual_information(std::span<const int> y_true, std::span<const int> y_pred);
double normalized_mi(std::span<const int> y_true, std::span<const int> y_pred);
double adjusted_mi(std::span<const int> y_true, std::span<const int> y_pred);
/// Expected MI under the hypergeometric permutation model.
double expected_mutual_information(const ContingencyTable& table);
double entropy(std::span<const int> labels);

struct SupervisedScores {
  double clacc = 0, ri = 0, ari = 0, mi = 0, nmi = 0, ami = 0;
};
SupervisedScores evaluate(std::span<const int> y_true, std::span<const int> y_pred);

/// Davies-Bouldin index in Euclidean space with arithmetic-mean centroids.
/// Cluster ids are used as given; every id in [0, max id] must be present.
double davies_bouldin(std::span<const TimeSeries> x, std::span<const int> assignments);

}  // namespace tsclust
