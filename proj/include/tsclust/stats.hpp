#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tsclust {

/// Scores for datasets (rows) x algorithms (columns); higher is better.
struct ResultsTable {
  std::vector<std::string> datasets;
  std::vector<std::string> algorithms;
  std::vector<std::vector<double>> scores;  // scores[dataset][algorithm]

  void validate() const;
  std::vector<double> column(std::size_t algorithm) const;
};

/// Mid-ranks of one row, rank 1 for the largest value.
std::vector<double> rank_descending(std::span<const double> row);
std::vector<double> average_ranks(const ResultsTable& table);

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n = 0;  // nonzero differences
  bool exact = false;
};

/// Two-sided signed-rank test on x - y. Zero differences are dropped; ties
/// get mid-ranks. Exact null for n <= 25, normal approximation above.
/// Throws undefined_test when every difference is zero.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

/// Holm step-down. Returns the rejected flag for each input p-value.
std::vector<bool> holm_reject(std::span<const double> p_values, double alpha = 0.05);

struct PairwiseTest {
  std::size_t a = 0, b = 0;  // indices into the ordered algorithm list
  double p_value = 1.0;
  bool defined = true;
  bool significant = false;
};

struct CliqueAnalysis {
  /// Algorithms ordered by mean rank (ties by name).
  std::vector<std::string> order;
  std::vector<double> ranks;
  std::vector<PairwiseTest> tests;
  /// Maximal rank-adjacent runs of two or more with no significant pair,
  /// as [first, last] positions into `order`.
  std::vector<std::pair<std::size_t, std::size_t>> cliques;
  double alpha = 0.05;
  std::size_t datasets = 0;
};

CliqueAnalysis holm_cliques(const ResultsTable& table, double alpha = 0.05);

struct CdOutput {
  std::string text;
  std::string json;
  std::string svg;
};

CdOutput emit_cd_output(const CliqueAnalysis& analysis, const std::string& metric = {});

}  // namespace tsclust
