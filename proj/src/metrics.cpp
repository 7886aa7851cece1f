#include "tsclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tsclust/error.hpp"

namespace tsclust {

namespace {

std::vector<std::size_t> dense_codes(std::span<const int> labels, std::size_t& count) {
  std::map<int, std::size_t> code;
  for (int v : labels) code.emplace(v, 0);
  std::size_t next = 0;
  for (auto& [v, c] : code) c = next++;
  count = next;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (int v : labels) out.push_back(code[v]);
  return out;
}

void check_pair(std::span<const int> y_true, std::span<const int> y_pred, std::size_t min_n) {
  if (y_true.size() != y_pred.size())
    fail(ErrorCode::shape_mismatch, "label vectors differ in length");
  if (y_true.empty()) fail(ErrorCode::empty_input, "label vectors are empty");
  if (y_true.size() < min_n)
    fail(ErrorCode::invalid_input, "need at least " + std::to_string(min_n) + " labels");
}

std::int64_t pairs(std::int64_t c) { return c * (c - 1) / 2; }

/// Sum of (c/n) ln(c/n) over counts, adding smallest magnitudes first so
/// equal multisets of counts produce bit-identical results.
double neg_entropy_terms(std::vector<std::int64_t> counts, std::size_t n) {
  std::vector<double> terms;
  const double dn = static_cast<double>(n);
  for (auto c : counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / dn;
    terms.push_back(p * std::log(p));
  }
  std::sort(terms.begin(), terms.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

struct Entropies {
  double u, v, joint;
};

Entropies entropies(const ContingencyTable& t) {
  std::vector<std::int64_t> cells;
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) cells.push_back(t(r, c));
  return {-neg_entropy_terms(t.col_sums(), t.total()), -neg_entropy_terms(t.row_sums(), t.total()),
          -neg_entropy_terms(cells, t.total())};
}

double mi_from(const Entropies& h) {
  // H(U) - H(U,V) is exactly zero when V refines nothing beyond U.
  return std::max(0.0, h.v + (h.u - h.joint));
}

bool is_bijection(const ContingencyTable& t) {
  if (t.rows() != t.cols()) return false;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    std::size_t nonzero = 0;
    for (std::size_t c = 0; c < t.cols(); ++c) nonzero += t(r, c) != 0;
    if (nonzero != 1) return false;
  }
  return true;  // equal shape plus one nonzero per row forces one per column
}

}  // namespace

ContingencyTable::ContingencyTable(std::span<const int> y_true, std::span<const int> y_pred) {
  check_pair(y_true, y_pred, 1);
  const auto t = dense_codes(y_true, cols_);
  const auto p = dense_codes(y_pred, rows_);
  n_ = y_true.size();
  counts_.assign(rows_ * cols_, 0);
  row_sums_.assign(rows_, 0);
  col_sums_.assign(cols_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    ++counts_[p[i] * cols_ + t[i]];
    ++row_sums_[p[i]];
    ++col_sums_[t[i]];
  }
}

std::vector<std::size_t> hungarian_assignment(std::span<const double> cost, std::size_t rows,
                                              std::size_t cols) {
  if (rows > cols) fail(ErrorCode::invalid_input, "assignment needs rows <= cols");
  if (cost.size() != rows * cols) fail(ErrorCode::shape_mismatch, "cost matrix size mismatch");
  // Shortest augmenting paths with row/column potentials, 1-based internally.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> owner(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> out(rows, 0);
  for (std::size_t j = 1; j <= cols; ++j)
    if (owner[j] != 0) out[owner[j] - 1] = j - 1;
  return out;
}

double clustering_accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  const ContingencyTable t(y_true, y_pred);
  const std::size_t k = std::max(t.rows(), t.cols());
  std::int64_t top = 0;
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) top = std::max(top, t(r, c));
  // Padding cells have count 0, so surplus clusters or classes match nothing.
  std::vector<double> cost(k * k, static_cast<double>(top));
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c)
      cost[r * k + c] = static_cast<double>(top - t(r, c));
  const auto match = hungarian_assignment(cost, k, k);
  std::int64_t hits = 0;
  for (std::size_t r = 0; r < t.rows(); ++r)
    if (match[r] < t.cols()) hits += t(r, match[r]);
  return static_cast<double>(hits) / static_cast<double>(t.total());
}

namespace {

struct PairCounts {
  std::int64_t same_both, same_pred, same_true, total;
};

PairCounts pair_counts(std::span<const int> y_true, std::span<const int> y_pred) {
  check_pair(y_true, y_pred, 2);
  const ContingencyTable t(y_true, y_pred);
  PairCounts p{0, 0, 0, pairs(static_cast<std::int64_t>(t.total()))};
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) p.same_both += pairs(t(r, c));
  for (auto s : t.row_sums()) p.same_pred += pairs(s);
  for (auto s : t.col_sums()) p.same_true += pairs(s);
  return p;
}

}  // namespace

double rand_index(std::span<const int> y_true, std::span<const int> y_pred) {
  const auto p = pair_counts(y_true, y_pred);
  const std::int64_t agree = p.total + 2 * p.same_both - p.same_pred - p.same_true;
  return static_cast<double>(agree) / static_cast<double>(p.total);
}

double adjusted_rand_index(std::span<const int> y_true, std::span<const int> y_pred) {
  const auto p = pair_counts(y_true, y_pred);
  const double expected = static_cast<double>(p.same_pred) * static_cast<double>(p.same_true) /
                          static_cast<double>(p.total);
  const double max_index = 0.5 * static_cast<double>(p.same_pred + p.same_true);
  if (max_index == expected) return 0.0;
  return (static_cast<double>(p.same_both) - expected) / (max_index - expected);
}

double entropy(std::span<const int> labels) {
  if (labels.empty()) fail(ErrorCode::empty_input, "label vector is empty");
  std::size_t k = 0;
  const auto codes = dense_codes(labels, k);
  std::vector<std::int64_t> counts(k, 0);
  for (auto c : codes) ++counts[c];
  return -neg_entropy_terms(counts, labels.size());
}

double mutual_information(std::span<const int> y_true, std::span<const int> y_pred) {
  return mi_from(entropies(ContingencyTable(y_true, y_pred)));
}

double normalized_mi(std::span<const int> y_true, std::span<const int> y_pred) {
  const auto h = entropies(ContingencyTable(y_true, y_pred));
  const double denom = 0.5 * (h.u + h.v);
  if (denom <= 0.0) return 0.0;
  return std::min(1.0, mi_from(h) / denom);
}

double expected_mutual_information(const ContingencyTable& t) {
  const auto n = static_cast<std::int64_t>(t.total());
  const double dn = static_cast<double>(n);
  auto lf = [](std::int64_t v) { return std::lgamma(static_cast<double>(v) + 1.0); };
  const double lf_n = lf(n);
  double emi = 0.0;
  for (auto a : t.row_sums()) {
    for (auto b : t.col_sums()) {
      const double fixed = lf(a) + lf(b) + lf(n - a) + lf(n - b) - lf_n;
      const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
      const std::int64_t hi = std::min(a, b);
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const double term = static_cast<double>(nij) / dn *
                            std::log(dn * static_cast<double>(nij) /
                                     (static_cast<double>(a) * static_cast<double>(b)));
        const double log_p = fixed - lf(nij) - lf(a - nij) - lf(b - nij) - lf(n - a - b + nij);
        emi += term * std::exp(log_p);
      }
    }
  }
  return emi;
}

double adjusted_mi(std::span<const int> y_true, std::span<const int> y_pred) {
  const ContingencyTable t(y_true, y_pred);
  if (is_bijection(t)) return 1.0;
  const auto h = entropies(t);
  const double emi = expected_mutual_information(t);
  const double denom = 0.5 * (h.u + h.v) - emi;
  if (std::abs(denom) < 1e-15) return 0.0;
  return (mi_from(h) - emi) / denom;
}

SupervisedScores evaluate(std::span<const int> y_true, std::span<const int> y_pred) {
  SupervisedScores s;
  s.clacc = clustering_accuracy(y_true, y_pred);
  if (y_true.size() >= 2) {
    s.ri = rand_index(y_true, y_pred);
    s.ari = adjusted_rand_index(y_true, y_pred);
  } else {
    s.ri = std::numeric_limits<double>::quiet_NaN();
    s.ari = std::numeric_limits<double>::quiet_NaN();
  }
  s.mi = mutual_information(y_true, y_pred);
  s.nmi = normalized_mi(y_true, y_pred);
  s.ami = adjusted_mi(y_true, y_pred);
  return s;
}

double davies_bouldin(std::span<const TimeSeries> x, std::span<const int> assignments) {
  if (x.size() != assignments.size())
    fail(ErrorCode::shape_mismatch, "assignments and series differ in count");
  if (x.empty()) fail(ErrorCode::empty_input, "no series");
  int top = -1;
  for (int a : assignments) {
    if (a < 0) fail(ErrorCode::invalid_input, "negative cluster id");
    top = std::max(top, a);
  }
  const auto k = static_cast<std::size_t>(top + 1);
  if (k < 2) fail(ErrorCode::degenerate, "Davies-Bouldin needs at least two clusters");
  const std::size_t m = x.front().size();
  std::vector<std::vector<double>> centroid(k, std::vector<double>(m, 0.0));
  std::vector<std::size_t> size(k, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != m) fail(ErrorCode::shape_mismatch, "series differ in length");
    const auto c = static_cast<std::size_t>(assignments[i]);
    ++size[c];
    for (std::size_t t = 0; t < m; ++t) centroid[c][t] += x[i][t];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (size[c] == 0) fail(ErrorCode::invalid_input, "cluster " + std::to_string(c) + " is empty");
    for (auto& v : centroid[c]) v /= static_cast<double>(size[c]);
  }
  auto ed = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t t = 0; t < m; ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
    return std::sqrt(s);
  };
  std::vector<double> scatter(k, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(assignments[i]);
    scatter[c] += ed(x[i].values(), centroid[c]);
  }
  for (std::size_t c = 0; c < k; ++c) scatter[c] /= static_cast<double>(size[c]);

  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double sep = ed(centroid[i], centroid[j]);
      if (sep == 0.0) fail(ErrorCode::degenerate, "two clusters share a centroid");
      worst = std::max(worst, (scatter[i] + scatter[j]) / sep);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

}  // namespace tsclust
