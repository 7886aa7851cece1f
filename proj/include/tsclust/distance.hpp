#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsclust/series.hpp"

namespace tsclust {

enum class Measure { ed, dtw, ddtw, wdtw, wddtw, lcss, edr, erp, msm, twe };

std::string_view to_string(Measure m) noexcept;
/// Throws unknown_measure for names outside the registry.
Measure parse_measure(std::string_view name);
std::span<const Measure> all_measures() noexcept;

/// A measure plus its full parameter bundle. Parameters that the measure does
/// not read are still carried so the canonical string round-trips.
struct DistanceSpec {
  Measure measure = Measure::dtw;
  double window = 0.2;      // dtw, ddtw: Sakoe-Chiba fraction of m
  double wdtw_g = 0.05;     // wdtw, wddtw: logistic steepness
  double epsilon = 0.05;    // lcss, edr: match threshold
  double erp_gap = 0.05;    // erp: reference value for gaps
  double msm_cost = 1.0;    // msm: split/merge constant
  double twe_nu = 0.05;     // twe: stiffness
  double twe_lambda = 1.0;  // twe: edit penalty
  bool edr_normalize = false;

  static DistanceSpec named(std::string_view name);

  /// Throws invalid_input when a parameter is outside its domain.
  void validate() const;

  /// `metric=dtw;window=0.2;...` with every field, reals at 6 significant digits.
  std::string canonical() const;
  static DistanceSpec parse_canonical(std::string_view text);

  friend bool operator==(const DistanceSpec&, const DistanceSpec&) = default;
};

/// Stand-in for +infinity in accumulation grids. Adding any feasible path
/// cost to it stays finite.
inline constexpr double kInfinity = std::numeric_limits<double>::max() / 2;

/// Sakoe-Chiba radius: cells with |i-j| <= floor(w*m) are inside the band.
std::size_t band_radius(double window, std::size_t m);

/// (m+1) x (m+1) accumulation grid, indexed from zero. Row/column 0 hold each
/// measure's boundary values.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t m, std::size_t radius);

  std::size_t length() const noexcept { return m_; }
  std::size_t radius() const noexcept { return radius_; }
  bool in_band(std::size_t i, std::size_t j) const noexcept {
    return (i > j ? i - j : j - i) <= radius_;
  }

  double operator()(std::size_t i, std::size_t j) const {
    return cells_[i * (m_ + 1) + j];
  }
  double& at(std::size_t i, std::size_t j) { return cells_[i * (m_ + 1) + j]; }

 private:
  std::size_t m_ = 0;
  std::size_t radius_ = 0;
  std::vector<double> cells_;
};

/// 1-based (i, j) pair; i indexes the first series.
struct IndexPair {
  std::size_t i;
  std::size_t j;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

using AlignmentPath = std::vector<IndexPair>;

struct PathResult {
  AlignmentPath path;
  double distance = 0.0;
};

double euclidean(std::span<const double> a, std::span<const double> b);
double dtw(std::span<const double> a, std::span<const double> b,
           double window = 0.2);
double ddtw(std::span<const double> a, std::span<const double> b,
            double window = 0.2);
double wdtw(std::span<const double> a, std::span<const double> b,
            double g = 0.05);
double wddtw(std::span<const double> a, std::span<const double> b,
             double g = 0.05);
std::size_t lcss_match_length(std::span<const double> a,
                              std::span<const double> b,
                              double epsilon = 0.05);
double lcss(std::span<const double> a, std::span<const double> b,
            double epsilon = 0.05);
double edr(std::span<const double> a, std::span<const double> b,
           double epsilon = 0.05, bool normalize = false);
double erp(std::span<const double> a, std::span<const double> b,
           double gap = 0.05);
/// Split/merge cost of x given neighbours y and z.
double msm_cost(double x, double y, double z, double c);
double msm(std::span<const double> a, std::span<const double> b,
           double c = 1.0);
double twe(std::span<const double> a, std::span<const double> b,
           double nu = 0.05, double lambda = 1.0);

/// Logistic WDTW weight for a warping of `d` places on length-m series.
double wdtw_weight(std::size_t d, std::size_t m, double g);

double distance(std::span<const double> a, std::span<const double> b,
                const DistanceSpec& spec);

/// Full accumulation grid for any measure except ed. For ddtw/wddtw the grid
/// is over the derivative series.
CostMatrix cost_matrix(std::span<const double> a, std::span<const double> b,
                       const DistanceSpec& spec);

/// Optimal warping path for ed and the DTW family (dtw, ddtw, wdtw, wddtw).
/// Ties prefer the diagonal, then (i-1, j), then (i, j-1).
PathResult alignment_path(std::span<const double> a, std::span<const double> b,
                          const DistanceSpec& spec);

/// A distance with its parameters bound. Cheap to copy, safe to share.
class Distance {
 public:
  explicit Distance(DistanceSpec spec);

  const DistanceSpec& spec() const noexcept { return spec_; }
  double operator()(std::span<const double> a, std::span<const double> b) const;

  /// True when the kernel works on a transformed copy of its inputs.
  bool transforms_input() const noexcept;
  /// Applies the measure's input transform (derivative for ddtw/wddtw).
  std::vector<double> prepare(std::span<const double> x) const;
  /// Evaluates on series that already went through `prepare`.
  double prepared(std::span<const double> a, std::span<const double> b) const;

 private:
  DistanceSpec spec_;
};

Distance resolve_distance(const DistanceSpec& spec);
Distance resolve_distance(std::string_view name);

/// Row-major matrix of distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return cells_[i * cols_ + j];
  }
  double& at(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {cells_.data() + i * cols_, cols_};
  }
  std::span<const double> cells() const noexcept { return cells_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> cells_;
};

/// Symmetric n x n matrix over one collection. Entries are independent of the
/// thread count.
DistanceMatrix pairwise_distance(std::span<const TimeSeries> x,
                                 const DistanceSpec& spec,
                                 std::size_t threads = 1);
DistanceMatrix pairwise_distance(std::span<const TimeSeries> x,
                                 std::span<const TimeSeries> y,
                                 const DistanceSpec& spec,
                                 std::size_t threads = 1);

}  // namespace tsclust
