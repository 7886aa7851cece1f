#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsclust {

/// A univariate series of finite observations. Immutable once built.
class TimeSeries {
 public:
  TimeSeries() = default;
  /// Throws invalid_input on an empty sequence or a non-finite value.
  explicit TimeSeries(std::vector<double> values);
  TimeSeries(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& data() const noexcept { return values_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::vector<double> values_;
};

/// n equal-length series with optional class labels. Labels are kept as the
/// text found in the source file; `label_codes()` gives the integer encoding
/// used by the evaluation metrics.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<TimeSeries> series, std::string name = {});
  Dataset(std::vector<TimeSeries> series, std::vector<std::string> labels,
          std::string name = {});

  std::size_t size() const noexcept { return series_.size(); }
  bool empty() const noexcept { return series_.empty(); }
  /// Common series length, 0 for an empty dataset.
  std::size_t length() const noexcept;

  const std::vector<TimeSeries>& series() const noexcept { return series_; }
  const TimeSeries& operator[](std::size_t i) const { return series_[i]; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<std::string>& labels() const;
  /// Distinct labels in code order: numeric order when every label parses
  /// as a number, lexicographic otherwise.
  std::vector<std::string> classes() const;
  std::vector<int> label_codes() const;

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  std::vector<TimeSeries> series_;
  std::optional<std::vector<std::string>> labels_;
  std::string name_;
};

/// Zero mean, unit population standard deviation. Series with sigma below
/// 1e-12 map to all zeros.
TimeSeries z_normalize(const TimeSeries& x);
std::vector<double> z_normalize(std::span<const double> x);
Dataset z_normalize(const Dataset& d);

/// Average-of-slopes derivative over the interior points; length m-2.
TimeSeries derivative_transform(const TimeSeries& x);
std::vector<double> derivative_transform(std::span<const double> x);

}  // namespace tsclust
