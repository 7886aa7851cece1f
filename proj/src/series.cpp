#include "tsclust/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "tsclust/error.hpp"

namespace tsclust {

namespace {

void check_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      fail(ErrorCode::invalid_input,
           "non-finite value at index " + std::to_string(i));
    }
  }
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) fail(ErrorCode::invalid_input, "empty time series");
  check_finite(values_);
}

TimeSeries::TimeSeries(std::initializer_list<double> values)
    : TimeSeries(std::vector<double>(values)) {}

Dataset::Dataset(std::vector<TimeSeries> series, std::string name)
    : series_(std::move(series)), name_(std::move(name)) {
  for (const auto& s : series_) {
    if (s.size() != series_.front().size()) {
      fail(ErrorCode::unsupported_dataset,
           "series lengths differ: " + std::to_string(series_.front().size()) +
               " vs " + std::to_string(s.size()));
    }
  }
}

Dataset::Dataset(std::vector<TimeSeries> series, std::vector<std::string> labels,
                 std::string name)
    : Dataset(std::move(series), std::move(name)) {
  if (labels.size() != series_.size()) {
    fail(ErrorCode::shape_mismatch,
         "label count " + std::to_string(labels.size()) +
             " does not match series count " + std::to_string(series_.size()));
  }
  labels_ = std::move(labels);
}

std::size_t Dataset::length() const noexcept {
  return series_.empty() ? 0 : series_.front().size();
}

const std::vector<std::string>& Dataset::labels() const {
  if (!labels_) fail(ErrorCode::invalid_input, "dataset has no labels");
  return *labels_;
}

std::vector<std::string> Dataset::classes() const {
  const auto& ls = labels();
  std::set<std::string> distinct(ls.begin(), ls.end());
  std::vector<std::string> out(distinct.begin(), distinct.end());
  bool numeric = true;
  std::map<std::string, double> value;
  for (const auto& l : out) {
    double v = 0;
    if (!parse_number(l, v)) {
      numeric = false;
      break;
    }
    value[l] = v;
  }
  if (numeric) {
    std::stable_sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
      return value[x] < value[y];
    });
  }
  return out;
}

std::vector<int> Dataset::label_codes() const {
  const auto cls = classes();
  std::map<std::string, int> code;
  for (std::size_t i = 0; i < cls.size(); ++i) code[cls[i]] = static_cast<int>(i);
  std::vector<int> out;
  out.reserve(size());
  for (const auto& l : labels()) out.push_back(code[l]);
  return out;
}

std::vector<double> z_normalize(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::invalid_input, "empty time series");
  check_finite(x);
  const double m = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= m;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sigma = std::sqrt(var / m);
  std::vector<double> out(x.size(), 0.0);
  if (sigma < 1e-12) return out;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / sigma;
  return out;
}

TimeSeries z_normalize(const TimeSeries& x) {
  return TimeSeries(z_normalize(x.values()));
}

Dataset z_normalize(const Dataset& d) {
  std::vector<TimeSeries> out;
  out.reserve(d.size());
  for (const auto& s : d.series()) out.push_back(z_normalize(s));
  if (d.has_labels()) return Dataset(std::move(out), d.labels(), d.name());
  return Dataset(std::move(out), d.name());
}

std::vector<double> derivative_transform(std::span<const double> x) {
  if (x.size() < 3) {
    fail(ErrorCode::too_short, "derivative needs at least 3 points, got " +
                                   std::to_string(x.size()));
  }
  std::vector<double> out(x.size() - 2);
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    out[i - 1] = ((x[i] - x[i - 1]) + (x[i + 1] - x[i - 1]) / 2.0) / 2.0;
  }
  return out;
}

TimeSeries derivative_transform(const TimeSeries& x) {
  return TimeSeries(derivative_transform(x.values()));
}

}  // namespace tsclust
