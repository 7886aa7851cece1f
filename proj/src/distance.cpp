#include "tsclust/distance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "parallel.hpp"
#include "tsclust/error.hpp"

namespace tsclust {

namespace {

constexpr std::array<Measure, 10> kMeasures = {
    Measure::ed,   Measure::dtw, Measure::ddtw, Measure::wdtw, Measure::wddtw,
    Measure::lcss, Measure::edr, Measure::erp,  Measure::msm,  Measure::twe};

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::shape_mismatch, "series lengths differ: " +
                                        std::to_string(a.size()) + " vs " +
                                        std::to_string(b.size()));
  }
  if (a.empty()) fail(ErrorCode::invalid_input, "empty time series");
}

inline double min3(double x, double y, double z) {
  return std::min(x, std::min(y, z));
}

// Two live rows of an (m+1)-wide grid. Recursions only look one row back.
class RollingGrid {
 public:
  explicit RollingGrid(std::size_t m) : width_(m + 1), cells_(2 * (m + 1), kInfinity) {}
  double& operator()(std::size_t i, std::size_t j) {
    return cells_[(i & 1U) * width_ + j];
  }

 private:
  std::size_t width_;
  std::vector<double> cells_;
};

class FullGrid {
 public:
  explicit FullGrid(CostMatrix& c) : c_(c) {}
  double& operator()(std::size_t i, std::size_t j) { return c_.at(i, j); }

 private:
  CostMatrix& c_;
};

// DTW recursion inside a Sakoe-Chiba band of radius r. `cost(i, j)` is the
// pointwise term for 1-based cell (i, j).
template <class Grid, class Cost>
double fill_dtw(Grid& g, std::size_t m, std::size_t r, Cost&& cost) {
  g(0, 0) = 0.0;
  for (std::size_t j = 1; j <= m; ++j) g(0, j) = kInfinity;
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t lo = i > r ? i - r : 1;
    const std::size_t hi = std::min(m, i + r);
    g(i, lo - 1) = kInfinity;
    for (std::size_t j = lo; j <= hi; ++j) {
      g(i, j) = cost(i, j) + min3(g(i - 1, j - 1), g(i - 1, j), g(i, j - 1));
    }
    if (hi < m) g(i, hi + 1) = kInfinity;
  }
  return g(m, m);
}

template <class Grid>
double fill_lcss(Grid& g, std::span<const double> a, std::span<const double> b,
                 double eps) {
  const std::size_t m = a.size();
  for (std::size_t j = 0; j <= m; ++j) g(0, j) = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    g(i, 0) = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      g(i, j) = std::abs(a[i - 1] - b[j - 1]) < eps
                    ? g(i - 1, j - 1) + 1.0
                    : std::max(g(i - 1, j), g(i, j - 1));
    }
  }
  return g(m, m);
}

template <class Grid>
double fill_edr(Grid& g, std::span<const double> a, std::span<const double> b,
                double eps) {
  const std::size_t m = a.size();
  for (std::size_t j = 0; j <= m; ++j) g(0, j) = static_cast<double>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    g(i, 0) = static_cast<double>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const double sub = std::abs(a[i - 1] - b[j - 1]) < eps ? 0.0 : 1.0;
      g(i, j) = min3(g(i - 1, j - 1) + sub, g(i - 1, j) + 1.0, g(i, j - 1) + 1.0);
    }
  }
  return g(m, m);
}

template <class Grid>
double fill_erp(Grid& g, std::span<const double> a, std::span<const double> b,
                double gap) {
  const std::size_t m = a.size();
  g(0, 0) = 0.0;
  for (std::size_t j = 1; j <= m; ++j) g(0, j) = g(0, j - 1) + std::abs(b[j - 1] - gap);
  double column = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    column += std::abs(a[i - 1] - gap);
    g(i, 0) = column;
    const double del = std::abs(a[i - 1] - gap);
    for (std::size_t j = 1; j <= m; ++j) {
      g(i, j) = min3(g(i - 1, j - 1) + std::abs(a[i - 1] - b[j - 1]),
                     g(i - 1, j) + del, g(i, j - 1) + std::abs(b[j - 1] - gap));
    }
  }
  return g(m, m);
}

// Row/column 0 are unused by MSM and stay at the infinity sentinel.
template <class Grid>
double fill_msm(Grid& g, std::span<const double> a, std::span<const double> b,
                double c) {
  const std::size_t m = a.size();
  for (std::size_t j = 0; j <= m; ++j) g(0, j) = kInfinity;
  g(1, 0) = kInfinity;
  g(1, 1) = std::abs(a[0] - b[0]);
  for (std::size_t j = 2; j <= m; ++j) {
    g(1, j) = g(1, j - 1) + msm_cost(b[j - 1], a[0], b[j - 2], c);
  }
  for (std::size_t i = 2; i <= m; ++i) {
    g(i, 0) = kInfinity;
    g(i, 1) = g(i - 1, 1) + msm_cost(a[i - 1], a[i - 2], b[0], c);
    for (std::size_t j = 2; j <= m; ++j) {
      const double move = g(i - 1, j - 1) + std::abs(a[i - 1] - b[j - 1]);
      const double split = g(i - 1, j) + msm_cost(a[i - 1], a[i - 2], b[j - 1], c);
      const double merge = g(i, j - 1) + msm_cost(b[j - 1], b[j - 2], a[i - 1], c);
      g(i, j) = min3(move, split, merge);
    }
  }
  return g(m, m);
}

// Both series are read with a synthetic 0 sample in front (index 0).
template <class Grid>
double fill_twe(Grid& g, std::span<const double> a, std::span<const double> b,
                double nu, double lambda) {
  const std::size_t m = a.size();
  auto at = [](std::span<const double> x, std::size_t i) {
    return i == 0 ? 0.0 : x[i - 1];
  };
  g(0, 0) = 0.0;
  for (std::size_t j = 1; j <= m; ++j) g(0, j) = kInfinity;
  for (std::size_t i = 1; i <= m; ++i) {
    g(i, 0) = kInfinity;
    const double ai = at(a, i);
    const double ap = at(a, i - 1);
    const double del_cost = std::abs(ai - ap) + lambda + nu;
    for (std::size_t j = 1; j <= m; ++j) {
      const double bj = at(b, j);
      const double bp = at(b, j - 1);
      const double gapij = static_cast<double>(i > j ? i - j : j - i);
      const double match = g(i - 1, j - 1) + std::abs(ai - bj) +
                           std::abs(ap - bp) + 2.0 * nu * gapij;
      const double del = g(i - 1, j) + del_cost;
      const double ins = g(i, j - 1) + std::abs(bj - bp) + lambda + nu;
      g(i, j) = min3(match, ins, del);
    }
  }
  return g(m, m);
}

std::vector<double> wdtw_weights(std::size_t m, double g) {
  std::vector<double> w(m);
  for (std::size_t d = 0; d < m; ++d) w[d] = wdtw_weight(d, m, g);
  return w;
}

bool is_warping(Measure m) {
  return m == Measure::ed || m == Measure::dtw || m == Measure::ddtw ||
         m == Measure::wdtw || m == Measure::wddtw;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Kernels below assume validated parameters and equal-length inputs.
double raw_dtw(std::span<const double> a, std::span<const double> b, std::size_t r) {
  RollingGrid g(a.size());
  return fill_dtw(g, a.size(), r, [&](std::size_t i, std::size_t j) {
    const double d = a[i - 1] - b[j - 1];
    return d * d;
  });
}

double raw_wdtw(std::span<const double> a, std::span<const double> b, double gw) {
  const auto w = wdtw_weights(a.size(), gw);
  RollingGrid g(a.size());
  return fill_dtw(g, a.size(), a.size(), [&](std::size_t i, std::size_t j) {
    const double d = a[i - 1] - b[j - 1];
    return w[i > j ? i - j : j - i] * d * d;
  });
}

double evaluate(std::span<const double> a, std::span<const double> b,
                const DistanceSpec& s) {
  switch (s.measure) {
    case Measure::ed: {
      double sum = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
      }
      return std::sqrt(sum);
    }
    case Measure::dtw:
    case Measure::ddtw:
      return raw_dtw(a, b, band_radius(s.window, a.size()));
    case Measure::wdtw:
    case Measure::wddtw:
      return raw_wdtw(a, b, s.wdtw_g);
    case Measure::lcss: {
      RollingGrid g(a.size());
      // (m - len) / m rounds once, so 3/10 comes out as the double nearest 0.3.
      const double m = static_cast<double>(a.size());
      return (m - fill_lcss(g, a, b, s.epsilon)) / m;
    }
    case Measure::edr: {
      RollingGrid g(a.size());
      const double e = fill_edr(g, a, b, s.epsilon);
      return s.edr_normalize ? e / static_cast<double>(a.size()) : e;
    }
    case Measure::erp: {
      RollingGrid g(a.size());
      return fill_erp(g, a, b, s.erp_gap);
    }
    case Measure::msm: {
      RollingGrid g(a.size());
      return fill_msm(g, a, b, s.msm_cost);
    }
    case Measure::twe: {
      RollingGrid g(a.size());
      return fill_twe(g, a, b, s.twe_nu, s.twe_lambda);
    }
  }
  fail(ErrorCode::unknown_measure, "unhandled measure");
}

bool uses_derivative(Measure m) { return m == Measure::ddtw || m == Measure::wddtw; }

}  // namespace

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::ed: return "ed";
    case Measure::dtw: return "dtw";
    case Measure::ddtw: return "ddtw";
    case Measure::wdtw: return "wdtw";
    case Measure::wddtw: return "wddtw";
    case Measure::lcss: return "lcss";
    case Measure::edr: return "edr";
    case Measure::erp: return "erp";
    case Measure::msm: return "msm";
    case Measure::twe: return "twe";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  for (Measure m : kMeasures) {
    if (to_string(m) == name) return m;
  }
  if (name == "euclidean") return Measure::ed;
  fail(ErrorCode::unknown_measure, "unknown distance measure '" + std::string(name) + "'");
}

std::span<const Measure> all_measures() noexcept { return kMeasures; }

DistanceSpec DistanceSpec::named(std::string_view name) {
  DistanceSpec s;
  s.measure = parse_measure(name);
  return s;
}

void DistanceSpec::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::invalid_input, what);
  };
  check(std::isfinite(window) && window >= 0.0 && window <= 1.0,
        "window must lie in [0, 1]");
  check(std::isfinite(wdtw_g) && wdtw_g >= 0.0, "wdtw g must be nonnegative");
  check(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon must be nonnegative");
  check(std::isfinite(erp_gap), "erp gap must be finite");
  check(std::isfinite(msm_cost) && msm_cost >= 0.0, "msm cost must be nonnegative");
  check(std::isfinite(twe_nu) && twe_nu >= 0.0, "twe nu must be nonnegative");
  check(std::isfinite(twe_lambda) && twe_lambda >= 0.0,
        "twe lambda must be nonnegative");
}

std::string DistanceSpec::canonical() const {
  std::string out = "metric=";
  out += to_string(measure);
  out += ";window=" + format_real(window);
  out += ";g=" + format_real(wdtw_g);
  out += ";epsilon=" + format_real(epsilon);
  out += ";gap=" + format_real(erp_gap);
  out += ";cost=" + format_real(msm_cost);
  out += ";nu=" + format_real(twe_nu);
  out += ";lambda=" + format_real(twe_lambda);
  out += ";edr_normalize=";
  out += edr_normalize ? "1" : "0";
  return out;
}

DistanceSpec DistanceSpec::parse_canonical(std::string_view text) {
  DistanceSpec s;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto field = text.substr(pos, end - pos);
    pos = end + 1;
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::parse_error, "malformed parameter '" + std::string(field) + "'");
    }
    const std::string key(field.substr(0, eq));
    const std::string value(field.substr(eq + 1));
    if (key == "metric") {
      s.measure = parse_measure(value);
      continue;
    }
    char* stop = nullptr;
    const double v = std::strtod(value.c_str(), &stop);
    if (value.empty() || stop != value.c_str() + value.size()) {
      fail(ErrorCode::parse_error, "bad value for parameter '" + key + "'");
    }
    if (key == "window") s.window = v;
    else if (key == "g") s.wdtw_g = v;
    else if (key == "epsilon") s.epsilon = v;
    else if (key == "gap") s.erp_gap = v;
    else if (key == "cost") s.msm_cost = v;
    else if (key == "nu") s.twe_nu = v;
    else if (key == "lambda") s.twe_lambda = v;
    else if (key == "edr_normalize") s.edr_normalize = v != 0.0;
    // Unknown keys belong to other components of a canonical string.
  }
  return s;
}

std::size_t band_radius(double window, std::size_t m) {
  if (!(window >= 0.0 && window <= 1.0)) {
    fail(ErrorCode::invalid_input, "window must lie in [0, 1]");
  }
  // The small offset absorbs representation error such as 0.7 * 10 = 7.000...1
  // or 0.29 * 100 = 28.999...6.
  const auto r = static_cast<std::size_t>(std::floor(window * static_cast<double>(m) + 1e-9));
  return std::min(r, m);
}

CostMatrix::CostMatrix(std::size_t m, std::size_t radius)
    : m_(m), radius_(radius), cells_((m + 1) * (m + 1), kInfinity) {}

double wdtw_weight(std::size_t d, std::size_t m, double g) {
  return 1.0 / (1.0 + std::exp(-g * (static_cast<double>(d) - static_cast<double>(m) / 2.0)));
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  return evaluate(a, b, DistanceSpec{.measure = Measure::ed});
}

double dtw(std::span<const double> a, std::span<const double> b, double window) {
  require_same_length(a, b);
  return raw_dtw(a, b, band_radius(window, a.size()));
}

double ddtw(std::span<const double> a, std::span<const double> b, double window) {
  require_same_length(a, b);
  return dtw(derivative_transform(a), derivative_transform(b), window);
}

double wdtw(std::span<const double> a, std::span<const double> b, double g) {
  require_same_length(a, b);
  if (!(g >= 0.0)) fail(ErrorCode::invalid_input, "wdtw g must be nonnegative");
  return raw_wdtw(a, b, g);
}

double wddtw(std::span<const double> a, std::span<const double> b, double g) {
  require_same_length(a, b);
  return wdtw(derivative_transform(a), derivative_transform(b), g);
}

std::size_t lcss_match_length(std::span<const double> a, std::span<const double> b,
                              double epsilon) {
  require_same_length(a, b);
  RollingGrid g(a.size());
  return static_cast<std::size_t>(fill_lcss(g, a, b, epsilon));
}

double lcss(std::span<const double> a, std::span<const double> b, double epsilon) {
  DistanceSpec s{.measure = Measure::lcss, .epsilon = epsilon};
  return distance(a, b, s);
}

double edr(std::span<const double> a, std::span<const double> b, double epsilon,
           bool normalize) {
  DistanceSpec s{.measure = Measure::edr, .epsilon = epsilon, .edr_normalize = normalize};
  return distance(a, b, s);
}

double erp(std::span<const double> a, std::span<const double> b, double gap) {
  DistanceSpec s{.measure = Measure::erp, .erp_gap = gap};
  return distance(a, b, s);
}

double msm_cost(double x, double y, double z, double c) {
  if ((y <= x && x <= z) || (y >= x && x >= z)) return c;
  return c + std::min(std::abs(x - y), std::abs(x - z));
}

double msm(std::span<const double> a, std::span<const double> b, double c) {
  DistanceSpec s{.measure = Measure::msm, .msm_cost = c};
  return distance(a, b, s);
}

double twe(std::span<const double> a, std::span<const double> b, double nu,
           double lambda) {
  DistanceSpec s{.measure = Measure::twe, .twe_nu = nu, .twe_lambda = lambda};
  return distance(a, b, s);
}

double distance(std::span<const double> a, std::span<const double> b,
                const DistanceSpec& spec) {
  return Distance(spec)(a, b);
}

CostMatrix cost_matrix(std::span<const double> a, std::span<const double> b,
                       const DistanceSpec& spec) {
  spec.validate();
  require_same_length(a, b);
  std::vector<double> da, db;
  if (uses_derivative(spec.measure)) {
    da = derivative_transform(a);
    db = derivative_transform(b);
    a = da;
    b = db;
  }
  const std::size_t m = a.size();
  switch (spec.measure) {
    case Measure::ed:
      fail(ErrorCode::unsupported_operation, "ed has no accumulation grid");
    case Measure::dtw:
    case Measure::ddtw: {
      CostMatrix c(m, band_radius(spec.window, m));
      FullGrid g(c);
      fill_dtw(g, m, c.radius(), [&](std::size_t i, std::size_t j) {
        const double d = a[i - 1] - b[j - 1];
        return d * d;
      });
      return c;
    }
    case Measure::wdtw:
    case Measure::wddtw: {
      CostMatrix c(m, m);
      FullGrid g(c);
      const auto w = wdtw_weights(m, spec.wdtw_g);
      fill_dtw(g, m, m, [&](std::size_t i, std::size_t j) {
        const double d = a[i - 1] - b[j - 1];
        return w[i > j ? i - j : j - i] * d * d;
      });
      return c;
    }
    case Measure::lcss: {
      CostMatrix c(m, m);
      FullGrid g(c);
      fill_lcss(g, a, b, spec.epsilon);
      return c;
    }
    case Measure::edr: {
      CostMatrix c(m, m);
      FullGrid g(c);
      fill_edr(g, a, b, spec.epsilon);
      return c;
    }
    case Measure::erp: {
      CostMatrix c(m, m);
      FullGrid g(c);
      fill_erp(g, a, b, spec.erp_gap);
      return c;
    }
    case Measure::msm: {
      CostMatrix c(m, m);
      FullGrid g(c);
      fill_msm(g, a, b, spec.msm_cost);
      return c;
    }
    case Measure::twe: {
      CostMatrix c(m, m);
      FullGrid g(c);
      fill_twe(g, a, b, spec.twe_nu, spec.twe_lambda);
      return c;
    }
  }
  fail(ErrorCode::unknown_measure, "unhandled measure");
}

PathResult alignment_path(std::span<const double> a, std::span<const double> b,
                          const DistanceSpec& spec) {
  spec.validate();
  require_same_length(a, b);
  if (!is_warping(spec.measure)) {
    fail(ErrorCode::unsupported_operation,
         "alignment paths are defined for ed and the dtw family, not " +
             std::string(to_string(spec.measure)));
  }
  PathResult out;
  if (spec.measure == Measure::ed) {
    for (std::size_t i = 1; i <= a.size(); ++i) out.path.push_back({i, i});
    out.distance = evaluate(a, b, spec);
    return out;
  }
  const CostMatrix c = cost_matrix(a, b, spec);
  std::size_t i = c.length();
  std::size_t j = c.length();
  out.path.push_back({i, j});
  while (i > 1 || j > 1) {
    if (i == 1) {
      --j;
    } else if (j == 1) {
      --i;
    } else {
      const double diag = c(i - 1, j - 1);
      const double up = c(i - 1, j);
      const double left = c(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    out.path.push_back({i, j});
  }
  std::reverse(out.path.begin(), out.path.end());
  out.distance = c(c.length(), c.length());
  return out;
}

Distance::Distance(DistanceSpec spec) : spec_(spec) { spec_.validate(); }

double Distance::operator()(std::span<const double> a, std::span<const double> b) const {
  require_same_length(a, b);
  if (uses_derivative(spec_.measure)) {
    return evaluate(derivative_transform(a), derivative_transform(b), spec_);
  }
  return evaluate(a, b, spec_);
}

bool Distance::transforms_input() const noexcept { return uses_derivative(spec_.measure); }

std::vector<double> Distance::prepare(std::span<const double> x) const {
  if (uses_derivative(spec_.measure)) return derivative_transform(x);
  return {x.begin(), x.end()};
}

double Distance::prepared(std::span<const double> a, std::span<const double> b) const {
  require_same_length(a, b);
  return evaluate(a, b, spec_);
}

Distance resolve_distance(const DistanceSpec& spec) { return Distance(spec); }

Distance resolve_distance(std::string_view name) {
  return Distance(DistanceSpec::named(name));
}

namespace {

std::vector<std::vector<double>> prepare_all(const Distance& d,
                                             std::span<const TimeSeries> xs) {
  std::vector<std::vector<double>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(d.prepare(x.values()));
  return out;
}

void require_common_length(std::span<const TimeSeries> x, std::size_t m) {
  for (const auto& s : x) {
    if (s.size() != m) {
      fail(ErrorCode::shape_mismatch, "series lengths differ: " + std::to_string(m) +
                                          " vs " + std::to_string(s.size()));
    }
  }
}

}  // namespace

DistanceMatrix pairwise_distance(std::span<const TimeSeries> x, const DistanceSpec& spec,
                                 std::size_t threads) {
  const Distance d(spec);
  if (x.empty()) return {};
  require_common_length(x, x.front().size());
  const auto px = prepare_all(d, x);
  const std::size_t n = x.size();
  DistanceMatrix out(n, n);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) out.at(i, j) = d.prepared(px[i], px[j]);
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) out.at(i, j) = out(j, i);
  }
  return out;
}

DistanceMatrix pairwise_distance(std::span<const TimeSeries> x,
                                 std::span<const TimeSeries> y, const DistanceSpec& spec,
                                 std::size_t threads) {
  const Distance d(spec);
  if (x.empty() || y.empty()) return DistanceMatrix(x.size(), y.size());
  require_common_length(x, x.front().size());
  require_common_length(y, x.front().size());
  const auto px = prepare_all(d, x);
  const auto py = prepare_all(d, y);
  DistanceMatrix out(x.size(), y.size());
  detail::parallel_for(x.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < y.size(); ++j) out.at(i, j) = d.prepared(px[i], py[j]);
  });
  return out;
}

}  // namespace tsclust
