#include "tsclust/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "tsclust/error.hpp"

namespace tsclust {

void ResultsTable::validate() const {
  if (datasets.empty() || algorithms.empty()) fail(ErrorCode::empty_input, "results table is empty");
  if (scores.size() != datasets.size())
    fail(ErrorCode::shape_mismatch, "one score row per dataset is required");
  for (const auto& row : scores) {
    if (row.size() != algorithms.size())
      fail(ErrorCode::shape_mismatch, "one score per algorithm is required");
    for (double v : row)
      if (!std::isfinite(v)) fail(ErrorCode::invalid_input, "results table has a missing score");
  }
}

std::vector<double> ResultsTable::column(std::size_t algorithm) const {
  std::vector<double> out;
  out.reserve(scores.size());
  for (const auto& row : scores) out.push_back(row.at(algorithm));
  return out;
}

namespace {

/// Mid-ranks for ascending order of `v`.
std::vector<double> ascending_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t s = 0; s < idx.size();) {
    std::size_t e = s;
    while (e + 1 < idx.size() && v[idx[e + 1]] == v[idx[s]]) ++e;
    const double mid = 0.5 * static_cast<double>(s + e) + 1.0;
    for (std::size_t t = s; t <= e; ++t) rank[idx[t]] = mid;
    s = e + 1;
  }
  return rank;
}

}  // namespace

std::vector<double> rank_descending(std::span<const double> row) {
  std::vector<double> neg(row.begin(), row.end());
  for (auto& v : neg) v = -v;
  return ascending_ranks(neg);
}

std::vector<double> average_ranks(const ResultsTable& table) {
  table.validate();
  std::vector<double> mean(table.algorithms.size(), 0.0);
  for (const auto& row : table.scores) {
    const auto r = rank_descending(row);
    for (std::size_t a = 0; a < r.size(); ++a) mean[a] += r[a];
  }
  for (auto& v : mean) v /= static_cast<double>(table.scores.size());
  return mean;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::shape_mismatch, "paired samples differ in length");
  std::vector<double> diff;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] - y[i] != 0.0) diff.push_back(x[i] - y[i]);
  if (diff.empty()) fail(ErrorCode::undefined_test, "every paired difference is zero");

  std::vector<double> mag(diff.size());
  for (std::size_t i = 0; i < diff.size(); ++i) mag[i] = std::abs(diff[i]);
  const auto rank = ascending_ranks(mag);

  WilcoxonResult out;
  out.n = diff.size();
  for (std::size_t i = 0; i < diff.size(); ++i) (diff[i] > 0 ? out.w_plus : out.w_minus) += rank[i];

  const std::size_t n = out.n;
  if (n <= 25) {
    // Mid-ranks are multiples of 1/2, so doubled ranks are integers and the
    // null distribution of 2W+ is a subset-sum count.
    std::vector<long> r2(n);
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = std::lround(2.0 * rank[i]);
      total += r2[i];
    }
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1.0;
    for (long r : r2)
      for (long s = total; s >= r; --s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];
    const long w = std::lround(2.0 * out.w_plus);
    double le = 0.0, ge = 0.0;
    for (long s = 0; s <= total; ++s) {
      if (s <= w) le += ways[static_cast<std::size_t>(s)];
      if (s >= w) ge += ways[static_cast<std::size_t>(s)];
    }
    const double all = std::ldexp(1.0, static_cast<int>(n));
    out.p_value = std::min(1.0, 2.0 * std::min(le, ge) / all);
    out.exact = true;
    return out;
  }

  const double dn = static_cast<double>(n);
  const double mean = dn * (dn + 1) / 4.0;
  double tie = 0.0;
  std::vector<double> sorted = mag;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s;
    while (e + 1 < n && sorted[e + 1] == sorted[s]) ++e;
    const double t = static_cast<double>(e - s + 1);
    tie += t * t * t - t;
    s = e + 1;
  }
  const double var = dn * (dn + 1) * (2 * dn + 1) / 24.0 - tie / 48.0;
  const double z = std::max(0.0, std::abs(out.w_plus - mean) - 0.5) / std::sqrt(var);
  out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return out;
}

std::vector<bool> holm_reject(std::span<const double> p_values, double alpha) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](auto a, auto b) { return p_values[a] < p_values[b]; });
  std::vector<bool> reject(m, false);
  for (std::size_t k = 0; k < m; ++k) {
    if (!(p_values[idx[k]] <= alpha / static_cast<double>(m - k))) break;
    reject[idx[k]] = true;
  }
  return reject;
}

CliqueAnalysis holm_cliques(const ResultsTable& table, double alpha) {
  table.validate();
  const auto mean = average_ranks(table);
  const std::size_t a = table.algorithms.size();
  std::vector<std::size_t> order(a);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto l, auto r) {
    if (mean[l] != mean[r]) return mean[l] < mean[r];
    return table.algorithms[l] < table.algorithms[r];
  });

  CliqueAnalysis out;
  out.alpha = alpha;
  out.datasets = table.datasets.size();
  for (auto i : order) {
    out.order.push_back(table.algorithms[i]);
    out.ranks.push_back(mean[i]);
  }
  std::vector<double> p;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = i + 1; j < a; ++j) {
      PairwiseTest t;
      t.a = i;
      t.b = j;
      try {
        t.p_value = wilcoxon_signed_rank(table.column(order[i]), table.column(order[j])).p_value;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::undefined_test) throw;
        t.defined = false;
        t.p_value = 1.0;
      }
      p.push_back(t.p_value);
      out.tests.push_back(t);
    }
  }
  const auto reject = holm_reject(p, alpha);
  std::vector<std::vector<bool>> sig(a, std::vector<bool>(a, false));
  for (std::size_t t = 0; t < out.tests.size(); ++t) {
    out.tests[t].significant = out.tests[t].defined && reject[t];
    sig[out.tests[t].a][out.tests[t].b] = sig[out.tests[t].b][out.tests[t].a] = out.tests[t].significant;
  }

  std::size_t covered = 0;  // one past the furthest clique end so far
  for (std::size_t i = 0; i < a; ++i) {
    std::size_t j = i;
    while (j + 1 < a) {
      bool ok = true;
      for (std::size_t q = i; q <= j && ok; ++q) ok = !sig[q][j + 1];
      if (!ok) break;
      ++j;
    }
    if (j > i && j + 1 > covered) {
      out.cliques.emplace_back(i, j);
      covered = j + 1;
    }
  }
  return out;
}

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_svg(const CliqueAnalysis& an) {
  const std::size_t a = an.order.size();
  const double left = 160, right = 160, width = 640, top = 40;
  const double lo = 1.0, hi = std::max(2.0, static_cast<double>(a));
  auto xpos = [&](double r) { return left + (r - lo) / (hi - lo) * (width - left - right); };
  const double height = top + 30.0 * static_cast<double>(a + an.cliques.size()) + 40;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<line x1=\"" << xpos(lo) << "\" y1=\"" << top << "\" x2=\"" << xpos(hi) << "\" y2=\""
      << top << "\" stroke=\"black\"/>\n";
  for (int r = 1; r <= static_cast<int>(hi); ++r) {
    svg << "<line x1=\"" << xpos(r) << "\" y1=\"" << top - 5 << "\" x2=\"" << xpos(r)
        << "\" y2=\"" << top << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << xpos(r) << "\" y=\"" << top - 10 << "\" text-anchor=\"middle\">" << r
        << "</text>\n";
  }
  const std::size_t half = (a + 1) / 2;
  for (std::size_t i = 0; i < a; ++i) {
    const bool left_side = i < half;
    const double y = top + 30.0 * static_cast<double>(an.cliques.size()) + 25.0 +
                     20.0 * static_cast<double>(left_side ? i : a - 1 - i);
    const double x = xpos(an.ranks[i]);
    const double end = left_side ? left - 10 : width - right + 10;
    svg << "<polyline points=\"" << x << "," << top << " " << x << "," << y << " " << end << ","
        << y << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (left_side ? end - 4 : end + 4) << "\" y=\"" << y + 4
        << "\" text-anchor=\"" << (left_side ? "end" : "start") << "\">"
        << xml_escape(an.order[i]) << " (" << fixed4(an.ranks[i]) << ")</text>\n";
  }
  for (std::size_t c = 0; c < an.cliques.size(); ++c) {
    const double y = top + 15.0 + 30.0 * static_cast<double>(c);
    svg << "<line x1=\"" << xpos(an.ranks[an.cliques[c].first]) - 3 << "\" y1=\"" << y
        << "\" x2=\"" << xpos(an.ranks[an.cliques[c].second]) + 3 << "\" y2=\"" << y
        << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

CdOutput emit_cd_output(const CliqueAnalysis& an, const std::string& metric) {
  CdOutput out;
  std::ostringstream text;
  if (!metric.empty()) text << "metric: " << metric << "\n";
  text << "datasets: " << an.datasets << "\n";
  for (std::size_t i = 0; i < an.order.size(); ++i)
    text << i + 1 << "\t" << fixed4(an.ranks[i]) << "\t" << an.order[i] << "\n";
  for (const auto& [f, l] : an.cliques) {
    text << "clique:";
    for (std::size_t i = f; i <= l; ++i) text << " " << an.order[i];
    text << "\n";
  }
  out.text = text.str();

  nlohmann::ordered_json j;
  if (!metric.empty()) j["metric"] = metric;
  j["datasets"] = an.datasets;
  j["alpha"] = an.alpha;
  j["algorithms"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < an.order.size(); ++i)
    j["algorithms"].push_back({{"name", an.order[i]}, {"mean_rank", an.ranks[i]}});
  j["tests"] = nlohmann::ordered_json::array();
  for (const auto& t : an.tests) {
    j["tests"].push_back({{"a", an.order[t.a]},
                          {"b", an.order[t.b]},
                          {"p_value", t.p_value},
                          {"defined", t.defined},
                          {"significant", t.significant}});
  }
  j["cliques"] = nlohmann::ordered_json::array();
  for (const auto& [f, l] : an.cliques) {
    auto members = nlohmann::ordered_json::array();
    for (std::size_t i = f; i <= l; ++i) members.push_back(an.order[i]);
    j["cliques"].push_back(members);
  }
  out.json = j.dump(2) + "\n";
  out.svg = render_svg(an);
  return out;
}

}  // namespace tsclust
