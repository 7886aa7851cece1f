#include "tsclust/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "tsclust/error.hpp"

namespace tsclust {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_missing(std::string_view tok) {
  const auto l = lower(tok);
  return l == "?" || l == "nan" || l.empty();
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + what);
}

double parse_value(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  if (is_missing(tok))
    fail(ErrorCode::unsupported_dataset,
         "line " + std::to_string(line) + ": missing values are not supported");
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    parse_fail(line, "'" + std::string(tok) + "' is not a number");
  if (!std::isfinite(v)) parse_fail(line, "non-finite value '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  const bool delimited = s.find_first_of(",\t") != std::string_view::npos;
  if (delimited) {
    const char delim = s.find(',') != std::string_view::npos ? ',' : '\t';
    std::size_t start = 0;
    while (true) {
      const auto pos = s.find(delim, start);
      out.push_back(trim(s.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    // A trailing delimiter is common in exported files.
    if (out.size() > 1 && out.back().empty()) out.pop_back();
  } else {
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      const std::size_t start = i;
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i > start) out.push_back(s.substr(start, i - start));
    }
  }
  return out;
}

}  // namespace

std::string canonical_label(std::string_view text) {
  text = trim(text);
  std::string_view t = text;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec == std::errc() && ptr == t.data() + t.size() && std::isfinite(v) && v == std::trunc(v) &&
      std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v == 0.0 ? 0.0 : v);
    return buf;
  }
  return std::string(text);
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Dataset parse_ucr_dataset(std::string_view text, std::string name) {
  std::vector<TimeSeries> series;
  std::vector<std::string> labels;
  bool ts_layout = false;
  bool in_data = false;
  bool class_label = true;
  std::size_t declared_length = 0;
  std::size_t expected = 0;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == '%') continue;

    if (line.front() == '@') {
      ts_layout = true;
      const auto sp = line.find_first_of(" \t");
      const std::string key = lower(line.substr(1, sp == line.npos ? line.npos : sp - 1));
      const std::string_view value = sp == line.npos ? std::string_view{} : trim(line.substr(sp));
      const std::string lv = lower(value);
      if (key == "data") {
        in_data = true;
      } else if (key == "problemname") {
        if (name.empty()) name = std::string(value);
      } else if (key == "equallength" && lv == "false") {
        fail(ErrorCode::unsupported_dataset, "unequal-length datasets are not supported");
      } else if (key == "univariate" && lv == "false") {
        fail(ErrorCode::unsupported_dataset, "multivariate datasets are not supported");
      } else if (key == "classlabel") {
        class_label = lv.rfind("true", 0) == 0;
      } else if (key == "serieslength") {
        declared_length = static_cast<std::size_t>(std::strtoull(lv.c_str(), nullptr, 10));
      }
      continue;
    }
    if (ts_layout && !in_data) parse_fail(line_no, "data line before @data");

    std::vector<double> values;
    std::string label;
    bool labelled = true;
    if (ts_layout) {
      std::string_view body = line;
      if (class_label) {
        const auto colon = line.rfind(':');
        if (colon == line.npos) parse_fail(line_no, "missing ':label' suffix");
        if (line.find(':') != colon)
          fail(ErrorCode::unsupported_dataset,
               "line " + std::to_string(line_no) + ": multivariate series are not supported");
        label = std::string(trim(line.substr(colon + 1)));
        if (label.empty()) parse_fail(line_no, "empty class label");
        body = line.substr(0, colon);
      } else {
        labelled = false;
      }
      for (auto tok : split_fields(body)) values.push_back(parse_value(tok, line_no));
    } else {
      const auto fields = split_fields(line);
      if (fields.size() < 2) parse_fail(line_no, "expected a label followed by values");
      label = std::string(fields.front());
      for (std::size_t f = 1; f < fields.size(); ++f) values.push_back(parse_value(fields[f], line_no));
    }

    if (values.empty()) parse_fail(line_no, "no values");
    if (expected == 0) expected = declared_length ? declared_length : values.size();
    if (values.size() != expected)
      parse_fail(line_no, "series has " + std::to_string(values.size()) + " values, expected " +
                              std::to_string(expected));
    series.emplace_back(std::move(values));
    if (labelled) labels.push_back(canonical_label(label));
  }

  if (series.empty()) fail(ErrorCode::empty_input, "dataset contains no series");
  if (labels.empty()) return Dataset(std::move(series), std::move(name));
  return Dataset(std::move(series), std::move(labels), std::move(name));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::io_error, "write failed for '" + path.string() + "'");
}

Dataset load_ucr_dataset(const std::filesystem::path& path) {
  std::string stem = path.stem().string();
  for (const char* suffix : {"_TRAIN", "_TEST"}) {
    const std::string s = suffix;
    if (stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0)
      stem.resize(stem.size() - s.size());
  }
  try {
    return parse_ucr_dataset(read_text_file(path), stem);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io_error) throw;
    fail(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_ucr_dataset(const Dataset& data) {
  std::ostringstream out;
  out << "@problemName " << (data.name().empty() ? "unnamed" : data.name()) << "\n";
  out << "@timeStamps false\n@missing false\n@univariate true\n@equalLength true\n";
  out << "@seriesLength " << data.length() << "\n";
  if (data.has_labels()) {
    out << "@classLabel true";
    for (const auto& c : data.classes()) out << " " << c;
    out << "\n";
  } else {
    out << "@classLabel false\n";
  }
  out << "@data\n";
  char buf[40];
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& x = data[i];
    for (std::size_t t = 0; t < x.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", x[t]);
      out << (t ? "," : "") << buf;
    }
    if (data.has_labels()) out << ":" << data.labels()[i];
    out << "\n";
  }
  return out.str();
}

void save_ucr_dataset(const std::filesystem::path& path, const Dataset& data) {
  write_text_file(path, format_ucr_dataset(data));
}

std::vector<double> load_series(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  std::vector<double> out;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == '%' || t.front() == '@') continue;
    std::string_view body = t;
    if (const auto colon = t.rfind(':'); colon != t.npos) body = t.substr(0, colon);
    try {
      for (auto tok : split_fields(body)) out.push_back(parse_value(tok, line_no));
    } catch (const Error& e) {
      fail(e.code(), path.string() + ": " + e.what());
    }
    if (!out.empty()) break;
  }
  if (out.empty()) fail(ErrorCode::empty_input, path.string() + ": no values found");
  return out;
}

}  // namespace tsclust
