#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tsclust/series.hpp"

namespace tsclust {

/// Reads a UCR archive file. Two layouts are accepted:
///  - the `.ts` layout: `@` header lines, then `v1,...,vm:label` per line;
///  - delimited text (comma, tab or spaces) with the label in column one.
/// Lines starting with `#` or `%` are comments. Missing values and declared
/// unequal lengths raise unsupported_dataset; malformed lines raise
/// parse_error with the 1-based line number.
Dataset load_ucr_dataset(const std::filesystem::path& path);
Dataset parse_ucr_dataset(std::string_view text, std::string name = {});

/// Writes the `.ts` layout with round-trip exact values.
void save_ucr_dataset(const std::filesystem::path& path, const Dataset& data);
std::string format_ucr_dataset(const Dataset& data);

/// Loads one series: the first data line of a file holding numbers separated
/// by commas or whitespace. A `:label` suffix is ignored, so the first case
/// of a `.ts` file works too.
std::vector<double> load_series(const std::filesystem::path& path);

/// Integral numeric labels are written without a fraction or exponent
/// ("1.0000000e+00" becomes "1"); anything else is kept verbatim.
std::string canonical_label(std::string_view text);

std::string format_real(double v);  // %.6g, "nan" for NaN

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace tsclust
