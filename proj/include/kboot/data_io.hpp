#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kboot/matrix.hpp"
#include "kboot/rng.hpp"

namespace kboot::io {

// Rectangular table of reals with missing entries. Missing cells hold
// NaN in `values` and 1 in `missing`.
struct RawTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> missing;
  std::size_t missing_count = 0;
  std::vector<std::string> col_labels;  // empty unless a header was read

  double missing_rate() const {
    return rows * cols == 0 ? 0.0
                            : double(missing_count) / double(rows * cols);
  }
  bool is_missing(std::size_t i, std::size_t j) const {
    return missing[i * cols + j] != 0;
  }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct ReadOptions {
  char delimiter = ',';
  bool has_header = false;
  std::vector<std::string> na_tokens = {"", "NA", "NaN"};
  char comment = '#';  // lines starting with this are skipped; 0 disables
};

// Parses a delimited text file. Fields are trimmed of surrounding
// whitespace; trimmed fields matching an na_token become missing.
// Ragged rows and unparseable fields raise data_error with the
// offending 1-based line number.
RawTable read_table(const std::filesystem::path& path, const ReadOptions& opts = {});
RawTable parse_table(std::string_view text, const ReadOptions& opts = {});

enum class Axis { column, row };

// Replaces each missing entry by the mean of the observed entries in
// its column (or row). Observed entries pass through untouched. A slice
// with no observed value at all raises data_error naming it.
Matrix impute_mean(const RawTable& table, Axis axis);

// Third-order tensor (segments x days x windows) stored as a flat
// matrix with one column per segment and one row per (day, window)
// pair, row index day*windows + window. Column-axis imputation is
// therefore per-segment.
struct TensorSpec {
  std::size_t segments = 0;
  std::size_t days = 0;
  std::size_t windows = 0;
  std::vector<std::size_t> slice;  // one or two 0-based window indices
};

// Extracts the days x segments analysis matrix of one window, or the
// entrywise difference (second minus first) when two windows are given.
Matrix slice_tensor(const Matrix& flat, const TensorSpec& spec);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& header_lines = {});
void write_table_csv(const std::filesystem::path& path, const RawTable& t,
                     const std::vector<std::string>& header_lines = {});

// Synthetic stand-in for the traffic-speed tensor: baseline values
// around 40 with unit noise, `shift` added to the last window, and
// exactly round(missing_rate * cells) missing entries placed uniformly.
RawTable synthetic_tensor(std::size_t segments, std::size_t days,
                          std::size_t windows, double missing_rate,
                          double shift, SeedSpec seed);

}  // namespace kboot::io
