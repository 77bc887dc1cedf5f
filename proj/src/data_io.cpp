#include "kboot/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "kboot/errors.hpp"

namespace kboot::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_na(std::string_view field, const std::vector<std::string>& tokens) {
  for (const auto& t : tokens) {
    if (field == t) return true;
  }
  return false;
}

double parse_field(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw data_error("line " + std::to_string(line_no) + ": cannot parse field '" +
                     std::string(field) + "' as a number");
  }
  return value;
}

void split_fields(std::string_view line, char delimiter,
                  std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delimiter) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
}

}  // namespace

RawTable parse_table(std::string_view text, const ReadOptions& opts) {
  RawTable table;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  bool header_pending = opts.has_header;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() && pos > text.size()) break;  // trailing newline
    if (opts.comment != 0 && !line.empty() && line.front() == opts.comment) continue;

    split_fields(line, opts.delimiter, fields);
    if (header_pending) {
      header_pending = false;
      for (auto f : fields) table.col_labels.emplace_back(trim(f));
      continue;
    }
    if (table.cols == 0) {
      table.cols = fields.size();
    } else if (fields.size() != table.cols) {
      throw data_error("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.cols) + " fields, found " +
                       std::to_string(fields.size()));
    }
    for (auto raw : fields) {
      const std::string_view field = trim(raw);
      if (is_na(field, opts.na_tokens)) {
        table.values.push_back(std::numeric_limits<double>::quiet_NaN());
        table.missing.push_back(1);
        ++table.missing_count;
      } else {
        table.values.push_back(parse_field(field, line_no));
        table.missing.push_back(0);
      }
    }
    ++table.rows;
  }
  if (table.rows == 0) throw data_error("table has no data rows");
  return table;
}

RawTable read_table(const std::filesystem::path& path, const ReadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_table(buffer.str(), opts);
}

Matrix impute_mean(const RawTable& table, Axis axis) {
  const std::size_t slices = axis == Axis::column ? table.cols : table.rows;
  const std::size_t extent = axis == Axis::column ? table.rows : table.cols;
  std::vector<double> mean(slices, 0.0);
  std::vector<std::size_t> observed(slices, 0);

  const auto cell = [&](std::size_t slice, std::size_t k) {
    return axis == Axis::column ? std::pair{k, slice} : std::pair{slice, k};
  };
  for (std::size_t s = 0; s < slices; ++s) {
    for (std::size_t k = 0; k < extent; ++k) {
      const auto [i, j] = cell(s, k);
      if (!table.is_missing(i, j)) {
        mean[s] += table.at(i, j);
        ++observed[s];
      }
    }
    if (observed[s] == 0) {
      throw data_error(std::string("impute_mean: ") +
                       (axis == Axis::column ? "column " : "row ") +
                       std::to_string(s) + " has no observed values");
    }
    mean[s] /= double(observed[s]);
  }

  Matrix out(table.rows, table.cols);
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < table.cols; ++j) {
      const std::size_t s = axis == Axis::column ? j : i;
      out(i, j) = table.is_missing(i, j) ? mean[s] : table.at(i, j);
    }
  }
  return out;
}

Matrix slice_tensor(const Matrix& flat, const TensorSpec& spec) {
  if (spec.segments == 0 || spec.days == 0 || spec.windows == 0) {
    throw data_error("slice_tensor: axis sizes must be positive");
  }
  if (flat.rows != spec.days * spec.windows || flat.cols != spec.segments) {
    throw data_error("slice_tensor: flat matrix is " + std::to_string(flat.rows) +
                     "x" + std::to_string(flat.cols) + ", expected " +
                     std::to_string(spec.days * spec.windows) + "x" +
                     std::to_string(spec.segments));
  }
  if (spec.slice.empty() || spec.slice.size() > 2) {
    throw data_error("slice_tensor: need one or two window indices");
  }
  for (std::size_t w : spec.slice) {
    if (w >= spec.windows) {
      throw data_error("slice_tensor: window index " + std::to_string(w) +
                       " out of range");
    }
  }

  Matrix out(spec.days, spec.segments);
  const std::size_t w0 = spec.slice.front();
  for (std::size_t d = 0; d < spec.days; ++d) {
    for (std::size_t s = 0; s < spec.segments; ++s) {
      out(d, s) = flat(d * spec.windows + w0, s);
    }
  }
  if (spec.slice.size() == 2) {
    const std::size_t w1 = spec.slice[1];
    for (std::size_t d = 0; d < spec.days; ++d) {
      for (std::size_t s = 0; s < spec.segments; ++s) {
        out(d, s) = flat(d * spec.windows + w1, s) - out(d, s);
      }
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

void write_lines(std::ofstream& out, const std::vector<std::string>& header_lines) {
  for (const auto& line : header_lines) out << "# " << line << '\n';
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& header_lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path.string());
  write_lines(out, header_lines);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_table_csv(const std::filesystem::path& path, const RawTable& t,
                     const std::vector<std::string>& header_lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path.string());
  write_lines(out, header_lines);
  for (std::size_t i = 0; i < t.rows; ++i) {
    for (std::size_t j = 0; j < t.cols; ++j) {
      if (j) out << ',';
      if (!t.is_missing(i, j)) out << format_double(t.at(i, j));
    }
    out << '\n';
  }
}

RawTable synthetic_tensor(std::size_t segments, std::size_t days,
                          std::size_t windows, double missing_rate,
                          double shift, SeedSpec seed) {
  if (segments == 0 || days == 0 || windows == 0) {
    throw config_error("synthetic_tensor: axis sizes must be positive");
  }
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
    throw config_error("synthetic_tensor: missing_rate must lie in [0,1)");
  }
  RawTable table;
  table.rows = days * windows;
  table.cols = segments;
  const std::size_t cells = table.rows * table.cols;
  table.values.resize(cells);
  table.missing.assign(cells, 0);

  RandomStream rng(seed);
  for (std::size_t d = 0; d < days; ++d) {
    for (std::size_t w = 0; w < windows; ++w) {
      for (std::size_t s = 0; s < segments; ++s) {
        double v = 40.0 + rng.normal();
        if (w + 1 == windows) v += shift;
        table.values[(d * windows + w) * segments + s] = v;
      }
    }
  }

  // Exactly k missing cells, chosen by a partial Fisher-Yates shuffle.
  const std::size_t k = std::size_t(std::llround(missing_rate * double(cells)));
  std::vector<std::size_t> order(cells);
  for (std::size_t i = 0; i < cells; ++i) order[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + std::size_t(rng.next_below(cells - i));
    std::swap(order[i], order[j]);
    table.values[order[i]] = std::numeric_limits<double>::quiet_NaN();
    table.missing[order[i]] = 1;
  }
  table.missing_count = k;
  return table;
}

}  // namespace kboot::io
