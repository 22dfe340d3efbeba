#include "atdev/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "atdev/error.h"

namespace atdev {

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns,
                 std::optional<std::vector<double>> response, std::string response_name)
    : names_(std::move(names)),
      columns_(std::move(columns)),
      response_(std::move(response)),
      response_name_(std::move(response_name)) {
  if (names_.size() != columns_.size())
    throw DataError("dataset: " + std::to_string(names_.size()) + " names for " +
                    std::to_string(columns_.size()) + " columns");
  if (columns_.empty()) throw DataError("dataset: no predictor columns");
  rows_ = columns_.front().size();
  if (rows_ == 0) throw DataError("dataset: no rows");

  std::set<std::string> seen;
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j].empty()) throw DataError("dataset: column " + std::to_string(j) + " has an empty name");
    if (!seen.insert(names_[j]).second) throw DataError("dataset: duplicate name '" + names_[j] + "'");
    if (columns_[j].size() != rows_)
      throw DataError("dataset: column '" + names_[j] + "' has " +
                      std::to_string(columns_[j].size()) + " rows, expected " +
                      std::to_string(rows_));
    for (std::size_t i = 0; i < rows_; ++i)
      if (!std::isfinite(columns_[j][i]))
        throw DataError("dataset: non-finite value at row " + std::to_string(i) + ", column '" +
                        names_[j] + "'");
  }
  if (response_) {
    if (response_name_.empty()) throw DataError("dataset: response needs a name");
    if (seen.count(response_name_)) throw DataError("dataset: duplicate name '" + response_name_ + "'");
    if (response_->size() != rows_) throw DataError("dataset: response length mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
      if (!std::isfinite((*response_)[i]))
        throw DataError("dataset: non-finite response at row " + std::to_string(i));
  }
}

std::optional<std::size_t> Dataset::index_of(std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (names_[j] == name) return j;
  return std::nullopt;
}

std::span<const double> Dataset::response() const {
  if (!response_) throw DataError("dataset has no response column");
  return *response_;
}

Matrix Dataset::to_matrix() const {
  Matrix m(rows_, columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j)
    for (std::size_t i = 0; i < rows_; ++i) m(i, j) = columns_[j][i];
  return m;
}

Dataset Dataset::with_response(std::vector<double> y, std::string name) const {
  return Dataset(names_, columns_, std::move(y), std::move(name));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(start, nl - start));
    if (!line.empty()) lines.push_back(line);
    start = nl + 1;
  }
  if (lines.empty()) throw DataError("csv: missing header row");

  std::vector<std::string> header;
  for (auto cell : split_line(lines[0])) header.emplace_back(trim(cell));
  const std::size_t width = header.size();

  std::optional<std::size_t> response_col;
  if (options.response_name) {
    for (std::size_t c = 0; c < width; ++c)
      if (header[c] == *options.response_name) response_col = c;
    if (!response_col) throw DataError("csv: response column '" + *options.response_name + "' not found");
  } else if (options.has_response) {
    response_col = width - 1;
  }

  std::vector<std::vector<double>> cols(width);
  for (auto& c : cols) c.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split_line(lines[r]);
    if (cells.size() != width)
      throw DataError("csv: row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(width));
    for (std::size_t c = 0; c < width; ++c) {
      std::string_view cell = trim(cells[c]);
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw DataError("csv: cannot parse finite number '" + std::string(cell) + "' at row " +
                        std::to_string(r) + ", column " + std::to_string(c + 1) + " ('" +
                        header[c] + "')");
      cols[c].push_back(v);
    }
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> predictors;
  std::optional<std::vector<double>> response;
  std::string response_name = "y";
  for (std::size_t c = 0; c < width; ++c) {
    if (response_col && c == *response_col) {
      response = std::move(cols[c]);
      response_name = header[c];
    } else {
      names.push_back(header[c]);
      predictors.push_back(std::move(cols[c]));
    }
  }
  return Dataset(std::move(names), std::move(predictors), std::move(response), response_name);
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), options);
}

std::string to_csv(const Dataset& d) {
  std::string out;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (j) out += ',';
    out += d.name(j);
  }
  if (d.has_response()) out += ',' + d.response_name();
  out += '\n';
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (j) out += ',';
      out += format_double(d.at(i, j));
    }
    if (d.has_response()) out += ',' + format_double(d.response()[i]);
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << to_csv(d);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace atdev
