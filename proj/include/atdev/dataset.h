#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atdev/matrix.h"

namespace atdev {

// Immutable numeric table: p named predictor columns of equal length N plus an
// optional response column. Its rows are the empirical distribution g(x) that
// every estimator averages over.
class Dataset {
 public:
  // Throws DataError when columns are ragged, empty, non-finite, or names are
  // empty/duplicated.
  Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns,
          std::optional<std::vector<double>> response = std::nullopt,
          std::string response_name = "y");

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }

  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t j) const { return names_.at(j); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  double at(std::size_t row, std::size_t j) const { return columns_[j][row]; }

  bool has_response() const { return response_.has_value(); }
  std::span<const double> response() const;
  const std::string& response_name() const { return response_name_; }

  // Row-major N x p copy of the predictors.
  Matrix to_matrix() const;

  Dataset with_response(std::vector<double> y, std::string name = "y") const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::optional<std::vector<double>> response_;
  std::string response_name_;
  std::size_t rows_ = 0;
};

struct CsvOptions {
  // When set, the named column becomes the response. When unset and
  // has_response is true, the last column is the response.
  std::optional<std::string> response_name;
  bool has_response = false;
};

Dataset parse_csv(std::string_view text, const CsvOptions& options = {});
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Predictors in order, then the response (if any) as the last column. Values
// use the shortest decimal form that round-trips exactly.
std::string to_csv(const Dataset& d);
void save_csv(const Dataset& d, const std::filesystem::path& path);

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace atdev
