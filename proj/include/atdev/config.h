#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "atdev/analytic_model.h"
#include "atdev/dataset.h"
#include "atdev/dependence.h"
#include "atdev/predictor.h"
#include "atdev/serialize.h"

namespace atdev {

struct AnalyticSource {
  ModelId id = ModelId::AdditiveLinear;
  std::vector<double> coefficients;
  bool operator==(const AnalyticSource&) const = default;
};

struct MlpSource {
  std::filesystem::path path;
  bool operator==(const MlpSource&) const = default;
};

struct ExternalSource {
  std::string command;
  bool operator==(const ExternalSource&) const = default;
};

using ModelSource = std::variant<AnalyticSource, MlpSource, ExternalSource>;

struct RunConfig {
  std::filesystem::path data;
  ModelSource model;
  std::optional<std::string> response;  // default: a column named "y" if present
  std::size_t bins = 100;
  std::optional<double> fd_step;
  bool force_fd = false;
  DependenceMethod dependence = DependenceMethod::Linear;
  std::filesystem::path output_dir = "atdev_out";
  bool center = true;
  bool marginal_response = false;
  bool svg = false;
  std::uint64_t seed = 1;
  std::size_t scatter_cap = 5000;
  std::size_t histogram_bins = 50;

  // Throws UsageError when K < 2, the data path is empty, or a cap is zero.
  void validate() const;
};

// Every field optional; set fields take precedence over the config file.
struct ConfigOverrides {
  std::optional<std::filesystem::path> data;
  std::optional<std::string> analytic;
  std::optional<std::vector<double>> coefficients;
  std::optional<std::filesystem::path> mlp;
  std::optional<std::string> external;
  std::optional<std::string> response;
  std::optional<std::size_t> bins;
  std::optional<double> fd_step;
  std::optional<bool> force_fd;
  std::optional<std::string> dependence;
  std::optional<std::filesystem::path> output_dir;
  std::optional<bool> center;
  std::optional<bool> marginal_response;
  std::optional<bool> svg;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> scatter_cap;
  std::optional<std::size_t> histogram_bins;
};

// Merges, in increasing precedence: defaults, the config file, the output
// directory from `env_output_dir` (ATDEV_OUTPUT_DIR), then flags. The model
// source must be given exactly once per layer (file: one of "analytic", "mlp",
// "external"; flags likewise), and at least once overall.
RunConfig resolve_config(const std::optional<Json>& file, const ConfigOverrides& flags,
                         const std::optional<std::string>& env_output_dir);

// Reads the dataset, splitting off the response column (see RunConfig).
Dataset load_dataset(const RunConfig& cfg);

// Builds the predictor and checks its arity against `p` (ModelError).
std::unique_ptr<Predictor> load_model(const RunConfig& cfg, std::size_t p);

}  // namespace atdev
