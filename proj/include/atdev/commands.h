#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "atdev/config.h"
#include "atdev/effects.h"
#include "atdev/mlp.h"
#include "atdev/simgen.h"

namespace atdev {

// Process exit codes: 0 success, 1 usage, 2 data or model, 3 numerical.
int exit_code_for(const std::exception& e);

using Paths = std::vector<std::filesystem::path>;

// Writes the dataset CSV and a sidecar <stem>.json holding the spec, the
// theoretical R^2 and the sample correlation matrix.
Paths cmd_simulate(const SimSpec& spec, const std::filesystem::path& out_csv);

struct FitMlpRequest {
  std::filesystem::path data;
  std::optional<std::filesystem::path> valid;  // otherwise a seeded split of `data`
  double valid_fraction = 0.1;
  std::optional<std::string> response;
  // Fit to this external model's predictions instead of the observed response.
  std::optional<std::string> surrogate;
  MlpOptions mlp;
  std::filesystem::path out = "mlp.json";
};

// Writes the weights to `out` and the fit report to <stem>.report.json.
struct FitMlpResult {
  FitReport report;
  Paths written;
};
FitMlpResult cmd_fit_mlp(const FitMlpRequest& req);

// Every command below computes all outputs in memory and writes them only
// once everything succeeded.
Paths cmd_effects(const RunConfig& cfg);
Paths cmd_matrix(const RunConfig& cfg, MatrixKind kind);
Paths cmd_heatmap(const RunConfig& cfg);
Paths cmd_importance(const RunConfig& cfg);

}  // namespace atdev
