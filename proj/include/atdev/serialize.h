#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "atdev/curve.h"
#include "atdev/dependence.h"
#include "atdev/effects.h"
#include "atdev/importance.h"
#include "atdev/mlp.h"
#include "atdev/report.h"
#include "atdev/simgen.h"

namespace atdev {

using Json = nlohmann::json;

inline constexpr std::string_view kSchema = "atdev/1";

// Every top-level document is an object carrying "schema": "atdev/1" and a
// "type" tag; loaders reject anything else with DataError. Optional "meta"
// objects are written for the reader and ignored on load.
Json to_document(const EffectCurve& c, const Json& meta = Json::object());
Json to_document(const EffectMatrix& m, const Json& meta = Json::object());
Json to_document(const ImportanceReport& r);
Json to_document(const CorrelationMatrix& c);
Json to_document(const HeatMapData& h);
Json to_document(const BarData& b);
Json to_document(const Histogram& h);
Json to_document(const Overlay& o);
Json to_document(std::span<const ScatterSample> cells);
Json to_document(const MlpWeights& w);
Json to_document(const FitReport& r);
Json to_document(const SimSpec& s);

EffectCurve curve_from_json(const Json& j);
EffectMatrix matrix_from_json(const Json& j);
ImportanceReport importance_from_json(const Json& j);
CorrelationMatrix correlation_from_json(const Json& j);
HeatMapData heatmap_from_json(const Json& j);
BarData bars_from_json(const Json& j);
Histogram histogram_from_json(const Json& j);
Overlay overlay_from_json(const Json& j);
std::vector<ScatterSample> scatter_from_json(const Json& j);
MlpWeights mlp_weights_from_json(const Json& j);
FitReport fit_report_from_json(const Json& j);
SimSpec sim_spec_from_json(const Json& j);

// Curve table with header kind,j,k,grid,value,count; k is empty when absent.
std::string curves_to_csv(std::span<const EffectCurve> curves);
std::vector<EffectCurve> curves_from_csv(std::string_view text);

// Importance in flat form: header i,j,v with one line per cell.
std::string importance_to_csv(const ImportanceReport& r);

// Square table: header "name,<names...>", then one row per variable.
std::string correlation_to_csv(const CorrelationMatrix& c);

std::string dump(const Json& j);
Json parse_json(std::string_view text);
Json load_json(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

MlpModel load_mlp(const std::filesystem::path& path);
void save_mlp(const MlpWeights& w, const std::filesystem::path& path);

// Files staged in memory and written together; nothing reaches the disk until
// commit(). If a write fails, files already written by this set are removed.
class OutputSet {
 public:
  void add(std::filesystem::path relative, std::string content);
  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const;
  std::size_t size() const { return files_.size(); }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace atdev
