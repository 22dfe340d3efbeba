#include "atdev/config.h"

#include "atdev/error.h"
#include "atdev/external_model.h"
#include "atdev/mlp.h"

namespace atdev {

void RunConfig::validate() const {
  if (data.empty()) throw UsageError("no dataset given (--data or \"data\")");
  if (bins < 2) throw UsageError("bins must be >= 2");
  if (fd_step && !(*fd_step > 0.0)) throw UsageError("fd step must be > 0");
  if (scatter_cap == 0) throw UsageError("scatter cap must be >= 1");
  if (histogram_bins == 0) throw UsageError("histogram bins must be >= 1");
  if (output_dir.empty()) throw UsageError("output directory is empty");
}

namespace {

std::optional<ModelSource> source_from(const std::optional<std::string>& analytic,
                                       const std::optional<std::vector<double>>& coefficients,
                                       const std::optional<std::filesystem::path>& mlp,
                                       const std::optional<std::string>& external,
                                       const char* layer) {
  const int given = int(analytic.has_value()) + int(mlp.has_value()) + int(external.has_value());
  if (given > 1)
    throw UsageError(std::string("exactly one model source allowed in ") + layer +
                     " (analytic, mlp or external)");
  if (analytic) return AnalyticSource{parse_model_id(*analytic), coefficients.value_or(std::vector<double>{})};
  if (mlp) return MlpSource{*mlp};
  if (external) return ExternalSource{*external};
  if (coefficients) throw UsageError(std::string("coefficients given without an analytic model in ") + layer);
  return std::nullopt;
}

template <typename T>
std::optional<T> opt(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

const char* const kKnownKeys[] = {"data",       "analytic",   "coefficients",      "mlp",
                                  "external",   "response",   "bins",              "fd_step",
                                  "force_fd",   "dependence", "output_dir",        "center",
                                  "marginal_response", "svg", "seed", "scatter_cap",
                                  "histogram_bins"};

ConfigOverrides from_file(const Json& j) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKnownKeys) known = known || key == k;
    if (!known) throw UsageError("unknown config key '" + key + "'");
  }
  try {
    ConfigOverrides o;
    if (auto v = opt<std::string>(j, "data")) o.data = *v;
    o.analytic = opt<std::string>(j, "analytic");
    o.coefficients = opt<std::vector<double>>(j, "coefficients");
    if (auto v = opt<std::string>(j, "mlp")) o.mlp = *v;
    o.external = opt<std::string>(j, "external");
    o.response = opt<std::string>(j, "response");
    o.bins = opt<std::size_t>(j, "bins");
    o.fd_step = opt<double>(j, "fd_step");
    o.force_fd = opt<bool>(j, "force_fd");
    o.dependence = opt<std::string>(j, "dependence");
    if (auto v = opt<std::string>(j, "output_dir")) o.output_dir = *v;
    o.center = opt<bool>(j, "center");
    o.marginal_response = opt<bool>(j, "marginal_response");
    o.svg = opt<bool>(j, "svg");
    o.seed = opt<std::uint64_t>(j, "seed");
    o.scatter_cap = opt<std::size_t>(j, "scatter_cap");
    o.histogram_bins = opt<std::size_t>(j, "histogram_bins");
    return o;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
}

void apply(RunConfig& c, const ConfigOverrides& o) {
  if (o.data) c.data = *o.data;
  if (o.response) c.response = *o.response;
  if (o.bins) c.bins = *o.bins;
  if (o.fd_step) c.fd_step = *o.fd_step;
  if (o.force_fd) c.force_fd = *o.force_fd;
  if (o.dependence) c.dependence = parse_dependence_method(*o.dependence);
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.center) c.center = *o.center;
  if (o.marginal_response) c.marginal_response = *o.marginal_response;
  if (o.svg) c.svg = *o.svg;
  if (o.seed) c.seed = *o.seed;
  if (o.scatter_cap) c.scatter_cap = *o.scatter_cap;
  if (o.histogram_bins) c.histogram_bins = *o.histogram_bins;
}

}  // namespace

RunConfig resolve_config(const std::optional<Json>& file, const ConfigOverrides& flags,
                         const std::optional<std::string>& env_output_dir) {
  RunConfig c;
  std::optional<ModelSource> source;
  if (file) {
    const ConfigOverrides f = from_file(*file);
    apply(c, f);
    source = source_from(f.analytic, f.coefficients, f.mlp, f.external, "the config file");
  }
  if (env_output_dir && !env_output_dir->empty()) c.output_dir = *env_output_dir;
  apply(c, flags);
  if (auto s = source_from(flags.analytic, flags.coefficients, flags.mlp, flags.external, "flags"))
    source = std::move(s);
  if (!source) throw UsageError("no model source given (--analytic, --mlp or --external)");
  c.model = std::move(*source);
  c.validate();
  return c;
}

Dataset load_dataset(const RunConfig& cfg) {
  const Dataset raw = load_csv(cfg.data);
  const std::string name = cfg.response.value_or("y");
  const auto idx = raw.index_of(name);
  if (!idx) {
    if (cfg.response) throw DataError("response column '" + name + "' not found in " + cfg.data.string());
    return raw;
  }
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < raw.cols(); ++j) {
    if (j == *idx) continue;
    names.push_back(raw.name(j));
    cols.emplace_back(raw.column(j).begin(), raw.column(j).end());
  }
  if (cols.empty()) throw DataError("dataset has no predictor columns besides the response");
  const auto y = raw.column(*idx);
  return Dataset(std::move(names), std::move(cols), std::vector<double>(y.begin(), y.end()), name);
}

std::unique_ptr<Predictor> load_model(const RunConfig& cfg, std::size_t p) {
  std::unique_ptr<Predictor> m;
  if (const auto* a = std::get_if<AnalyticSource>(&cfg.model)) {
    m = std::make_unique<AnalyticModel>(AnalyticModel::from_catalog(a->id, a->coefficients));
  } else if (const auto* n = std::get_if<MlpSource>(&cfg.model)) {
    m = std::make_unique<MlpModel>(load_mlp(n->path));
  } else {
    m = wrap_external(std::get<ExternalSource>(cfg.model).command, p);
  }
  if (m->arity() != p)
    throw ModelError("model expects " + std::to_string(m->arity()) + " inputs, dataset has " +
                     std::to_string(p) + " predictors");
  return m;
}

}  // namespace atdev
