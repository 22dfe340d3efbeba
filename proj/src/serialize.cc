#include "atdev/serialize.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "atdev/error.h"

namespace atdev {

namespace {

Json document(std::string_view type) {
  return Json{{"schema", kSchema}, {"type", type}};
}

void expect(const Json& j, std::string_view type) {
  if (!j.is_object() || !j.contains("schema") || j.at("schema") != kSchema)
    throw DataError("not an atdev/1 document");
  if (j.at("type") != type)
    throw DataError("expected a '" + std::string(type) + "' document, got '" +
                    j.at("type").get<std::string>() + "'");
}

// Converts library-level JSON failures (missing keys, wrong types) to DataError.
template <typename F>
auto guarded(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw DataError("malformed " + std::string(what) + ": " + e.what());
  }
}

Json curve_body(const EffectCurve& c) {
  return Json{{"kind", to_string(c.kind)},
              {"j", c.j},
              {"k", c.k ? Json(*c.k) : Json(nullptr)},
              {"centered", c.centered},
              {"grid", c.grid},
              {"values", c.values},
              {"counts", c.counts}};
}

EffectCurve curve_from_body(const Json& j) {
  EffectCurve c;
  c.kind = parse_curve_kind(j.at("kind").get<std::string>());
  c.j = j.at("j").get<std::size_t>();
  if (!j.at("k").is_null()) c.k = j.at("k").get<std::size_t>();
  c.centered = j.at("centered").get<bool>();
  c.grid = j.at("grid").get<std::vector<double>>();
  c.values = j.at("values").get<std::vector<double>>();
  c.counts = j.at("counts").get<std::vector<std::size_t>>();
  c.validate();
  return c;
}

std::string_view to_string(HeatScale s) { return s == HeatScale::Signed ? "signed" : "nonnegative"; }

HeatScale parse_heat_scale(std::string_view s) {
  if (s == "signed") return HeatScale::Signed;
  if (s == "nonnegative") return HeatScale::Nonnegative;
  throw DataError("unknown heat map scale '" + std::string(s) + "'");
}

std::size_t parse_index(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("curve csv line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  return v;
}

double parse_number(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("curve csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

Json to_document(const EffectCurve& c, const Json& meta) {
  Json j = document("curve");
  if (!meta.empty()) j["meta"] = meta;
  j["curve"] = curve_body(c);
  return j;
}

EffectCurve curve_from_json(const Json& j) {
  return guarded("curve", [&] {
    expect(j, "curve");
    return curve_from_body(j.at("curve"));
  });
}

Json to_document(const EffectMatrix& m, const Json& meta) {
  Json j = document("effect_matrix");
  if (!meta.empty()) j["meta"] = meta;
  j["kind"] = to_string(m.kind);
  j["p"] = m.p;
  Json cells = Json::array();
  for (const auto& c : m.cells) cells.push_back(c ? curve_body(*c) : Json(nullptr));
  j["cells"] = std::move(cells);
  Json totals = Json::array();
  for (const auto& t : m.totals) totals.push_back(curve_body(t));
  j["totals"] = std::move(totals);
  return j;
}

EffectMatrix matrix_from_json(const Json& j) {
  return guarded("effect matrix", [&] {
    expect(j, "effect_matrix");
    EffectMatrix m;
    m.kind = parse_matrix_kind(j.at("kind").get<std::string>());
    m.p = j.at("p").get<std::size_t>();
    for (const auto& c : j.at("cells"))
      m.cells.push_back(c.is_null() ? std::nullopt : std::optional(curve_from_body(c)));
    for (const auto& t : j.at("totals")) m.totals.push_back(curve_from_body(t));
    m.validate();
    return m;
  });
}

Json to_document(const ImportanceReport& r) {
  Json j = document("importance");
  j["names"] = r.names;
  j["v"] = r.v;
  j["v_plus"] = r.v_plus;
  j["dgsm"] = r.dgsm;
  return j;
}

ImportanceReport importance_from_json(const Json& j) {
  return guarded("importance report", [&] {
    expect(j, "importance");
    ImportanceReport r{j.at("names").get<std::vector<std::string>>(),
                       j.at("v").get<std::vector<double>>(),
                       j.at("v_plus").get<std::vector<double>>(),
                       j.at("dgsm").get<std::vector<double>>()};
    const std::size_t p = r.names.size();
    if (r.v.size() != p * p || r.v_plus.size() != p || r.dgsm.size() != p)
      throw DataError("importance report: inconsistent sizes");
    return r;
  });
}

Json to_document(const CorrelationMatrix& c) {
  Json j = document("correlation");
  j["names"] = c.names;
  j["values"] = c.values;
  return j;
}

CorrelationMatrix correlation_from_json(const Json& j) {
  return guarded("correlation matrix", [&] {
    expect(j, "correlation");
    CorrelationMatrix c{j.at("names").get<std::vector<std::string>>(),
                        j.at("values").get<std::vector<double>>()};
    if (c.values.size() != c.names.size() * c.names.size())
      throw DataError("correlation matrix: expected p*p values");
    return c;
  });
}

Json to_document(const HeatMapData& h) {
  Json j = document("heatmap");
  j["title"] = h.title;
  j["scale"] = to_string(h.scale);
  j["names"] = h.names;
  j["values"] = h.values;
  j["normalized"] = h.normalized;
  return j;
}

HeatMapData heatmap_from_json(const Json& j) {
  return guarded("heat map", [&] {
    expect(j, "heatmap");
    HeatMapData h{j.at("title").get<std::string>(), j.at("names").get<std::vector<std::string>>(),
                  j.at("values").get<std::vector<double>>(),
                  j.at("normalized").get<std::vector<double>>(),
                  parse_heat_scale(j.at("scale").get<std::string>())};
    h.validate();
    return h;
  });
}

Json to_document(const BarData& b) {
  Json j = document("bars");
  j["title"] = b.title;
  j["names"] = b.names;
  j["values"] = b.values;
  return j;
}

BarData bars_from_json(const Json& j) {
  return guarded("bar data", [&] {
    expect(j, "bars");
    BarData b{j.at("title").get<std::string>(), j.at("names").get<std::vector<std::string>>(),
              j.at("values").get<std::vector<double>>()};
    if (b.names.size() != b.values.size()) throw DataError("bar data: names and values differ in length");
    return b;
  });
}

Json to_document(const Histogram& h) {
  Json j = document("histogram");
  j["variable"] = h.variable;
  j["edges"] = h.edges;
  j["counts"] = h.counts;
  return j;
}

Histogram histogram_from_json(const Json& j) {
  return guarded("histogram", [&] {
    expect(j, "histogram");
    Histogram h{j.at("variable").get<std::string>(), j.at("edges").get<std::vector<double>>(),
                j.at("counts").get<std::vector<std::size_t>>()};
    if (h.edges.size() != h.counts.size() + 1) throw DataError("histogram: expected bins + 1 edges");
    return h;
  });
}

Json to_document(const Overlay& o) {
  Json j = document("overlay");
  j["variable"] = o.variable;
  j["group"] = o.group;
  Json arr = Json::array();
  for (const auto& c : o.curves) arr.push_back(curve_body(c));
  j["curves"] = std::move(arr);
  return j;
}

Overlay overlay_from_json(const Json& j) {
  return guarded("overlay", [&] {
    expect(j, "overlay");
    Overlay o{j.at("variable").get<std::string>(), j.at("group").get<std::string>(), {}};
    for (const auto& c : j.at("curves")) o.curves.push_back(curve_from_body(c));
    return o;
  });
}

Json to_document(std::span<const ScatterSample> cells) {
  Json j = document("le_scatter");
  Json arr = Json::array();
  for (const auto& s : cells)
    arr.push_back(Json{{"k", s.k}, {"j", s.j}, {"x", s.x}, {"derivative", s.derivative}});
  j["cells"] = std::move(arr);
  return j;
}

std::vector<ScatterSample> scatter_from_json(const Json& j) {
  return guarded("scatter samples", [&] {
    expect(j, "le_scatter");
    std::vector<ScatterSample> out;
    for (const auto& c : j.at("cells")) {
      ScatterSample s{c.at("k").get<std::size_t>(), c.at("j").get<std::size_t>(),
                      c.at("x").get<std::vector<double>>(),
                      c.at("derivative").get<std::vector<double>>()};
      if (s.x.size() != s.derivative.size()) throw DataError("scatter samples: ragged cell");
      out.push_back(std::move(s));
    }
    return out;
  });
}

Json to_document(const MlpWeights& w) {
  Json j = document("mlp");
  j["inputs"] = w.inputs;
  j["hidden"] = w.hidden;
  j["w1"] = w.w1;
  j["b1"] = w.b1;
  j["w2"] = w.w2;
  j["b2"] = w.b2;
  return j;
}

MlpWeights mlp_weights_from_json(const Json& j) {
  return guarded("mlp weights", [&] {
    expect(j, "mlp");
    return MlpWeights{j.at("inputs").get<std::size_t>(), j.at("hidden").get<std::size_t>(),
                      j.at("w1").get<std::vector<double>>(), j.at("b1").get<std::vector<double>>(),
                      j.at("w2").get<std::vector<double>>(), j.at("b2").get<double>()};
  });
}

Json to_document(const FitReport& r) {
  Json j = document("fit_report");
  j["train_mse"] = r.train_mse;
  j["valid_mse"] = r.valid_mse;
  j["valid_r2"] = r.valid_r2;
  j["epochs_run"] = r.epochs_run;
  j["best_epoch"] = r.best_epoch;
  j["train_history"] = r.train_history;
  j["valid_history"] = r.valid_history;
  return j;
}

FitReport fit_report_from_json(const Json& j) {
  return guarded("fit report", [&] {
    expect(j, "fit_report");
    return FitReport{j.at("train_mse").get<double>(),
                     j.at("valid_mse").get<double>(),
                     j.at("valid_r2").get<double>(),
                     j.at("epochs_run").get<std::size_t>(),
                     j.at("best_epoch").get<std::size_t>(),
                     j.at("train_history").get<std::vector<double>>(),
                     j.at("valid_history").get<std::vector<double>>()};
  });
}

Json to_document(const SimSpec& s) {
  Json j = document("sim_spec");
  j["case"] = to_string(s.id);
  j["n"] = s.n;
  j["noise_sd"] = s.noise_sd;
  j["seed"] = s.seed;
  if (s.id == SimCase::BivariateNormal)
    j["bivariate_normal"] = Json{{"mu1", s.bvn.mu1}, {"mu2", s.bvn.mu2}, {"sd1", s.bvn.sd1},
                                 {"sd2", s.bvn.sd2}, {"rho", s.bvn.rho},
                                 {"model", to_string(s.bvn.model)}};
  return j;
}

SimSpec sim_spec_from_json(const Json& j) {
  return guarded("simulation spec", [&] {
    expect(j, "sim_spec");
    SimSpec s;
    s.id = parse_sim_case(j.at("case").get<std::string>());
    s.n = j.at("n").get<std::size_t>();
    s.noise_sd = j.at("noise_sd").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("bivariate_normal")) {
      const Json& b = j.at("bivariate_normal");
      s.bvn = {b.at("mu1").get<double>(), b.at("mu2").get<double>(), b.at("sd1").get<double>(),
               b.at("sd2").get<double>(), b.at("rho").get<double>(),
               parse_model_id(b.at("model").get<std::string>())};
    }
    s.validate();
    return s;
  });
}

std::string curves_to_csv(std::span<const EffectCurve> curves) {
  std::string out = "kind,j,k,grid,value,count\n";
  for (const auto& c : curves) {
    const std::string head = to_string(c.kind) + "," + std::to_string(c.j) + "," +
                             (c.k ? std::to_string(*c.k) : std::string()) + ",";
    for (std::size_t t = 0; t < c.size(); ++t)
      out += head + format_double(c.grid[t]) + "," + format_double(c.values[t]) + "," +
             std::to_string(c.counts[t]) + "\n";
  }
  return out;
}

std::vector<EffectCurve> curves_from_csv(std::string_view text) {
  std::vector<EffectCurve> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != "kind,j,k,grid,value,count") throw DataError("curve csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t s = 0;
    while (true) {
      const std::size_t comma = line.find(',', s);
      f.push_back(line.substr(s, comma == std::string_view::npos ? std::string_view::npos : comma - s));
      if (comma == std::string_view::npos) break;
      s = comma + 1;
    }
    if (f.size() != 6)
      throw DataError("curve csv line " + std::to_string(line_no) + ": expected 6 fields");
    const CurveKind kind = parse_curve_kind(f[0]);
    const std::size_t j = parse_index(f[1], line_no);
    const std::optional<std::size_t> k =
        f[2].empty() ? std::nullopt : std::optional(parse_index(f[2], line_no));
    const double g = parse_number(f[3], line_no);
    // A new curve starts when the key changes or the grid stops increasing.
    if (out.empty() || out.back().kind != kind || out.back().j != j || out.back().k != k ||
        !(g > out.back().grid.back())) {
      out.push_back(EffectCurve{kind, j, k, {}, {}, {}, false});
    }
    out.back().grid.push_back(g);
    out.back().values.push_back(parse_number(f[4], line_no));
    out.back().counts.push_back(parse_index(f[5], line_no));
  }
  return out;
}

std::string importance_to_csv(const ImportanceReport& r) {
  std::string out = "i,j,v\n";
  const std::size_t p = r.size();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      out += std::to_string(i) + "," + std::to_string(j) + "," + format_double(r.at(i, j)) + "\n";
  return out;
}

std::string correlation_to_csv(const CorrelationMatrix& c) {
  std::string out = "name";
  for (const auto& n : c.names) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    out += c.names[i];
    for (std::size_t j = 0; j < c.size(); ++j) out += "," + format_double(c.at(i, j));
    out += "\n";
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_json(ss.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DataError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot rename into " + path.string());
  }
}

MlpModel load_mlp(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ModelError("model file not found: " + path.string());
  try {
    return MlpModel(mlp_weights_from_json(load_json(path)));
  } catch (const DataError& e) {
    throw ModelError(e.what());
  }
}

void save_mlp(const MlpWeights& w, const std::filesystem::path& path) {
  write_file_atomic(path, dump(to_document(w)));
}

void OutputSet::add(std::filesystem::path relative, std::string content) {
  files_.emplace_back(std::move(relative), std::move(content));
}

std::vector<std::filesystem::path> OutputSet::commit(const std::filesystem::path& dir) const {
  std::vector<std::filesystem::path> written;
  try {
    std::filesystem::create_directories(dir);
    for (const auto& [rel, content] : files_) {
      const auto path = dir / rel;
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      write_file_atomic(path, content);
      written.push_back(path);
    }
  } catch (const std::filesystem::filesystem_error& e) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw DataError(std::string("cannot write outputs: ") + e.what());
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return written;
}

}  // namespace atdev
