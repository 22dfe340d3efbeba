#include "atdev/commands.h"

#include <numeric>

#include "atdev/error.h"
#include "atdev/external_model.h"
#include "atdev/importance.h"
#include "atdev/report.h"
#include "atdev/rng.h"
#include "atdev/serialize.h"
#include "atdev/svg.h"

namespace atdev {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return 1;
  if (dynamic_cast<const NumericalError*>(&e)) return 3;
  return 2;
}

namespace {

std::filesystem::path sibling(const std::filesystem::path& p, const std::string& suffix) {
  std::filesystem::path out = p;
  out.replace_filename(p.stem().string() + suffix);
  return out;
}

// Everything the analysis commands share: data, model, one derivative field
// per variable, bins and dependence fits per column.
struct Analysis {
  RunConfig cfg;
  Dataset data;
  std::unique_ptr<Predictor> model;
  std::vector<DerivativeField> fields;
  std::vector<BinScheme> bins;
  std::vector<DependenceModel> deps;

  explicit Analysis(const RunConfig& c, bool with_dependence = true)
      : cfg(c), data(load_dataset(c)), model(load_model(c, data.cols())) {
    fields = all_partial_derivatives(*model, data, {cfg.fd_step, cfg.force_fd});
    for (std::size_t j = 0; j < data.cols(); ++j) {
      bins.push_back(quantile_bins(data, j, cfg.bins));
      if (with_dependence) deps.push_back(fit_dependence(data, j, cfg.dependence, cfg.bins));
    }
  }

  Json meta(std::size_t j) const {
    return Json{{"variable", data.name(j)},
                {"bins", bins[j].size()},
                {"requested_bins", cfg.bins},
                {"dependence", to_string(cfg.dependence)},
                {"centered", cfg.center},
                {"derivatives", fields[j].method == DerivativeMethod::Analytic ? "analytic" : "central_fd"}};
  }

  EffectCurve finish(EffectCurve c) const { return cfg.center ? center(std::move(c)) : c; }
};

svg::Series series(const std::string& label, const EffectCurve& c) { return {label, c.grid, c.values}; }

}  // namespace

Paths cmd_simulate(const SimSpec& spec, const std::filesystem::path& out_csv) {
  if (out_csv.empty()) throw UsageError("no output path given");
  const Dataset d = generate(spec);
  Json side = to_document(spec);
  side["theoretical_r2"] = theoretical_r2(spec);
  if (d.rows() >= 2) side["correlation"] = to_document(corr_matrix(d));

  OutputSet out;
  out.add(out_csv.filename(), to_csv(d));
  out.add(sibling(out_csv, ".json").filename(), dump(side));
  const auto dir = out_csv.has_parent_path() ? out_csv.parent_path() : std::filesystem::path(".");
  return out.commit(dir);
}

FitMlpResult cmd_fit_mlp(const FitMlpRequest& req) {
  if (req.out.empty()) throw UsageError("no output path given");
  RunConfig shape;
  shape.data = req.data;
  shape.response = req.response;
  Dataset all = load_dataset(shape);

  auto target = [&](const Dataset& d) {
    if (req.surrogate) return d.with_response(wrap_external(*req.surrogate, d.cols())->predict(d.to_matrix()));
    if (!d.has_response()) throw DataError("training data has no response column");
    return d;
  };

  std::optional<Dataset> train, valid;
  if (req.valid) {
    RunConfig vshape = shape;
    vshape.data = *req.valid;
    train = target(all);
    valid = target(load_dataset(vshape));
  } else {
    if (!(req.valid_fraction > 0.0 && req.valid_fraction < 1.0))
      throw UsageError("validation fraction must lie in (0, 1)");
    all = target(all);
    std::vector<std::size_t> rows(all.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Rng rng(req.mlp.seed ^ 0x9e3779b97f4a7c15ULL);
    rng.shuffle(rows.begin(), rows.end());
    const auto nv = static_cast<std::size_t>(static_cast<double>(all.rows()) * req.valid_fraction);
    if (nv == 0 || nv == all.rows()) throw DataError("too few rows for a validation split");
    auto take = [&](std::size_t from, std::size_t to) {
      std::vector<std::vector<double>> cols(all.cols());
      std::vector<double> y;
      for (std::size_t r = from; r < to; ++r) {
        for (std::size_t j = 0; j < all.cols(); ++j) cols[j].push_back(all.at(rows[r], j));
        y.push_back(all.response()[rows[r]]);
      }
      return Dataset(all.names(), std::move(cols), std::move(y), all.response_name());
    };
    valid = take(0, nv);
    train = take(nv, all.rows());
  }

  MlpFit fit = fit_mlp(*train, *valid, req.mlp);
  OutputSet out;
  out.add(req.out.filename(), dump(to_document(fit.model.weights())));
  out.add(sibling(req.out, ".report.json").filename(), dump(to_document(fit.report)));
  const auto dir = req.out.has_parent_path() ? req.out.parent_path() : std::filesystem::path(".");
  return {fit.report, out.commit(dir)};
}

Paths cmd_effects(const RunConfig& cfg) {
  const Analysis a(cfg);
  const Dataset& d = a.data;
  const std::size_t p = d.cols();
  OutputSet out;
  std::vector<EffectCurve> all;
  std::vector<svg::Panel> atdev_panels, triple_panels;

  for (std::size_t j = 0; j < p; ++j) {
    const BinScheme& b = a.bins[j];
    const std::string& name = d.name(j);
    const EffectCurve pd = a.finish(pdp(*a.model, d, b));
    const EffectCurve mg =
        a.finish(cfg.marginal_response ? marginal_response(d, b) : marginal(*a.model, d, b));
    const EffectCurve al = a.finish(ale(a.fields[j], b));
    const EffectCurve tot = a.finish(atdev_curve(a.fields, d, a.deps[j], b));
    std::vector<EffectCurve> curves{pd, mg, al, tot};
    for (std::size_t k = 0; k < p; ++k)
      if (k != j) curves.push_back(a.finish(ace(a.fields[k], d, a.deps[j], b)));

    for (const auto& c : curves) {
      std::string file = "curves/" + name + "_" + to_string(c.kind);
      if (c.k) file += "_via_" + d.name(*c.k);
      out.add(file + ".json", dump(to_document(c, a.meta(j))));
      all.push_back(c);
    }
    out.add("overlays/" + name + "_atdev_marginal.json", dump(to_document(Overlay{name, "atdev_marginal", {tot, mg}})));
    out.add("overlays/" + name + "_pd_marginal_ale.json",
            dump(to_document(Overlay{name, "pd_marginal_ale", {pd, mg, al}})));
    atdev_panels.push_back({name, {series("ATDEV", tot), series("marginal", mg)}});
    triple_panels.push_back({name, {series("PD", pd), series("marginal", mg), series("ALE", al)}});
  }
  out.add("curves.csv", curves_to_csv(all));
  if (cfg.svg) {
    out.add("effects_atdev_marginal.svg", svg::panels(atdev_panels, std::min<std::size_t>(p, 5)));
    out.add("effects_pd_marginal_ale.svg", svg::panels(triple_panels, std::min<std::size_t>(p, 5)));
  }
  return out.commit(cfg.output_dir);
}

Paths cmd_matrix(const RunConfig& cfg, MatrixKind kind) {
  const Analysis a(cfg, kind == MatrixKind::ATDEV);
  const Dataset& d = a.data;
  const std::size_t p = d.cols();
  EffectMatrix em = effect_matrix(a.fields, d, kind, a.deps, a.bins);
  if (!cfg.center && kind == MatrixKind::ATDEV) {
    // Undo the matrix-level centering so the exported cells match --no-center.
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = 0; k < p; ++k) {
        auto& c = em.cells[k * p + j];
        c = k == j ? ale(a.fields[j], a.bins[j]) : ace(a.fields[k], d, a.deps[j], a.bins[j]);
      }
      em.totals[j] = atdev_curve(a.fields, d, a.deps[j], a.bins[j]);
    }
  }
  em.validate();

  const std::string tag = kind == MatrixKind::ATDEV ? "atdev" : "le";
  Json meta{{"names", d.names()},
            {"requested_bins", cfg.bins},
            {"dependence", to_string(cfg.dependence)},
            {"centered", kind == MatrixKind::ATDEV && cfg.center}};
  OutputSet out;
  out.add("matrix_" + tag + ".json", dump(to_document(em, meta)));
  std::vector<EffectCurve> flat;
  for (const auto& c : em.cells)
    if (c) flat.push_back(*c);
  for (const auto& t : em.totals) flat.push_back(t);
  out.add("matrix_" + tag + ".csv", curves_to_csv(flat));

  if (kind == MatrixKind::LE) {
    const auto rows = subsample_rows(d.rows(), cfg.scatter_cap, cfg.seed);
    std::vector<ScatterSample> cells;
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t j = 0; j < p; ++j) cells.push_back(scatter_sample(a.fields[k], d.column(j), j, rows));
    out.add("le_scatter.json", dump(to_document(cells)));
    for (std::size_t j = 0; j < p; ++j)
      out.add("histograms/" + d.name(j) + "_derivative.json",
              dump(to_document(histogram(d.name(j), a.fields[j].values, cfg.histogram_bins))));
  }
  if (cfg.svg) out.add("matrix_" + tag + ".svg", svg::matrix(em, d.names()));
  return out.commit(cfg.output_dir);
}

Paths cmd_heatmap(const RunConfig& cfg) {
  const Analysis a(cfg);
  const Dataset& d = a.data;
  const EffectMatrix em = effect_matrix(a.fields, d, MatrixKind::ATDEV, a.deps, a.bins);
  ComponentImportance ci = atdev_importance(em);
  const ImportanceReport r{d.names(), std::move(ci.v), std::move(ci.v_plus), dgsm(a.fields)};

  const HeatMapData atdev_map = importance_heatmap(r);
  const CorrelationMatrix corr = corr_matrix(d);
  const HeatMapData corr_map = correlation_heatmap(corr);
  const BarData vplus{"v_plus", d.names(), r.v_plus};
  const BarData dg{"dgsm", d.names(), r.dgsm};

  OutputSet out;
  out.add("heatmap_atdev.json", dump(to_document(atdev_map)));
  out.add("heatmap_correlation.json", dump(to_document(corr_map)));
  out.add("correlation.json", dump(to_document(corr)));
  out.add("correlation.csv", correlation_to_csv(corr));
  out.add("bars_v_plus.json", dump(to_document(vplus)));
  out.add("bars_dgsm.json", dump(to_document(dg)));
  if (cfg.svg) {
    out.add("heatmap_atdev.svg", svg::heatmap(atdev_map));
    out.add("heatmap_correlation.svg", svg::heatmap(corr_map));
    out.add("bars_v_plus.svg", svg::bars(vplus));
    out.add("bars_dgsm.svg", svg::bars(dg));
  }
  return out.commit(cfg.output_dir);
}

Paths cmd_importance(const RunConfig& cfg) {
  const Analysis a(cfg);
  const EffectMatrix em = effect_matrix(a.fields, a.data, MatrixKind::ATDEV, a.deps, a.bins);
  ComponentImportance ci = atdev_importance(em);
  const ImportanceReport r{a.data.names(), std::move(ci.v), std::move(ci.v_plus), dgsm(a.fields)};
  OutputSet out;
  out.add("importance.json", dump(to_document(r)));
  out.add("importance.csv", importance_to_csv(r));
  return out.commit(cfg.output_dir);
}

}  // namespace atdev
