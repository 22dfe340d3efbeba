#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "atdev/commands.h"
#include "atdev/error.h"
#include "atdev/serialize.h"

namespace {

struct AnalysisFlags {
  std::string config;
  atdev::ConfigOverrides o;
  std::string data, mlp, output_dir, analytic, external, response, dependence;
  std::vector<double> coefficients;
  std::size_t bins = 0, scatter_cap = 0, histogram_bins = 0;
  double fd_step = 0.0;
  std::uint64_t seed = 0;
  bool force_fd = false, no_center = false, svg = false, marginal_response = false;
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration; flags override it");
  cmd->add_option("--data", f.data, "dataset CSV (header row; column 'y' is the response)");
  auto* an = cmd->add_option("--analytic", f.analytic, "catalog model id, e.g. case_623");
  cmd->add_option("--coefficients", f.coefficients, "coefficients for the analytic model")->needs(an);
  auto* ml = cmd->add_option("--mlp", f.mlp, "MLP weights JSON written by fit-mlp");
  auto* ex = cmd->add_option("--external", f.external, "scoring command (stdin/stdout protocol)");
  an->excludes(ml)->excludes(ex);
  ml->excludes(ex);
  cmd->add_option("--response", f.response, "response column name");
  cmd->add_option("--bins", f.bins, "quantile bins per variable (>= 2)");
  cmd->add_option("--fd-step", f.fd_step, "central-difference step for every variable");
  cmd->add_flag("--force-fd", f.force_fd, "use finite differences even with analytic gradients");
  cmd->add_option("--dependence", f.dependence, "linear or local_linear");
  cmd->add_option("--output-dir", f.output_dir, "output directory (env ATDEV_OUTPUT_DIR)");
  cmd->add_flag("--no-center", f.no_center, "export uncentered curves");
  cmd->add_flag("--marginal-response", f.marginal_response, "marginal plot from the observed response");
  cmd->add_flag("--svg", f.svg, "also render SVG figures");
  cmd->add_option("--seed", f.seed, "seed for subsampling");
  cmd->add_option("--scatter-cap", f.scatter_cap, "max rows per LE scatter cell");
  cmd->add_option("--histogram-bins", f.histogram_bins, "bins of the derivative histograms");
}

atdev::RunConfig resolve(CLI::App* cmd, const AnalysisFlags& f) {
  atdev::ConfigOverrides o;
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--data")) o.data = f.data;
  if (given("--analytic")) o.analytic = f.analytic;
  if (given("--coefficients")) o.coefficients = f.coefficients;
  if (given("--mlp")) o.mlp = f.mlp;
  if (given("--external")) o.external = f.external;
  if (given("--response")) o.response = f.response;
  if (given("--bins")) o.bins = f.bins;
  if (given("--fd-step")) o.fd_step = f.fd_step;
  if (f.force_fd) o.force_fd = true;
  if (given("--dependence")) o.dependence = f.dependence;
  if (given("--output-dir")) o.output_dir = f.output_dir;
  if (f.no_center) o.center = false;
  if (f.marginal_response) o.marginal_response = true;
  if (f.svg) o.svg = true;
  if (given("--seed")) o.seed = f.seed;
  if (given("--scatter-cap")) o.scatter_cap = f.scatter_cap;
  if (given("--histogram-bins")) o.histogram_bins = f.histogram_bins;

  std::optional<atdev::Json> file;
  if (!f.config.empty()) {
    try {
      file = atdev::load_json(f.config);
    } catch (const atdev::DataError& e) {
      throw atdev::UsageError(e.what());
    }
  }
  std::optional<std::string> env;
  if (const char* v = std::getenv("ATDEV_OUTPUT_DIR")) env = v;
  return atdev::resolve_config(file, o, env);
}

void report(const atdev::Paths& paths) {
  for (const auto& p : paths) std::cout << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivative-based effect plots and importance for regression models"};
  app.require_subcommand(1);

  atdev::SimSpec spec;
  std::string sim_case = "indep_61", sim_out = "data.csv", bvn_model = "additive_linear";
  auto* sim = app.add_subcommand("simulate", "generate a simulation dataset");
  sim->add_option("--case", sim_case, "indep_61, additive_621 (case1), interaction_622 (case2), "
                                      "complex_623 (case3), le_71_indep, le_71_corr, bivariate_normal");
  sim->add_option("--n", spec.n, "rows");
  sim->add_option("--noise-sd", spec.noise_sd, "sd of every noise draw");
  sim->add_option("--seed", spec.seed, "RNG seed");
  sim->add_option("--mu1", spec.bvn.mu1);
  sim->add_option("--mu2", spec.bvn.mu2);
  sim->add_option("--sd1", spec.bvn.sd1);
  sim->add_option("--sd2", spec.bvn.sd2);
  sim->add_option("--rho", spec.bvn.rho);
  sim->add_option("--model", bvn_model, "bivariate_normal response model");
  sim->add_option("--out", sim_out, "output CSV; a JSON sidecar is written next to it");

  atdev::FitMlpRequest fit;
  std::string fit_valid, fit_surrogate, fit_response;
  auto* fm = app.add_subcommand("fit-mlp", "train the neural-network backend");
  fm->add_option("--data", fit.data, "training CSV")->required();
  fm->add_option("--valid", fit_valid, "validation CSV (default: split off --valid-fraction)");
  fm->add_option("--valid-fraction", fit.valid_fraction);
  fm->add_option("--response", fit_response, "response column name");
  fm->add_option("--surrogate", fit_surrogate, "fit to this scoring command's predictions");
  fm->add_option("--hidden", fit.mlp.hidden);
  fm->add_option("--epochs", fit.mlp.max_epochs);
  fm->add_option("--patience", fit.mlp.patience);
  fm->add_option("--batch-size", fit.mlp.batch_size);
  fm->add_option("--learning-rate", fit.mlp.learning_rate);
  fm->add_option("--seed", fit.mlp.seed);
  fm->add_option("--out", fit.out, "weights JSON; the fit report goes to <stem>.report.json");

  AnalysisFlags ef, mf, hf, imf;
  std::string matrix_kind = "ATDEV";
  auto* eff = app.add_subcommand("effects", "PD, marginal, ALE, ACE and ATDEV curves with overlays");
  add_analysis_flags(eff, ef);
  auto* mat = app.add_subcommand("matrix", "ATDEV or LE matrix plot data");
  add_analysis_flags(mat, mf);
  mat->add_option("--kind", matrix_kind, "ATDEV or LE");
  auto* heat = app.add_subcommand("heatmap", "importance and correlation heat maps, bar data");
  add_analysis_flags(heat, hf);
  auto* imp = app.add_subcommand("importance", "v_ij, v_plus and DGSM");
  add_analysis_flags(imp, imf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      spec.id = atdev::parse_sim_case(sim_case);
      spec.bvn.model = atdev::parse_model_id(bvn_model);
      report(atdev::cmd_simulate(spec, sim_out));
    } else if (fm->parsed()) {
      if (!fit_valid.empty()) fit.valid = fit_valid;
      if (!fit_surrogate.empty()) fit.surrogate = fit_surrogate;
      if (!fit_response.empty()) fit.response = fit_response;
      const auto r = atdev::cmd_fit_mlp(fit);
      std::cerr << "valid R^2 " << r.report.valid_r2 << " after " << r.report.epochs_run
                << " epochs (best " << r.report.best_epoch << ")\n";
      report(r.written);
    } else if (eff->parsed()) {
      report(atdev::cmd_effects(resolve(eff, ef)));
    } else if (mat->parsed()) {
      const auto kind = atdev::parse_matrix_kind(matrix_kind);
      report(atdev::cmd_matrix(resolve(mat, mf), kind));
    } else if (heat->parsed()) {
      report(atdev::cmd_heatmap(resolve(heat, hf)));
    } else if (imp->parsed()) {
      report(atdev::cmd_importance(resolve(imp, imf)));
    }
  } catch (const std::exception& e) {
    std::cerr << "atdev: " << e.what() << "\n";
    return atdev::exit_code_for(e);
  }
  return 0;
}
