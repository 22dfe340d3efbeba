#include "atdev/simgen.h"

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "atdev/error.h"
#include "atdev/rng.h"

namespace atdev {

namespace {

constexpr std::array<std::pair<SimCase, std::string_view>, 10> kCaseNames{{
    {SimCase::Indep61, "indep_61"},
    {SimCase::Additive621, "additive_621"},
    {SimCase::Interaction622, "interaction_622"},
    {SimCase::Complex623, "complex_623"},
    {SimCase::Le71Indep, "le_71_indep"},
    {SimCase::Le71Corr, "le_71_corr"},
    {SimCase::BivariateNormal, "bivariate_normal"},
    {SimCase::Additive621, "case1"},
    {SimCase::Interaction622, "case2"},
    {SimCase::Complex623, "case3"},
}};

enum class Base { Uniform, Normal };  // U(-1,1) or N(0,1)

// A case is a list of independent base draws and a map from them to x.
struct Recipe {
  std::vector<Base> base;
  std::size_t p = 0;
  std::function<void(const double* b, double* x)> transform;
};

Recipe recipe(const SimSpec& s) {
  const double e = s.noise_sd;
  using B = Base;
  switch (s.id) {
    case SimCase::Indep61:
    case SimCase::Le71Indep:
      return {{B::Uniform, B::Uniform, B::Uniform, B::Uniform, B::Uniform}, 5,
              [](const double* b, double* x) {
                for (int i = 0; i < 5; ++i) x[i] = b[i];
              }};
    case SimCase::Additive621:
      return {{B::Uniform, B::Normal, B::Normal}, 3, [e](const double* b, double* x) {
                x[0] = b[0];
                x[1] = 0.8 * b[0] + e * b[1];
                x[2] = -b[0] + e * b[2];
              }};
    case SimCase::Interaction622:
      return {{B::Uniform, B::Normal, B::Uniform}, 3, [e](const double* b, double* x) {
                x[0] = b[0];
                x[1] = -b[0] + e * b[1];
                x[2] = b[2];
              }};
    case SimCase::Complex623:
    case SimCase::Le71Corr:
      return {{B::Uniform, B::Uniform, B::Uniform, B::Normal, B::Normal}, 5,
              [e](const double* b, double* x) {
                x[0] = b[0];
                x[1] = b[1];
                x[2] = b[2];
                x[3] = b[1] + e * b[3];
                x[4] = -b[2] + e * b[4];
              }};
    case SimCase::BivariateNormal: {
      const auto v = s.bvn;
      const double tail = std::sqrt(1.0 - v.rho * v.rho);
      return {{B::Normal, B::Normal}, 2, [v, tail](const double* b, double* x) {
                x[0] = v.mu1 + v.sd1 * b[0];
                x[1] = v.mu2 + v.sd2 * (v.rho * b[0] + tail * b[1]);
              }};
    }
  }
  throw UsageError("unknown simulation case");
}

// Five-point rules, exact for polynomials of degree <= 9 in each base draw.
// Weights are probabilities (sum to 1).
struct Rule {
  std::array<double, 5> nodes;
  std::array<double, 5> weights;
};

constexpr Rule kLegendre{{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                          0.9061798459386640},
                         {0.1184634425280945, 0.2393143352496832, 0.2844444444444444,
                          0.2393143352496832, 0.1184634425280945}};
constexpr Rule kHermite{{-2.856970013872806, -1.355626179974266, 0.0, 1.355626179974266,
                         2.856970013872806},
                        {0.011257411327721, 0.222075922005613, 0.533333333333333,
                         0.222075922005613, 0.011257411327721}};

}  // namespace

std::string to_string(SimCase c) {
  for (const auto& [k, name] : kCaseNames)
    if (k == c) return std::string(name);
  return "?";
}

SimCase parse_sim_case(std::string_view s) {
  for (const auto& [k, name] : kCaseNames)
    if (name == s) return k;
  throw UsageError("unknown simulation case '" + std::string(s) + "'");
}

void SimSpec::validate() const {
  if (n == 0) throw UsageError("simulation size must be >= 1");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw UsageError("noise sd must be >= 0");
  if (id != SimCase::BivariateNormal) return;
  if (!(bvn.sd1 > 0.0) || !(bvn.sd2 > 0.0)) throw UsageError("bivariate normal: sd must be > 0");
  if (!(std::abs(bvn.rho) < 1.0)) throw UsageError("bivariate normal: |rho| must be < 1");
  if (bvn.model != ModelId::AdditiveLinear && bvn.model != ModelId::Multiplicative &&
      bvn.model != ModelId::QuadPlusInteraction)
    throw UsageError("bivariate normal: model must be additive_linear, multiplicative or "
                     "quad_plus_interaction");
}

AnalyticModel generating_model(const SimSpec& spec) {
  switch (spec.id) {
    case SimCase::Indep61: return AnalyticModel::from_catalog(ModelId::Case61);
    case SimCase::Additive621: return AnalyticModel::from_catalog(ModelId::Case621);
    case SimCase::Interaction622: return AnalyticModel::from_catalog(ModelId::Case622);
    case SimCase::Complex623:
    case SimCase::Le71Indep:
    case SimCase::Le71Corr: return AnalyticModel::from_catalog(ModelId::Case623);
    case SimCase::BivariateNormal: return AnalyticModel::from_catalog(spec.bvn.model);
  }
  throw UsageError("unknown simulation case");
}

Dataset generate(const SimSpec& spec) {
  spec.validate();
  const Recipe r = recipe(spec);
  const AnalyticModel f = generating_model(spec);
  Rng rng(spec.seed);

  std::vector<std::vector<double>> cols(r.p, std::vector<double>(spec.n));
  std::vector<double> y(spec.n);
  std::vector<double> b(r.base.size());
  std::vector<double> x(r.p);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t t = 0; t < b.size(); ++t)
      b[t] = r.base[t] == Base::Uniform ? rng.uniform(-1.0, 1.0) : rng.normal();
    r.transform(b.data(), x.data());
    for (std::size_t j = 0; j < r.p; ++j) cols[j][i] = x[j];
    y[i] = f.evaluate(x) + spec.noise_sd * rng.normal();
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < r.p; ++j) names.push_back("x" + std::to_string(j + 1));
  return Dataset(std::move(names), std::move(cols), std::move(y));
}

double theoretical_r2(const SimSpec& spec) {
  spec.validate();
  const Recipe r = recipe(spec);
  const AnalyticModel f = generating_model(spec);
  const std::size_t dims = r.base.size();

  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> b(dims), x(r.p);
  double m1 = 0.0, m2 = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t t = 0; t < dims; ++t) {
      const Rule& rule = r.base[t] == Base::Uniform ? kLegendre : kHermite;
      b[t] = rule.nodes[idx[t]];
      w *= rule.weights[idx[t]];
    }
    r.transform(b.data(), x.data());
    const double v = f.evaluate(x);
    m1 += w * v;
    m2 += w * v * v;

    std::size_t t = 0;
    while (t < dims && ++idx[t] == 5) idx[t++] = 0;
    if (t == dims) break;
  }
  const double var = m2 - m1 * m1;
  const double noise = spec.noise_sd * spec.noise_sd;
  return var / (var + noise);
}

}  // namespace atdev
