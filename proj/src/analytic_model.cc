#include "atdev/analytic_model.h"

#include <algorithm>
#include <array>

#include "atdev/error.h"

namespace atdev {

namespace {

constexpr std::array<std::pair<ModelId, std::string_view>, 8> kModelNames{{
    {ModelId::AdditiveLinear, "additive_linear"},
    {ModelId::Multiplicative, "multiplicative"},
    {ModelId::QuadPlusInteraction, "quad_plus_interaction"},
    {ModelId::Case61, "case_61"},
    {ModelId::Case621, "case_621"},
    {ModelId::Case622, "case_622"},
    {ModelId::Case623, "case_623"},
    {ModelId::Custom, "custom"},
}};

Term term(double coef, std::vector<std::pair<std::size_t, int>> factors) {
  return Term{coef, std::move(factors)};
}

}  // namespace

std::string to_string(ModelId id) {
  for (const auto& [m, name] : kModelNames)
    if (m == id) return std::string(name);
  return "?";
}

ModelId parse_model_id(std::string_view s) {
  for (const auto& [m, name] : kModelNames)
    if (name == s) return m;
  throw UsageError("unknown model id '" + std::string(s) + "'");
}

AnalyticModel::AnalyticModel(ModelId id, std::vector<Term> terms, std::size_t arity)
    : id_(id), terms_(std::move(terms)), arity_(arity) {
  if (terms_.empty()) throw UsageError("analytic model needs at least one term");
  if (arity_ == 0) throw UsageError("analytic model needs arity >= 1");
  for (const auto& t : terms_)
    for (const auto& [v, pw] : t.factors) {
      if (v >= arity_)
        throw UsageError("term references x" + std::to_string(v + 1) + " but arity is " +
                         std::to_string(arity_));
      if (pw < 1) throw UsageError("term powers must be >= 1");
    }
}

AnalyticModel AnalyticModel::from_catalog(ModelId id, std::vector<double> coefficients) {
  std::vector<Term> terms;
  std::size_t p = 2;
  switch (id) {
    case ModelId::AdditiveLinear: {
      if (coefficients.empty()) coefficients = {1.0, 1.0};
      for (std::size_t j = 0; j < coefficients.size(); ++j)
        terms.push_back(term(coefficients[j], {{j, 1}}));
      return AnalyticModel(id, std::move(terms), coefficients.size());
    }
    case ModelId::Multiplicative:
      terms = {term(1.0, {{0, 1}, {1, 1}})};
      break;
    case ModelId::QuadPlusInteraction:
      terms = {term(1.0, {{0, 2}}), term(1.0, {{0, 1}, {1, 1}})};
      break;
    case ModelId::Case61:
      p = 5;
      terms = {term(1.0, {{0, 1}}), term(1.0, {{1, 2}}), term(1.0, {{2, 3}}),
               term(0.8, {{1, 1}, {3, 1}})};
      break;
    case ModelId::Case621:
      p = 3;
      terms = {term(1.0, {{0, 2}}), term(1.0, {{1, 1}})};
      break;
    case ModelId::Case622:
      p = 3;
      terms = {term(1.0, {{0, 1}}), term(1.0, {{1, 1}}), term(1.0, {{0, 1}, {1, 1}})};
      break;
    case ModelId::Case623:
      p = 5;
      terms = {term(1.0, {{0, 1}}),  term(1.5, {{1, 2}}),  term(-0.5, {}),
               term(2.0, {{2, 3}}),  term(-1.5, {{2, 1}}), term(0.8, {{1, 1}, {3, 1}})};
      break;
    case ModelId::Custom:
      throw UsageError("custom models are built from a term list");
  }
  if (!coefficients.empty()) {
    if (coefficients.size() != terms.size())
      throw UsageError(to_string(id) + " has " + std::to_string(terms.size()) + " terms, got " +
                       std::to_string(coefficients.size()) + " coefficients");
    for (std::size_t t = 0; t < terms.size(); ++t) terms[t].coef = coefficients[t];
  }
  return AnalyticModel(id, std::move(terms), p);
}

AnalyticModel AnalyticModel::custom(std::vector<Term> terms, std::size_t arity) {
  return AnalyticModel(ModelId::Custom, std::move(terms), arity);
}

AnalyticModel AnalyticModel::scaled(double c) const {
  std::vector<Term> t = terms_;
  for (auto& term : t) term.coef *= c;
  return AnalyticModel(ModelId::Custom, std::move(t), arity_);
}

bool AnalyticModel::independent_of(std::size_t j) const {
  for (const auto& t : terms_)
    for (const auto& f : t.factors)
      if (f.first == j && t.coef != 0.0) return false;
  return true;
}

double AnalyticModel::evaluate(std::span<const double> x) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (const auto& [var, pw] : t.factors)
      for (int e = 0; e < pw; ++e) v *= x[var];
    acc += v;
  }
  return acc;
}

void AnalyticModel::gradient_at(std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : terms_) {
    for (std::size_t d = 0; d < t.factors.size(); ++d) {
      double v = t.coef * t.factors[d].second;
      for (std::size_t f = 0; f < t.factors.size(); ++f) {
        const auto [var, pw] = t.factors[f];
        const int e = (f == d) ? pw - 1 : pw;
        for (int i = 0; i < e; ++i) v *= x[var];
      }
      out[t.factors[d].first] += v;
    }
  }
}

std::vector<double> AnalyticModel::do_predict(const Matrix& x) const {
  std::vector<double> y(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) y[i] = evaluate(x.row(i));
  return y;
}

Matrix AnalyticModel::do_gradient(const Matrix& x) const {
  Matrix g(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) gradient_at(x.row(i), g.row(i));
  return g;
}

}  // namespace atdev
