#include <cmath>
#include <string>

#include "doctest.h"

#include "atdev/analytic_model.h"
#include "atdev/binning.h"
#include "atdev/effects.h"
#include "atdev/error.h"
#include "atdev/external_model.h"
#include "atdev/mlp.h"
#include "support.h"

using namespace atdev;

namespace {

Matrix rows_of(std::initializer_list<std::vector<double>> rows) {
  const std::size_t p = rows.begin()->size();
  Matrix x(rows.size(), p);
  std::size_t r = 0;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < p; ++c) x(r, c) = row[c];
    ++r;
  }
  return x;
}

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t p, double scale = 1.0) {
  Matrix x(n, p);
  for (double& v : x.data()) v = rng.uniform(-scale, scale);
  return x;
}

std::string fixture(const std::string& name) { return std::string(FIXTURES_DIR) + "/" + name; }

double max_rel_error(const Matrix& a, const Matrix& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = std::abs(a.data()[i] - b.data()[i]);
    worst = std::max(worst, d / std::max(1.0, std::abs(b.data()[i])));
  }
  return worst;
}

// Central differences with step 1e-5 (1 + |x|), computed independently of the
// library's finite-difference path.
Matrix fd_gradient(const Predictor& m, const Matrix& x) {
  Matrix g(x.rows(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    Matrix lo = x, hi = x;
    std::vector<double> h(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      h[r] = 1e-5 * (1 + std::abs(x(r, c)));
      lo(r, c) -= h[r];
      hi(r, c) += h[r];
    }
    const auto fl = m.predict(lo), fh = m.predict(hi);
    for (std::size_t r = 0; r < x.rows(); ++r) g(r, c) = (fh[r] - fl[r]) / (2 * h[r]);
  }
  return g;
}

Dataset regression_data(Rng& rng, std::size_t n, double noise) {
  auto d = test::random_dataset(rng, n, 2);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = std::sin(2 * d.at(i, 0)) + d.at(i, 0) * d.at(i, 1) + noise * rng.normal();
  return d.with_response(std::move(y));
}

}  // namespace

TEST_CASE("catalog predictions") {
  const auto x = rows_of({{2, 3}});
  CHECK(AnalyticModel::from_catalog(ModelId::AdditiveLinear).predict(x)[0] == 5.0);
  CHECK(AnalyticModel::from_catalog(ModelId::Multiplicative).predict(x)[0] == 6.0);
  CHECK(AnalyticModel::from_catalog(ModelId::QuadPlusInteraction).predict(x)[0] == 10.0);
  CHECK(AnalyticModel::from_catalog(ModelId::AdditiveLinear, {2, 5}).predict(x)[0] == 19.0);

  const auto c623 = AnalyticModel::from_catalog(ModelId::Case623);
  CHECK(c623.arity() == 5);
  const std::vector<double> row{0.5, 0.2, -0.3, 0.4, 0.9};
  const double expect = 0.5 + (3 * 0.04 - 1) / 2 + (4 * -0.027 + 0.9) / 2 + 0.8 * 0.2 * 0.4;
  CHECK(c623.evaluate(row) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(c623.independent_of(4));
  CHECK(!c623.independent_of(3));
}

TEST_CASE("model ids round trip through their names") {
  for (auto id : {ModelId::AdditiveLinear, ModelId::Multiplicative, ModelId::QuadPlusInteraction,
                  ModelId::Case61, ModelId::Case621, ModelId::Case622, ModelId::Case623})
    CHECK(parse_model_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_model_id("nope"), UsageError);
}

TEST_CASE("predict validates width") {
  const auto m = AnalyticModel::from_catalog(ModelId::Multiplicative);
  CHECK_THROWS_AS(m.predict(Matrix(3, 3)), UsageError);
  CHECK(m.predict(Matrix(0, 2)).empty());
}

TEST_CASE("analytic gradients match central differences for every catalog model") {
  Rng rng(17);
  for (auto id : {ModelId::AdditiveLinear, ModelId::Multiplicative, ModelId::QuadPlusInteraction,
                  ModelId::Case61, ModelId::Case621, ModelId::Case622, ModelId::Case623}) {
    const auto m = AnalyticModel::from_catalog(id);
    const auto x = random_matrix(rng, 100, m.arity());
    CHECK_MESSAGE(max_rel_error(m.gradient(x), fd_gradient(m, x)) < 1e-4, to_string(id));
  }
}

TEST_CASE("scaled model multiplies predictions") {
  Rng rng(2);
  const auto m = AnalyticModel::from_catalog(ModelId::Case61);
  const auto s = m.scaled(-2.5);
  const auto x = random_matrix(rng, 20, 5);
  const auto a = m.predict(x), b = s.predict(x);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(-2.5 * a[i]));
}

TEST_CASE("mlp rejects inconsistent weights") {
  CHECK_THROWS_AS(MlpModel(MlpWeights{.inputs = 2, .hidden = 1, .w1 = {1}, .b1 = {0}, .w2 = {1}}),
                  ModelError);
  CHECK_THROWS_AS(
      MlpModel(MlpWeights{.inputs = 1, .hidden = 1, .w1 = {NAN}, .b1 = {0}, .w2 = {1}}),
      ModelError);
}

TEST_CASE("mlp forward pass by hand") {
  const MlpModel m(MlpWeights{
      .inputs = 2, .hidden = 2, .w1 = {1, -1, 0.5, 2}, .b1 = {0.1, -0.2}, .w2 = {3, -1}, .b2 = 0.5});
  const auto x = rows_of({{0.3, -0.7}});
  const double expect = 0.5 + 3 * std::tanh(0.1 + 0.3 + 0.7) - std::tanh(-0.2 + 0.15 - 1.4);
  CHECK(m.predict(x)[0] == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("mlp gradient matches central differences on random weights") {
  test::for_all(5, 23, [](Rng& rng) {
    const std::size_t p = 1 + rng.below(5), h = 1 + rng.below(30);
    MlpWeights w{.inputs = p, .hidden = h};
    for (std::size_t i = 0; i < p * h; ++i) w.w1.push_back(rng.normal());
    for (std::size_t i = 0; i < h; ++i) {
      w.b1.push_back(rng.normal());
      w.w2.push_back(rng.normal());
    }
    w.b2 = rng.normal();
    const MlpModel m(w);
    const auto x = random_matrix(rng, 100, p, 2.0);
    CHECK(max_rel_error(m.gradient(x), fd_gradient(m, x)) < 1e-4);
  });
}

TEST_CASE("mlp training is deterministic and learns") {
  Rng rng(5);
  const auto train = regression_data(rng, 3000, 0.05);
  const auto valid = regression_data(rng, 500, 0.05);
  const MlpOptions opts{.hidden = 10, .max_epochs = 60, .patience = 10, .seed = 9};
  const auto a = fit_mlp(train, valid, opts);
  const auto b = fit_mlp(train, valid, opts);
  CHECK(a.model.weights() == b.model.weights());
  CHECK(a.report.valid_history == b.report.valid_history);
  CHECK(a.report.valid_r2 > 0.95);
  CHECK(a.report.epochs_run <= 60);
  CHECK(a.report.best_epoch <= a.report.epochs_run);

  const auto c = fit_mlp(train, valid, MlpOptions{.hidden = 10, .max_epochs = 60, .patience = 10, .seed = 10});
  CHECK(!(c.model.weights() == a.model.weights()));
}

TEST_CASE("mlp on a constant target predicts the constant") {
  Rng rng(8);
  auto train = test::random_dataset(rng, 2000, 3);
  auto valid = test::random_dataset(rng, 200, 3);
  train = train.with_response(std::vector<double>(train.rows(), 4.25));
  valid = valid.with_response(std::vector<double>(valid.rows(), 4.25));
  const auto fit = fit_mlp(train, valid, MlpOptions{.hidden = 5, .max_epochs = 20, .seed = 1});
  for (double v : fit.model.predict(valid.to_matrix())) CHECK(std::abs(v - 4.25) < 1e-3);
}

TEST_CASE("mlp rejects data without a response") {
  Rng rng(1);
  const auto d = test::random_dataset(rng, 10, 2);
  CHECK_THROWS_AS(fit_mlp(d, d), UsageError);
}

TEST_CASE("external protocol codec") {
  const auto x = rows_of({{1, 2}, {3.5, -4}, {0.1, 0}});
  CHECK(encode_request(x, 1, 2) == "2 2\n3.5 -4\n0.1 0\n");
  CHECK(decode_response("1\n2.5\n", 2) == std::vector<double>{1, 2.5});
  CHECK_THROWS_AS(decode_response("1\n", 2), ModelError);
  CHECK_THROWS_AS(decode_response("1\n2\n3\n", 2), ModelError);
  try {
    decode_response("1\nxyz\n", 2, 100);
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(std::string(e.what()).find("row 101") != std::string::npos);
  }
}

TEST_CASE("external sum scorer matches the in-process additive model bitwise") {
  Rng rng(12);
  const auto x = random_matrix(rng, 1000, 2, 3.0);
  const auto ext = wrap_external("sh " + fixture("sum.sh"), 2, 300);
  CHECK(!ext->has_analytic_gradient());
  CHECK(ext->predict(x) == AnalyticModel::from_catalog(ModelId::AdditiveLinear).predict(x));
  CHECK_THROWS_AS(ext->gradient(x), ModelError);
}

TEST_CASE("external case622 scorer matches bitwise and gives the same ALE") {
  Rng rng(13);
  auto d = test::random_dataset(rng, 20000, 3);
  const auto native = AnalyticModel::from_catalog(ModelId::Case622);
  const ExternalModel ext("sh " + fixture("case622.sh"), 3);
  CHECK(ext.predict(d.to_matrix()) == native.predict(d.to_matrix()));

  for (std::size_t j = 0; j < 2; ++j) {
    const auto bins = quantile_bins(d, j, 50);
    const auto a = center(ale(native, d, bins));
    const auto b = center(ale(ext, d, bins));
    CHECK(test::max_gap(a, b, test::all_points(a)) < 1e-3);
  }
}

TEST_CASE("external protocol violations are model errors") {
  Rng rng(14);
  const auto x = random_matrix(rng, 5, 2);
  CHECK_THROWS_AS(ExternalModel("sh " + fixture("short.sh"), 2).predict(x), ModelError);
  try {
    ExternalModel("sh " + fixture("garbled.sh"), 2).predict(x);
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  CHECK_THROWS_AS(ExternalModel("sh " + fixture("fail.sh"), 2).predict(x), ModelError);
  CHECK_THROWS_AS(ExternalModel("/nonexistent/scorer", 2).predict(x), ModelError);
  CHECK_THROWS_AS(ExternalModel("", 2), UsageError);
}

TEST_CASE("run_command passes stdin through") {
  CHECK(run_command("cat", "abc\n") == "abc\n");
  CHECK_THROWS_AS(run_command("exit 4", ""), ModelError);
}
