#include <cmath>
#include <numeric>

#include "doctest.h"

#include "atdev/binning.h"
#include "atdev/curve.h"
#include "atdev/dataset.h"
#include "atdev/error.h"
#include "atdev/stats.h"
#include "support.h"

using namespace atdev;

TEST_CASE("dataset rejects malformed tables") {
  CHECK_THROWS_AS(Dataset({"a"}, {{1, 2}, {3, 4}}), DataError);
  CHECK_THROWS_AS(Dataset({"a", "b"}, {{1, 2}, {3}}), DataError);
  CHECK_THROWS_AS(Dataset({"a", "a"}, {{1}, {2}}), DataError);
  CHECK_THROWS_AS(Dataset({""}, {{1}}), DataError);
  CHECK_THROWS_AS(Dataset({"a"}, {{}}), DataError);
  CHECK_THROWS_AS(Dataset({"a"}, {{1, NAN}}), DataError);
  CHECK_THROWS_AS(Dataset({"a"}, {{1, 2}}, std::vector<double>{1}), DataError);
  CHECK_THROWS_AS(Dataset({"a"}, {{1, 2}}, std::vector<double>{1, INFINITY}), DataError);
}

TEST_CASE("csv parse names the offending row and column") {
  try {
    parse_csv("a,b\n1,2\n3,nan\n");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("'b'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_csv(""), DataError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), DataError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), DataError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n", {.response_name = "y"}), DataError);
}

TEST_CASE("csv response selection") {
  const auto by_name = parse_csv("y,a,b\n1,2,3\n4,5,6\n", {.response_name = "y"});
  CHECK(by_name.cols() == 2);
  CHECK(by_name.names() == std::vector<std::string>{"a", "b"});
  CHECK(by_name.response()[1] == 4.0);

  const auto last = parse_csv("a,b,t\n1,2,3\n", {.has_response = true});
  CHECK(last.cols() == 2);
  CHECK(last.response_name() == "t");
  CHECK(last.response()[0] == 3.0);
  CHECK_THROWS_AS(parse_csv("a\n1\n").response(), DataError);
}

TEST_CASE("csv round trip is exact") {
  test::for_all(20, 11, [](Rng& rng) {
    const std::size_t n = 1 + rng.below(50), p = 1 + rng.below(4);
    auto d = test::random_dataset(rng, n, p);
    std::vector<double> y(n);
    for (auto& v : y) v = rng.normal() * std::pow(10.0, rng.uniform(-300, 300));
    d = d.with_response(y);
    const auto back = parse_csv(to_csv(d), {.response_name = "y"});
    CHECK(back == d);
  });
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("quantile bins: two bins on four points") {
  const auto d = test::make_dataset({{1, 2, 3, 4}});
  const auto b = quantile_bins(d, 0, 2);
  CHECK(b.edges == std::vector<double>{1, 2.5, 4});
  CHECK(b.counts() == std::vector<std::size_t>{2, 2});
  CHECK(b.midpoints == std::vector<double>{1.75, 3.25});
}

TEST_CASE("quantile bins merge duplicate edges") {
  const auto d = test::make_dataset({{0, 0, 0, 1}});
  const auto b = quantile_bins(d, 0, 4);
  CHECK(b.size() == 2);
  const auto c = b.counts();
  CHECK(std::accumulate(c.begin(), c.end(), std::size_t{0}) == 4);
  for (auto n : c) CHECK(n > 0);
}

TEST_CASE("quantile bins on a uniform sample are near equal count") {
  Rng rng(3);
  const auto d = test::make_dataset({test::uniform_column(rng, 100000)});
  const auto b = quantile_bins(d, 0, 100);
  CHECK(b.size() == 100);
  for (auto n : b.counts()) {
    CHECK(n >= 800);
    CHECK(n <= 1200);
  }
}

TEST_CASE("quantile bins partition the rows") {
  test::for_all(30, 5, [](Rng& rng) {
    const std::size_t n = 2 + rng.below(500);
    std::vector<double> x(n);
    // Heavy ties: values on a coarse lattice.
    const auto levels = 2 + rng.below(8);
    for (auto& v : x) v = static_cast<double>(rng.below(levels));
    if (*std::min_element(x.begin(), x.end()) == *std::max_element(x.begin(), x.end())) x[0] += 1;
    const auto d = test::make_dataset({x});
    const auto b = quantile_bins(d, 0, 2 + rng.below(60));

    std::vector<int> seen(n, 0);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(!b.members[i].empty());
      for (auto r : b.members[i]) {
        ++seen[r];
        CHECK(b.row_bin[r] == i);
        CHECK(x[r] >= b.edges[i]);
        if (i + 1 < b.size()) CHECK(x[r] < b.edges[i + 1]);
        else CHECK(x[r] <= b.edges[i + 1]);
      }
    }
    for (int s : seen) CHECK(s == 1);
    CHECK(b.edges.front() == *std::min_element(x.begin(), x.end()));
    CHECK(b.edges.back() == *std::max_element(x.begin(), x.end()));
    for (std::size_t i = 1; i < b.edges.size(); ++i) CHECK(b.edges[i] > b.edges[i - 1]);
  });
}

TEST_CASE("quantile bins reject degenerate input") {
  CHECK_THROWS_AS(quantile_bins(test::make_dataset({{2, 2, 2}}), 0, 10), DataError);
  CHECK_THROWS_AS(quantile_bins(test::make_dataset({{1, 2, 3}}), 0, 1), UsageError);
  CHECK_THROWS_AS(quantile_bins(test::make_dataset({{1, 2, 3}}), 1, 2), UsageError);
}

TEST_CASE("locate follows the half-open rule and clamps") {
  const auto d = test::make_dataset({{0, 1, 2, 3, 4}});
  const auto b = bins_from_edges(d, 0, {0, 2, 4});
  CHECK(b.locate(-5) == 0);
  CHECK(b.locate(1.999) == 0);
  CHECK(b.locate(2) == 1);
  CHECK(b.locate(4) == 1);
  CHECK(b.locate(9) == 1);
  CHECK_THROWS_AS(bins_from_edges(d, 0, {0, 0, 4}), UsageError);
  CHECK(bin_means(b, std::vector<double>{0, 1, 2, 3, 4}) == std::vector<double>{0.5, 3.0});
}

TEST_CASE("centering examples") {
  EffectCurve c{.grid = {0, 1, 2}, .values = {1, 2, 3}, .counts = {1, 1, 1}};
  const auto z = center(c);
  CHECK(z.values == std::vector<double>{-1, 0, 1});
  CHECK(z.centered);

  EffectCurve w{.grid = {0, 1}, .values = {1, 3}, .counts = {3, 1}};
  CHECK(center(w).values == std::vector<double>{-0.5, 1.5});
  CHECK(weighted_variance(w) == doctest::Approx(0.75));
}

TEST_CASE("centering is idempotent and zeroes the weighted mean") {
  test::for_all(50, 7, [](Rng& rng) {
    const std::size_t n = 1 + rng.below(30);
    EffectCurve c;
    for (std::size_t i = 0; i < n; ++i) {
      c.grid.push_back(static_cast<double>(i));
      c.values.push_back(rng.normal(3.0, 10.0));
      c.counts.push_back(1 + rng.below(100));
    }
    const auto once = center(c);
    const auto twice = center(once);
    CHECK(std::abs(weighted_mean(once)) < 1e-12 * (1 + test::max_abs(c)));
    for (std::size_t i = 0; i < n; ++i)
      CHECK(twice.values[i] == doctest::Approx(once.values[i]).epsilon(1e-12));
    CHECK(weighted_variance(once) == doctest::Approx(weighted_variance(c)));
  });
}

TEST_CASE("curve validation") {
  EffectCurve bad{.grid = {0, 0}, .values = {1, 2}, .counts = {1, 1}};
  CHECK_THROWS_AS(bad.validate(), UsageError);
  EffectCurve ragged{.grid = {0, 1}, .values = {1}, .counts = {1, 1}};
  CHECK_THROWS_AS(ragged.validate(), UsageError);
  CHECK(parse_curve_kind(to_string(CurveKind::LECross)) == CurveKind::LECross);
  CHECK_THROWS_AS(parse_curve_kind("bogus"), UsageError);
}

TEST_CASE("stats helpers") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(stats::mean(x) == 2.5);
  CHECK(stats::variance(x) == 1.25);
  CHECK(stats::quantile_sorted(x, 0.5) == 2.5);
  CHECK(stats::quantile_sorted(x, 0.0) == 1.0);
  CHECK(stats::quantile_sorted(x, 1.0) == 4.0);
  std::vector<double> y;
  for (double v : x) y.push_back(2 - v + 0.5 * v * v);
  const auto c = stats::polyfit(x, y, 2);
  CHECK(c[0] == doctest::Approx(2));
  CHECK(c[1] == doctest::Approx(-1));
  CHECK(c[2] == doctest::Approx(0.5));
}
