#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "confpred/dataset.hpp"
#include "confpred/errors.hpp"
#include "confpred/fixtures.hpp"
#include "confpred/gaussian.hpp"
#include "confpred/rng.hpp"
#include "confpred/tdist.hpp"

using namespace confpred;

namespace {
std::vector<std::vector<double>> iris_design() {
  auto d = to_examples(fixture_iris25(), "petal_width", {"sepal_length"});
  std::vector<std::vector<double>> xs;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) xs.push_back({1.0, d[i].x[0]});
  return xs;
}
std::vector<double> iris_labels() {
  auto d = to_examples(fixture_iris25(), "petal_width", {"sepal_length"});
  std::vector<double> ys;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) ys.push_back(d[i].real());
  return ys;
}
}  // namespace

TEST_CASE("straight-line interval for the last iris flower") {
  auto xs = iris_design();
  auto ys = iris_labels();
  auto r96 = gaussian_linear_interval(xs, ys, {1.0, 6.8}, 0.04);
  CHECK(r96.center == doctest::Approx(1.664075704).epsilon(1e-8));
  CHECK(r96.s * r96.s == doctest::Approx(0.077958502).epsilon(1e-8));
  CHECK(r96.s * std::sqrt(1.0 + r96.leverage) == doctest::Approx(0.310827955).epsilon(1e-8));
  CHECK(r96.interval.lo == doctest::Approx(0.985571646).epsilon(1e-8));
  CHECK(r96.interval.hi == doctest::Approx(2.342579762).epsilon(1e-8));

  auto r92 = gaussian_linear_interval(xs, ys, {1.0, 6.8}, 0.08);
  CHECK(r92.interval.lo == doctest::Approx(1.093576923).epsilon(1e-8));
  CHECK(r92.interval.hi == doctest::Approx(2.234574484).epsilon(1e-8));

  auto g96 = grid_snap(RealRegion({r96.interval}), 0.1);
  CHECK(g96.parts()[0].lo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g96.parts()[0].hi == doctest::Approx(2.3).epsilon(1e-9));
  auto g92 = grid_snap(RealRegion({r92.interval}), 0.1);
  CHECK(g92.parts()[0].lo == doctest::Approx(1.1).epsilon(1e-9));
  CHECK(g92.parts()[0].hi == doctest::Approx(2.2).epsilon(1e-9));
}

TEST_CASE("t-interval on the tree heights") {
  auto values = numeric_column(fixture_czuber(), "z");
  values.pop_back();
  auto res = fisher_interval(values, 0.05);
  CHECK(res.center == doctest::Approx(16.526315789).epsilon(1e-8));
  CHECK(res.s == doctest::Approx(3.306028518).epsilon(1e-8));
  CHECK(res.interval.lo == doctest::Approx(9.400169558).epsilon(1e-8));
  CHECK(res.interval.hi == doctest::Approx(23.652462021).epsilon(1e-8));
  auto g = grid_snap(RealRegion({res.interval}), 1.0);
  CHECK(g.parts()[0].lo == 10.0);
  CHECK(g.parts()[0].hi == 23.0);
}

TEST_CASE("intercept-only model and the plain t-interval agree bit for bit") {
  auto values = numeric_column(fixture_czuber(), "z");
  values.pop_back();
  std::vector<std::vector<double>> ones(values.size(), std::vector<double>{1.0});
  for (double eps : {0.05, 0.1, 0.3}) {
    auto a = fisher_interval(values, eps);
    auto b = gaussian_linear_interval(ones, values, {1.0}, eps);
    CHECK(a.interval.lo == b.interval.lo);
    CHECK(a.interval.hi == b.interval.hi);
    CHECK(a.center == b.center);
    CHECK(a.half_width == b.half_width);
  }
}

TEST_CASE("small binary history gives an interval symmetric about its mean") {
  auto res = fisher_interval({0, 0, 0, 1}, 0.5);
  CHECK(res.center == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(res.interval.lo + res.interval.hi == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.interval.hi > res.interval.lo);
}

TEST_CASE("constant history degenerates to a point with a warning") {
  auto res = fisher_interval({5, 5, 5, 5}, 0.1);
  CHECK(res.interval.lo == doctest::Approx(5.0));
  CHECK(res.interval.hi == doctest::Approx(5.0));
  REQUIRE_FALSE(res.warnings.empty());
  CHECK(res.warnings[0].find("degenerate") != std::string::npos);
}

TEST_CASE("model preconditions are enforced") {
  CHECK_THROWS_AS(fisher_interval({1, 2}, 0.05), ModelError);
  std::vector<std::vector<double>> xs = {{1, 2}, {2, 4}};
  CHECK_THROWS_AS(gaussian_linear_interval(xs, {1, 2}, {1, 1}, 0.05), ModelError);
  std::vector<std::vector<double>> collinear = {{1, 2}, {2, 4}, {3, 6}};
  CHECK_THROWS_AS(gaussian_linear_interval(collinear, {1, 2, 3}, {1, 1}, 0.05), ModelError);
  std::vector<std::vector<double>> ok = {{1, 0}, {1, 1}, {1, 2}};
  CHECK_THROWS_AS(gaussian_linear_interval(ok, {0, 1, 2}, {1}, 0.05), ModelError);
  CHECK_THROWS_AS(gaussian_linear_interval(ok, {0, 1, 2}, {1, 1}, 0.0), ModelError);
}

TEST_CASE("the t-statistic is centered and scales as expected") {
  auto xs = iris_design();
  auto ys = iris_labels();
  auto res = gaussian_linear_interval(xs, ys, {1.0, 6.8}, 0.04);
  CHECK(gaussian_t_stat(xs, ys, {1.0, 6.8}, res.center) == doctest::Approx(0.0));
  double up = gaussian_t_stat(xs, ys, {1.0, 6.8}, res.center + 0.31);
  double dn = gaussian_t_stat(xs, ys, {1.0, 6.8}, res.center - 0.31);
  CHECK(up == doctest::Approx(-dn).epsilon(1e-12));
  // the interval endpoint maps to the quantile itself
  CHECK(gaussian_t_stat(xs, ys, {1.0, 6.8}, res.interval.hi) ==
        doctest::Approx(t_quantile(22, 0.02)).epsilon(1e-9));
}

TEST_CASE("sphere samples satisfy their moment constraints") {
  Rng rng(99);
  GaussianSummary sum;
  Rng gen(3);
  for (int i = 0; i < 8; ++i)
    sum.update({1.0, gen.normal(), gen.normal()}, 2.0 + gen.normal());
  for (int k = 0; k < 200; ++k) {
    auto y = sphere_conditional_sample(sum, rng);
    REQUIRE(y.size() == 8);
    double yty = 0;
    std::vector<double> xty(3, 0.0);
    for (int i = 0; i < 8; ++i) {
      yty += y[i] * y[i];
      for (int j = 0; j < 3; ++j) xty[j] += sum.rows[i][j] * y[i];
    }
    CHECK(yty == doctest::Approx(sum.yty).epsilon(1e-9));
    for (int j = 0; j < 3; ++j) CHECK(xty[j] == doctest::Approx(sum.xty[j]).epsilon(1e-9));
  }
}

TEST_CASE("free sphere samples average half their energy on one coordinate") {
  // two coordinates, no linear constraint, unit radius
  GaussianSummary sum;
  sum.rows = {{}, {}};
  sum.xty = {};
  sum.yty = 1.0;
  Rng rng(5);
  double acc = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    auto y = sphere_conditional_sample(sum, rng);
    CHECK(std::fabs(y[0] * y[0] + y[1] * y[1] - 1.0) < 1e-9);
    acc += y[0] * y[0];
  }
  CHECK(acc / draws == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sphere t-statistics look like the matching t distribution") {
  // moderate-size check; the full-size one runs in the acceptance suite
  Rng gen(17);
  GaussianSummary sum;
  std::vector<std::vector<double>> xs;
  const int n = 12, p = 2;
  for (int i = 0; i < n; ++i) {
    std::vector<double> x{1.0, gen.normal()};
    xs.push_back(x);
    sum.update(x, 1.0 + 0.5 * x[1] + gen.normal());
  }
  std::vector<std::vector<double>> xs_old(xs.begin(), xs.end() - 1);
  Rng rng(31);
  const int draws = 20000;
  std::vector<double> us;
  us.reserve(draws);
  for (int k = 0; k < draws; ++k) {
    auto y = sphere_conditional_sample(sum, rng);
    std::vector<double> ys_old(y.begin(), y.end() - 1);
    double t = gaussian_t_stat(xs_old, ys_old, xs.back(), y.back());
    us.push_back(t_cdf(n - p - 1, t));
  }
  std::sort(us.begin(), us.end());
  double ks = 0.0;
  for (int i = 0; i < draws; ++i) {
    double lo = static_cast<double>(i) / draws, hi = static_cast<double>(i + 1) / draws;
    ks = std::max(ks, std::max(std::fabs(us[i] - lo), std::fabs(us[i] - hi)));
  }
  CHECK(ks < 0.015);
}
