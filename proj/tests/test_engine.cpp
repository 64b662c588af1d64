#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "confpred/affine.hpp"
#include "confpred/dataset.hpp"
#include "confpred/engine.hpp"
#include "confpred/fixtures.hpp"
#include "confpred/rng.hpp"

using namespace confpred;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

std::vector<double> czuber_old() {
  auto v = numeric_column(fixture_czuber(), "z");
  v.pop_back();
  return v;
}

std::vector<Example> iris_reg() {
  return to_examples(fixture_iris25(), "petal_width", {"sepal_length"});
}
std::vector<Example> iris_class() {
  return to_examples(fixture_iris25(), "species", {"sepal_length"});
}

// the two candidate/row crossing points of |c_i y + d_i| = |c_n y + d_n|
std::pair<double, double> crossings(const AffineScoreForm& f, std::size_t i) {
  std::size_t n = f.size() - 1;
  double r1 = (f.d[i] - f.d[n]) / (f.c[n] - f.c[i]);
  double r2 = -(f.d[i] + f.d[n]) / (f.c[i] + f.c[n]);
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}
}  // namespace

TEST_CASE("label-only prediction on the tree heights") {
  auto region = conformal_old_examples(czuber_old(), 0.05);
  REQUIRE(region.parts().size() == 1);
  CHECK(region.parts()[0].lo == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(region.parts()[0].hi == doctest::Approx(214.0 / 9.0).epsilon(1e-6));
  // closed endpoints: both boundary values still qualify
  CHECK(region.contains(region.parts()[0].lo));
  CHECK(region.contains(region.parts()[0].hi));
  auto g = grid_snap(region, 1.0);
  CHECK(g.parts().size() == 1);
  CHECK(g.parts()[0].lo == 10.0);
  CHECK(g.parts()[0].hi == 23.0);
}

TEST_CASE("constant history pins the region to the repeated value") {
  auto r = conformal_old_examples({5, 5, 5}, 0.5);
  REQUIRE(r.parts().size() == 1);
  CHECK(r.parts()[0].lo == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.parts()[0].hi == doctest::Approx(5.0).epsilon(1e-12));
  // a lower epsilon cannot exclude anything: one qualifying score is enough
  auto wide = conformal_old_examples({5, 5, 5}, 0.24);
  REQUIRE(wide.parts().size() == 1);
  CHECK(std::isinf(wide.parts()[0].lo));
  CHECK(std::isinf(wide.parts()[0].hi));
}

TEST_CASE("two spread values give the hand-solved union") {
  auto r = conformal_old_examples({0, 10}, 0.5);
  REQUIRE(r.parts().size() == 1);
  CHECK(r.parts()[0].lo == doctest::Approx(-10.0).epsilon(1e-9));
  CHECK(r.parts()[0].hi == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("exact engine matches a dense scan on random families") {
  Rng rng(2024);
  for (int t = 0; t < 60; ++t) {
    int n = 2 + static_cast<int>(rng.below(11));
    AffineScoreForm fam;
    for (int i = 0; i < n; ++i) {
      double c = rng.below(4) == 0 ? 0.0 : rng.uniform() * 3.0;
      if (i + 1 == n && c == 0.0) c = 0.5 + rng.uniform();  // candidate must move
      fam.push(c, rng.uniform() * 10.0 - 5.0);
    }
    double eps = rng.uniform() * 0.9 + 0.05;
    auto region = conformal_regress_exact(fam, eps);
    const double bound = static_cast<double>(n) * eps;
    for (int k = 0; k <= 10000; ++k) {
      double y = -30.0 + 60.0 * k / 10000.0;
      bool scan = static_cast<double>(count_at(fam, y)) > bound;
      bool member = region.contains(y);
      if (scan != member) {
        double gap = kInf;
        for (const auto& iv : region.parts()) {
          gap = std::min(gap, std::fabs(y - iv.lo));
          gap = std::min(gap, std::fabs(y - iv.hi));
        }
        CHECK(gap <= 1e-9);  // disagreement only on a boundary point
      }
    }
    // membership at a finite endpoint, probed a hair inside the interval so
    // that 1-ulp rounding of the stored breakpoint cannot drop the tangent row
    for (const auto& iv : region.parts()) {
      double mid = std::isfinite(iv.lo) && std::isfinite(iv.hi) ? 0.5 * (iv.lo + iv.hi)
                   : std::isfinite(iv.lo)                       ? iv.lo + 1.0
                                                                : iv.hi - 1.0;
      if (std::isfinite(iv.lo)) {
        double probe = iv.lo + std::min(1e-9, 0.5 * (mid - iv.lo));
        CHECK(static_cast<double>(count_at(fam, probe)) > bound);
      }
      if (std::isfinite(iv.hi)) {
        double probe = iv.hi - std::min(1e-9, 0.5 * (iv.hi - mid));
        CHECK(static_cast<double>(count_at(fam, probe)) > bound);
      }
    }
  }
}

TEST_CASE("least squares family rows for the iris regression") {
  auto all = iris_reg();
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (const auto& e : all) xs.push_back(e.x);
  for (std::size_t i = 0; i + 1 < all.size(); ++i) ys.push_back(all[i].real());
  auto fam = least_squares_affine(xs, ys);
  REQUIRE(fam.size() == 25);

  auto row = [&](int i, double c, double d) {
    CHECK(fam.c[i] == doctest::Approx(c).epsilon(1e-7));
    CHECK(fam.d[i] == doctest::Approx(d).epsilon(1e-7));
  };
  row(0, 0.004304927, -0.146939417);
  row(1, 0.070104324, 0.051665410);
  row(14, 0.004304927, 0.553060583);
  row(17, 0.050527903, 0.495776772);
  row(24, 0.806906737, -1.342753896);

  auto [a15, b15] = crossings(fam, 14);
  CHECK(a15 == doctest::Approx(0.973473815).epsilon(1e-7));
  CHECK(b15 == doctest::Approx(2.362085976).epsilon(1e-7));
  auto [a18, b18] = crossings(fam, 17);
  CHECK(a18 == doctest::Approx(0.987803716).epsilon(1e-7));
  CHECK(b18 == doctest::Approx(2.430700843).epsilon(1e-7));

  auto r96 = conformal_regress_exact(fam, 0.04);
  REQUIRE(r96.parts().size() == 1);
  CHECK(r96.parts()[0].lo == doctest::Approx(0.973473815).epsilon(1e-8));
  CHECK(r96.parts()[0].hi == doctest::Approx(2.430700843).epsilon(1e-8));
  auto g96 = grid_snap(r96, 0.1);
  CHECK(g96.parts()[0].lo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g96.parts()[0].hi == doctest::Approx(2.4).epsilon(1e-9));

  auto r92 = conformal_regress_exact(fam, 0.08);
  REQUIRE(r92.parts().size() == 1);
  CHECK(r92.parts()[0].lo == doctest::Approx(0.987803716).epsilon(1e-8));
  CHECK(r92.parts()[0].hi == doctest::Approx(2.362085976).epsilon(1e-8));
  auto g92 = grid_snap(r92, 0.1);
  CHECK(g92.parts()[0].lo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g92.parts()[0].hi == doctest::Approx(2.3).epsilon(1e-9));
}

TEST_CASE("nearest-neighbor family regions for the iris regression") {
  auto all = iris_reg();
  std::vector<Example> old(all.begin(), all.end() - 1);
  auto fam = nn_regression_family(old, {6.8});
  REQUIRE(fam.size() == 25);
  CHECK(fam.c[24] == doctest::Approx(1.0));
  CHECK(fam.d[24] == doctest::Approx(-1.55).epsilon(1e-12));

  auto r96 = conformal_regress_exact(fam, 0.04);
  REQUIRE(r96.parts().size() == 1);
  CHECK(r96.parts()[0].lo == doctest::Approx(0.85).epsilon(1e-9));
  CHECK(r96.parts()[0].hi == doctest::Approx(2.25).epsilon(1e-9));
  auto g96 = grid_snap(r96, 0.1);
  CHECK(g96.parts()[0].lo == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(g96.parts()[0].hi == doctest::Approx(2.2).epsilon(1e-9));

  auto r92 = conformal_regress_exact(fam, 0.08);
  REQUIRE(r92.parts().size() == 1);
  CHECK(r92.parts()[0].lo == doctest::Approx(1.15).epsilon(1e-9));
  CHECK(r92.parts()[0].hi == doctest::Approx(1.95).epsilon(1e-9));
  auto g92 = grid_snap(r92, 0.1);
  CHECK(g92.parts()[0].lo == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(g92.parts()[0].hi == doctest::Approx(1.9).epsilon(1e-9));
}

TEST_CASE("engine reproduces a hand-built constant-score family") {
  // fixed old scores, candidate |y - 1.55|: the widest region keeps the
  // largest old score, the next one keeps the runner-up
  const double given[] = {0.30, 0.00, 0.25, 0.00, 0.15, 0.30, 0.40, 0.20,
                          0.30, 0.20, 0.15, 0.05, 0.30, 0.00, 0.75, 0.30,
                          0.20, 0.20, 0.20, 0.00, 0.00, 0.20, 0.10, 0.05};
  AffineScoreForm fam;
  for (double s : given) fam.push(0.0, s);
  fam.push(1.0, -1.55);

  auto r96 = conformal_regress_exact(fam, 0.04);
  REQUIRE(r96.parts().size() == 1);
  CHECK(r96.parts()[0].lo == doctest::Approx(0.80).epsilon(1e-12));
  CHECK(r96.parts()[0].hi == doctest::Approx(2.30).epsilon(1e-12));
  auto g = grid_snap(r96, 0.1);
  CHECK(g.parts()[0].lo == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(g.parts()[0].hi == doctest::Approx(2.3).epsilon(1e-9));

  auto r92 = conformal_regress_exact(fam, 0.08);
  CHECK(r92.parts()[0].lo == doctest::Approx(1.15).epsilon(1e-12));
  CHECK(r92.parts()[0].hi == doctest::Approx(1.95).epsilon(1e-12));
}

TEST_CASE("iris classification p-values, regions, and scores") {
  auto all = iris_class();
  std::vector<Example> old(all.begin(), all.end() - 1);
  std::vector<std::string> space = {"setosa", "versicolor"};
  const std::vector<double> eps = {0.08, 0.05, 1.0 / 3.0};

  auto check_p = [](const ClassifyResult& r, long long cs, long long cv) {
    REQUIRE(r.report.candidates.size() == 2);
    CHECK(r.report.candidates[0].first == "setosa");
    CHECK(r.report.candidates[0].second.count == cs);
    CHECK(r.report.candidates[0].second.total == 25);
    CHECK(r.report.candidates[1].first == "versicolor");
    CHECK(r.report.candidates[1].second.count == cv);
    CHECK(r.report.candidates[1].second.total == 25);
  };

  auto nn = conformal_classify(old, {6.8}, space, Measure::by_name("knn-ratio"), eps);
  check_p(nn, 2, 8);
  CHECK(nn.report.confidence == doctest::Approx(0.92).epsilon(1e-12));
  CHECK(nn.report.credibility == doctest::Approx(0.32).epsilon(1e-12));
  CHECK(nn.regions[0].labels == std::vector<std::string>{"versicolor"});
  CHECK(nn.regions[1].labels == std::vector<std::string>{"setosa", "versicolor"});
  CHECK(nn.regions[2].empty());

  auto lm = conformal_classify(old, {6.8}, space, Measure::by_name("label-mean"), eps);
  check_p(lm, 1, 2);
  CHECK(lm.report.confidence == doctest::Approx(0.96).epsilon(1e-12));
  CHECK(lm.report.credibility == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(lm.regions[0].empty());  // 2/25 does not exceed 0.08
  bool warned_empty = false;
  for (const auto& w : lm.warnings)
    if (w.find("empty") != std::string::npos) warned_empty = true;
  CHECK(warned_empty);

  auto bd = conformal_classify(old, {6.8}, space, Measure::by_name("band"), eps);
  check_p(bd, 2, 25);
  CHECK(bd.report.confidence == doctest::Approx(0.92).epsilon(1e-12));
  CHECK(bd.report.credibility == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bd.regions[0].labels == std::vector<std::string>{"versicolor"});
}

TEST_CASE("one old example keeps every label in a moderate region") {
  std::vector<Example> old = {Example::with_cat({0.0}, "a")};
  auto res = conformal_classify(old, {1.0}, {"a", "b"}, Measure::by_name("knn-ratio"),
                                {0.4});
  CHECK(res.regions[0].size() == 2);
  for (const auto& [lab, p] : res.report.candidates) CHECK(p.total == 2);
}

TEST_CASE("a failing measure marks the candidate maximally strange") {
  std::vector<Example> old = {Example::with_cat({0.0}, "a"), Example::with_cat({1.0}, "b")};
  auto res = conformal_classify(old, {0.5}, {"a", "b"}, Measure::by_name("least-squares"),
                                {0.1});
  REQUIRE(res.report.candidates.size() == 2);
  for (const auto& [lab, p] : res.report.candidates) {
    CHECK(p.count == 1);
    CHECK(p.total == 3);
  }
  REQUIRE(res.warnings.size() >= 2);
  CHECK(res.warnings[0].find("candidate") != std::string::npos);
}

TEST_CASE("multi-epsilon regression output aligns with its epsilon list") {
  auto fam = old_examples_family(czuber_old());
  std::vector<double> eps = {0.05, 0.5};
  auto regions = conformal_regress_exact(fam, eps);
  REQUIRE(regions.size() == 2);
  CHECK(regions[1].subset_of(regions[0]));
  CHECK(regions[0].parts()[0].lo == doctest::Approx(10.0).epsilon(1e-6));
}
