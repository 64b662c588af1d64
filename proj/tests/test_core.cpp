#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "confpred/bag.hpp"
#include "confpred/example.hpp"
#include "confpred/pvalue.hpp"
#include "confpred/rational.hpp"
#include "confpred/region.hpp"
#include "confpred/rng.hpp"

using namespace confpred;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

Bag bag_of(std::initializer_list<double> vals) {
  std::vector<Example> v;
  for (double x : vals) v.push_back(Example::value(x));
  return Bag(std::move(v));
}

// all distinct orderings of the bag's items, by index permutation dedup
std::vector<std::vector<Example>> distinct_orderings(const Bag& bag) {
  std::vector<Example> items = bag.items();
  std::sort(items.begin(), items.end(), example_less);
  std::vector<std::vector<Example>> out;
  do {
    out.push_back(items);
  } while (std::next_permutation(items.begin(), items.end(), example_less));
  return out;
}
}  // namespace

TEST_CASE("rational arithmetic stays normalized") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(3, 4) - Rational(1, 4)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
  CHECK((Rational(1, 2) / Rational(3, 2)) == Rational(1, 3));
  CHECK(Rational(-1, -2) == Rational(1, 2));
  CHECK(Rational(1, -2) < Rational(0));
  CHECK(Rational(2, 5).str() == "2/5");
  CHECK(Rational(4).str() == "4");
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational(1, 2) / Rational(0));
}

TEST_CASE("bag equality ignores insertion order") {
  Bag a;
  a.add(Example::value(1));
  a.add(Example::value(2));
  a.add(Example::value(1));
  Bag b;
  b.add(Example::value(2));
  b.add(Example::value(1));
  b.add(Example::value(1));
  CHECK(a == b);
  CHECK(a.count(Example::value(1)) == 2);
  a.remove(Example::value(1));
  CHECK(a.count(Example::value(1)) == 1);
  CHECK_THROWS(a.remove(Example::value(9)));
}

TEST_CASE("draw probability is multiplicity over size") {
  Bag b = bag_of({1, 1, 2, 3, 3});
  CHECK(bag_draw_probability(b, Example::value(1)) == Rational(2, 5));
  CHECK(bag_draw_probability(b, Example::value(2)) == Rational(1, 5));
  CHECK(bag_draw_probability(b, Example::value(9)) == Rational(0));
  CHECK_THROWS(bag_draw_probability(Bag(), Example::value(1)));
}

TEST_CASE("ordering probability matches the multiplicity formula") {
  Bag b = bag_of({1, 1, 2, 3, 3});
  // 2! * 2! / 5! = 4/120 = 1/30
  CHECK(bag_ordering_probability(b, b.items()) == Rational(1, 30));
  auto wrong = bag_of({1, 2, 2, 3, 3}).items();
  CHECK(bag_ordering_probability(b, wrong) == Rational(0));
  CHECK_THROWS(bag_ordering_probability(b, bag_of({1, 1}).items()));
}

TEST_CASE("ordering probabilities sum to one for small bags") {
  std::vector<Bag> bags = {bag_of({1}),          bag_of({1, 1}),
                           bag_of({1, 2}),       bag_of({1, 1, 2}),
                           bag_of({1, 2, 3, 3}), bag_of({1, 1, 2, 2, 3}),
                           bag_of({1, 1, 1, 2, 2, 3, 4})};
  for (const auto& b : bags) {
    Rational total(0);
    for (const auto& ord : distinct_orderings(b)) total = total + bag_ordering_probability(b, ord);
    CHECK(total == Rational(1));
  }
}

TEST_CASE("p-value counts scores at least as strange as the candidate") {
  CHECK(p_value_from_scores({3, 1, 2, 2}).count == 3);
  CHECK(p_value_from_scores({3, 1, 2, 2}).total == 4);
  CHECK(p_value_from_scores({kInf, 1, kInf}).count == 2);
  CHECK(p_value_from_scores({0, 0, 0}).count == 3);
  CHECK(p_value_from_scores({5}).count == 1);
  CHECK_THROWS(p_value_from_scores({}));
}

TEST_CASE("p-value is invariant under monotone score transforms") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> scores;
    for (int i = 0; i < 9; ++i) scores.push_back(rng.uniform() * 4 - 2);
    auto p = p_value_from_scores(scores);
    std::vector<double> mapped;
    for (double s : scores) mapped.push_back(std::exp(s) + 3 * s);  // strictly increasing
    auto q = p_value_from_scores(mapped);
    CHECK(p.count == q.count);
    CHECK(p.total == q.total);
  }
}

TEST_CASE("region membership uses the strict comparison exactly") {
  PValue p{3, 60};
  CHECK_FALSE(p.exceeds(0.05));  // 3 > 0.05 * 60 = 3 is false
  CHECK(PValue{4, 60}.exceeds(0.05));
  CHECK(PValue{1, 25}.exceeds(0.0));
  CHECK_FALSE(PValue{25, 25}.exceeds(1.0));
}

TEST_CASE("confidence and credibility come from the two largest p-values") {
  PValueReport r;
  r.candidates = {{"s", {2, 25}}, {"v", {8, 25}}};
  auto [conf, cred] = confidence_credibility(r);
  CHECK(conf == doctest::Approx(0.92).epsilon(1e-12));
  CHECK(cred == doctest::Approx(0.32).epsilon(1e-12));

  PValueReport r2;
  r2.candidates = {{"s", {1, 25}}, {"v", {2, 25}}};
  auto [conf2, cred2] = confidence_credibility(r2);
  CHECK(conf2 == doctest::Approx(0.96).epsilon(1e-12));
  CHECK(cred2 == doctest::Approx(0.08).epsilon(1e-12));

  PValueReport solo;
  solo.candidates = {{"a", {5, 25}}};
  auto [conf3, cred3] = confidence_credibility(solo);
  CHECK(conf3 == 1.0);
  CHECK(cred3 == doctest::Approx(0.2));
}

TEST_CASE("label regions shrink as epsilon grows") {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    PValueReport r;
    long long total = 10 + static_cast<long long>(rng.below(20));
    for (int c = 0; c < 4; ++c)
      r.candidates.push_back({std::string(1, char('a' + c)),
                              {1 + static_cast<long long>(rng.below(total)), total}});
    double e1 = rng.uniform(), e2 = rng.uniform();
    if (e1 > e2) std::swap(e1, e2);
    CHECK(region_from_pvalues(r, e2).subset_of(region_from_pvalues(r, e1)));
  }
}

TEST_CASE("real regions merge overlaps and keep closed endpoints") {
  RealRegion r({{3, 4}, {1, 2.5}, {2, 3.5}});
  CHECK(r.parts().size() == 1);
  CHECK(r.parts()[0].lo == 1);
  CHECK(r.parts()[0].hi == 4);
  CHECK(r.contains(1));
  CHECK(r.contains(4));
  CHECK_FALSE(r.contains(4.0001));

  RealRegion gaps({{0, 1}, {2, 3}});
  CHECK(gaps.has_gaps());
  CHECK(gaps.hull().lo == 0);
  CHECK(gaps.hull().hi == 3);
  CHECK(gaps.subset_of(RealRegion::interval(0, 3)));
  CHECK_FALSE(RealRegion::interval(0, 3).subset_of(gaps));
}

TEST_CASE("grid snapping reports runs of lattice points") {
  auto g = grid_snap(RealRegion::interval(9.4002, 23.6525), 1.0);
  CHECK(g.parts().size() == 1);
  CHECK(g.parts()[0].lo == 10.0);
  CHECK(g.parts()[0].hi == 23.0);

  auto g2 = grid_snap(RealRegion({{0, 1.05}, {2.95, 4}}), 0.5);
  CHECK(g2.parts().size() == 2);
  CHECK(g2.parts()[0].lo == 0.0);
  CHECK(g2.parts()[0].hi == 1.0);
  CHECK(g2.parts()[1].lo == 3.0);
  CHECK(g2.parts()[1].hi == 4.0);

  // endpoint within 1e-12 of a lattice point still counts
  auto g3 = grid_snap(RealRegion::interval(0.1 + 5e-13, 0.3), 0.1);
  CHECK(g3.parts()[0].lo == doctest::Approx(0.1).epsilon(1e-12));

  auto g4 = grid_snap(RealRegion::interval(1.21, 1.29), 0.1);
  CHECK(g4.empty());

  CHECK_THROWS(grid_snap(RealRegion::interval(0, 1), 0.0));
  CHECK_THROWS(grid_snap(RealRegion::interval(0, kInf), 1.0));
}

TEST_CASE("grid snapping honors a shifted origin") {
  auto g = grid_snap(RealRegion::interval(0.24, 0.76), 0.5, 0.25);
  CHECK(g.parts().size() == 1);
  CHECK(g.parts()[0].lo == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g.parts()[0].hi == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("example ordering and distance guard arity") {
  CHECK(example_less(Example::value(1), Example::value(2)));
  CHECK_FALSE(example_less(Example::value(2), Example::value(2)));
  CHECK(object_distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
  CHECK_THROWS(object_distance({0}, {0, 1}));
}

TEST_CASE("seeded rng reproduces its stream and shuffles") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  std::vector<int> v1{1, 2, 3, 4, 5, 6, 7}, v2 = v1;
  Rng s1(9), s2(9);
  shuffle(v1, s1);
  shuffle(v2, s2);
  CHECK(v1 == v2);
  CHECK(Rng::mix(1, 2) == Rng::mix(1, 2));
  CHECK(Rng::mix(1, 2) != Rng::mix(2, 1));
}

TEST_CASE("uniform draws stay inside the unit interval") {
  Rng rng(3);
  double mean = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  CHECK(mean / n == doctest::Approx(0.5).epsilon(0.02));
}
