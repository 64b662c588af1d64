#include "confpred/measures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "confpred/errors.hpp"

namespace confpred {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double real_value(const Example& e) {
  if (!e.has_real()) throw MeasureError("measure requires real-valued labels");
  return e.real();
}

// ratio with the documented degenerate conventions
double ratio_score(double same, double diff) {
  if (std::isinf(same) && std::isinf(diff)) return 0.0;  // no neighbors at all
  if (std::isinf(diff)) return 0.0;                      // no different-label neighbor
  if (std::isinf(same)) return kInf;                     // no same-label neighbor
  if (diff == 0.0) return same == 0.0 ? 0.0 : kInf;
  return same / diff;
}

bool all_scalar(const std::vector<Example>& bag) {
  for (const auto& e : bag)
    if (e.x.size() != 1) return false;
  return true;
}

// nearest same-label and different-label distances for every element of the
// bag, self excluded; O(n log n) for 1-D objects, O(n^2) otherwise
void nn_distances(const std::vector<Example>& bag, std::vector<double>& same,
                  std::vector<double>& diff) {
  const std::size_t n = bag.size();
  same.assign(n, kInf);
  diff.assign(n, kInf);
  for (const auto& e : bag)
    if (!e.has_cat()) throw MeasureError("nn-ratio requires categorical labels");

  if (all_scalar(bag)) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return bag[a].x[0] < bag[b].x[0];
    });
    // same-label: nearest neighbor inside each label's sorted subsequence
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < n; ++k) groups[bag[order[k]].cat()].push_back(order[k]);
    for (const auto& [lab, g] : groups) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        double d = kInf;
        if (k > 0) d = std::min(d, bag[g[k]].x[0] - bag[g[k - 1]].x[0]);
        if (k + 1 < g.size()) d = std::min(d, bag[g[k + 1]].x[0] - bag[g[k]].x[0]);
        same[g[k]] = d;
      }
    }
    // different-label: sweep keeping the two most recent positions with
    // distinct labels; one of them must differ from any current label
    auto sweep = [&](bool forward) {
      long long last1 = -1, last2 = -1;  // indices into `order`
      auto lab_of = [&](long long t) -> const std::string& {
        return bag[order[static_cast<std::size_t>(t)]].cat();
      };
      for (std::size_t step = 0; step < n; ++step) {
        std::size_t k = forward ? step : n - 1 - step;
        std::size_t i = order[k];
        for (long long t : {last1, last2}) {
          if (t >= 0 && lab_of(t) != bag[i].cat()) {
            double d = std::fabs(bag[i].x[0] - bag[order[static_cast<std::size_t>(t)]].x[0]);
            diff[i] = std::min(diff[i], d);
          }
        }
        if (last1 < 0 || lab_of(last1) == bag[i].cat()) {
          last1 = static_cast<long long>(k);
        } else {
          last2 = last1;
          last1 = static_cast<long long>(k);
        }
      }
    };
    sweep(true);
    sweep(false);
    return;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double d = object_distance(bag[i].x, bag[j].x);
      if (bag[i].cat() == bag[j].cat())
        same[i] = std::min(same[i], d);
      else
        diff[i] = std::min(diff[i], d);
    }
  }
}

double scalar_object(const Example& e) {
  if (e.x.size() != 1) throw MeasureError("measure requires 1-D objects");
  return e.x[0];
}

// band search over both orientations; see header for the tie-breaking rules
BandScores band_fit(const std::vector<Example>& bag) {
  std::vector<std::string> labs;
  for (const auto& e : bag) {
    if (!e.has_cat()) throw MeasureError("band requires categorical labels");
    if (std::find(labs.begin(), labs.end(), e.cat()) == labs.end()) labs.push_back(e.cat());
  }
  if (labs.size() != 2) throw MeasureError("band requires exactly two labels in the bag");
  std::sort(labs.begin(), labs.end());

  std::vector<double> xs;
  xs.reserve(bag.size());
  for (const auto& e : bag) xs.push_back(scalar_object(e));
  std::vector<double> vals = xs;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  struct Key {
    long long mis;
    double neg_width;
    double a;
    int orient;
  };
  auto key_less = [](const Key& p, const Key& q) {
    if (p.mis != q.mis) return p.mis < q.mis;
    if (p.neg_width != q.neg_width) return p.neg_width < q.neg_width;
    if (p.a != q.a) return p.a < q.a;
    return p.orient < q.orient;
  };

  bool have = false;
  Key best_key{};
  Band best{};
  for (int orient = 0; orient < 2; ++orient) {
    const std::string& low = labs[static_cast<std::size_t>(orient)];
    std::vector<double> cand_a{-kInf}, cand_b;
    cand_a.insert(cand_a.end(), vals.begin(), vals.end());
    cand_b = vals;
    cand_b.push_back(kInf);
    for (double a : cand_a) {
      for (double b : cand_b) {
        if (b < a) continue;
        long long mis = 0;
        for (std::size_t i = 0; i < bag.size(); ++i) {
          if (bag[i].cat() == low) {
            if (xs[i] > a) ++mis;
          } else {
            if (xs[i] < b) ++mis;
          }
        }
        Key k{mis, -(b - a), a, orient};
        if (!have || key_less(k, best_key)) {
          have = true;
          best_key = k;
          best = Band{a, b, low};
        }
      }
    }
  }

  BandScores out;
  out.band = best;
  out.scores.reserve(bag.size());
  for (std::size_t i = 0; i < bag.size(); ++i) {
    double x = xs[i];
    double s;
    if (bag[i].cat() == best.low_label) {
      s = x > best.b ? kInf : (x > best.a ? 1.0 : 0.0);
    } else {
      s = x < best.a ? kInf : (x < best.b ? 1.0 : 0.0);
    }
    out.scores.push_back(s);
  }
  return out;
}

// least-squares fit with intercept; returns residuals and leverages
void ls_fit(const std::vector<Example>& bag, std::vector<double>& resid,
            std::vector<double>& leverage) {
  const std::size_t n = bag.size();
  if (n < 3) throw MeasureError("least squares requires at least 3 examples");
  std::size_t arity = bag.front().x.size();
  for (const auto& e : bag)
    if (e.x.size() != arity) throw MeasureError("feature arity mismatch");
  const std::size_t p = arity + 1;
  if (n <= p) throw MeasureError("least squares requires more examples than coefficients");

  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (std::size_t j = 0; j < arity; ++j)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = bag[i].x[j];
    y(static_cast<Eigen::Index>(i)) = real_value(bag[i]);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < static_cast<Eigen::Index>(p))
    throw MeasureError("degenerate design: rank-deficient least squares");
  Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
  if (diag.minCoeff() <= 0 || diag.maxCoeff() / diag.minCoeff() > 1e12)
    throw MeasureError("degenerate design: condition number above 1e12");

  Eigen::VectorXd beta = qr.solve(y);
  Eigen::VectorXd r = y - X * beta;
  resid.assign(r.data(), r.data() + n);

  // leverage_i = x_i' (X'X)^-1 x_i via triangular solves on R with the pivot
  Eigen::MatrixXd R = qr.matrixR()
                          .topLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))
                          .template triangularView<Eigen::Upper>();
  const auto& perm = qr.colsPermutation();
  leverage.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd xi = X.row(static_cast<Eigen::Index>(i)).transpose();
    Eigen::VectorXd px = perm.inverse() * xi;
    Eigen::VectorXd w = R.transpose().triangularView<Eigen::Lower>().solve(px);
    leverage[i] = w.squaredNorm();
  }
}

}  // namespace

double average_distance(const Bag& bag, const Example& z) {
  double zv = real_value(z);
  double sum = zv;
  for (const auto& e : bag.items()) sum += real_value(e);
  double mean = sum / static_cast<double>(bag.size() + 1);
  return std::fabs(mean - zv);
}

double nn_label_ratio(const Bag& others, const Example& z) {
  if (!z.has_cat()) throw MeasureError("nn-ratio requires categorical labels");
  double same = kInf, diff = kInf;
  for (const auto& e : others.items()) {
    if (!e.has_cat()) throw MeasureError("nn-ratio requires categorical labels");
    double d = object_distance(e.x, z.x);
    if (e.cat() == z.cat())
      same = std::min(same, d);
    else
      diff = std::min(diff, d);
  }
  return ratio_score(same, diff);
}

double label_mean_distance(const Bag& others, const Example& z) {
  if (!z.has_cat()) throw MeasureError("label-mean requires categorical labels");
  double sum = scalar_object(z);
  std::size_t cnt = 1;
  for (const auto& e : others.items()) {
    if (!e.has_cat()) throw MeasureError("label-mean requires categorical labels");
    if (e.cat() == z.cat()) {
      sum += scalar_object(e);
      ++cnt;
    }
  }
  return std::fabs(sum / static_cast<double>(cnt) - scalar_object(z));
}

BandScores separating_band(const Bag& bag) { return band_fit(bag.items()); }

double point_predict_nn(const Bag& bag, const std::vector<double>& x) {
  if (bag.empty()) throw MeasureError("nearest-neighbor prediction from an empty bag");
  double best = kInf;
  for (const auto& e : bag.items()) best = std::min(best, object_distance(e.x, x));
  std::vector<double> labs;
  for (const auto& e : bag.items())
    if (object_distance(e.x, x) <= best) labs.push_back(real_value(e));
  std::sort(labs.begin(), labs.end());
  std::size_t k = labs.size();
  return (labs[(k - 1) / 2] + labs[k / 2]) / 2.0;  // median, ties averaged
}

double nn_regression_residual(const Bag& others, const Example& z) {
  return std::fabs(real_value(z) - point_predict_nn(others, z.x));
}

std::vector<double> least_squares_scores(const Bag& bag) {
  std::vector<double> resid, leverage;
  ls_fit(bag.items(), resid, leverage);
  for (auto& r : resid) r = std::fabs(r);
  return resid;
}

std::vector<double> least_squares_deletion_scores(const Bag& bag) {
  std::vector<double> resid, leverage;
  ls_fit(bag.items(), resid, leverage);
  for (std::size_t i = 0; i < resid.size(); ++i) {
    double denom = 1.0 - leverage[i];
    resid[i] = denom <= 1e-12 ? kInf : std::fabs(resid[i]) / denom;
  }
  return resid;
}

Measure Measure::by_name(const std::string& name) {
  if (name == "average") return Measure(Kind::average);
  if (name == "knn-ratio") return Measure(Kind::knn_ratio);
  if (name == "label-mean") return Measure(Kind::label_mean);
  if (name == "band") return Measure(Kind::band);
  if (name == "knn-reg") return Measure(Kind::knn_reg);
  if (name == "least-squares") return Measure(Kind::least_squares);
  if (name == "least-squares-deletion") return Measure(Kind::least_squares_deletion);
  std::ostringstream os;
  os << "unknown measure '" << name << "'; known measures:";
  for (const auto& n : known_names()) os << " " << n;
  throw InputError(os.str());
}

std::vector<std::string> Measure::known_names() {
  return {"average", "knn-ratio", "label-mean", "band", "knn-reg", "least-squares"};
}

std::string Measure::name() const {
  switch (kind_) {
    case Kind::average: return "average";
    case Kind::knn_ratio: return "knn-ratio";
    case Kind::label_mean: return "label-mean";
    case Kind::band: return "band";
    case Kind::knn_reg: return "knn-reg";
    case Kind::least_squares: return "least-squares";
    case Kind::least_squares_deletion: return "least-squares-deletion";
  }
  return "?";
}

ScoreStyle Measure::style() const {
  switch (kind_) {
    case Kind::knn_ratio:
    case Kind::knn_reg:
    case Kind::least_squares_deletion:
      return ScoreStyle::deletion;
    default:
      return ScoreStyle::inclusion;
  }
}

std::vector<double> Measure::score_all(const std::vector<Example>& bag) const {
  const std::size_t n = bag.size();
  if (n == 0) throw MeasureError("score_all: empty bag");
  std::vector<double> out(n, 0.0);
  switch (kind_) {
    case Kind::average: {
      double sum = 0;
      for (const auto& e : bag) sum += real_value(e);
      double mean = sum / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(mean - real_value(bag[i]));
      return out;
    }
    case Kind::knn_ratio: {
      std::vector<double> same, diff;
      nn_distances(bag, same, diff);
      for (std::size_t i = 0; i < n; ++i) out[i] = ratio_score(same[i], diff[i]);
      return out;
    }
    case Kind::label_mean: {
      std::map<std::string, std::pair<double, std::size_t>> acc;
      for (const auto& e : bag) {
        if (!e.has_cat()) throw MeasureError("label-mean requires categorical labels");
        auto& a = acc[e.cat()];
        a.first += scalar_object(e);
        a.second += 1;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = acc[bag[i].cat()];
        out[i] = std::fabs(a.first / static_cast<double>(a.second) - scalar_object(bag[i]));
      }
      return out;
    }
    case Kind::band:
      return band_fit(bag).scores;
    case Kind::knn_reg: {
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Example> rest;
        rest.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) rest.push_back(bag[j]);
        out[i] = nn_regression_residual(Bag(std::move(rest)), bag[i]);
      }
      return out;
    }
    case Kind::least_squares:
      return least_squares_scores(Bag(bag));
    case Kind::least_squares_deletion:
      return least_squares_deletion_scores(Bag(bag));
  }
  throw MeasureError("unreachable measure kind");
}

}  // namespace confpred
