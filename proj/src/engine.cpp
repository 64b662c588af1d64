#include "confpred/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confpred/bag.hpp"
#include "confpred/errors.hpp"

namespace confpred {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

long long count_at(const AffineScoreForm& family, double y) {
  const std::size_t n = family.size();
  const double an = family.eval(n - 1, y);
  long long count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (family.eval(i, y) >= an) ++count;
  return count;
}

RealRegion conformal_regress_exact(const AffineScoreForm& family, double epsilon) {
  const std::size_t n = family.size();
  if (n == 0) throw MeasureError("conformal_regress_exact: empty family");
  const double cn = family.c[n - 1], dn = family.d[n - 1];

  // breakpoints: |c_i y + d_i| = |c_n y + d_n| crossings
  std::vector<double> bps;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ci = family.c[i], di = family.d[i];
    double den1 = ci - cn;
    if (den1 != 0.0) bps.push_back((dn - di) / den1);
    double den2 = ci + cn;
    if (den2 != 0.0) bps.push_back(-(di + dn) / den2);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  bps.erase(std::remove_if(bps.begin(), bps.end(),
                           [](double b) { return !std::isfinite(b); }),
            bps.end());

  const double thr = epsilon * static_cast<double>(n);
  auto in = [&](double y) { return static_cast<double>(count_at(family, y)) > thr; };

  std::vector<Interval> parts;
  if (bps.empty()) {
    if (in(0.0)) parts.push_back({-kInf, kInf});
    return RealRegion(std::move(parts));
  }
  if (in(bps.front() - 1.0)) parts.push_back({-kInf, bps.front()});
  for (std::size_t k = 0; k < bps.size(); ++k) {
    if (in(bps[k])) parts.push_back({bps[k], bps[k]});
    if (k + 1 < bps.size()) {
      double mid = bps[k] + (bps[k + 1] - bps[k]) / 2.0;
      if (in(mid)) parts.push_back({bps[k], bps[k + 1]});
    }
  }
  if (in(bps.back() + 1.0)) parts.push_back({bps.back(), kInf});
  return RealRegion(std::move(parts));
}

std::vector<RealRegion> conformal_regress_exact(const AffineScoreForm& family,
                                                const std::vector<double>& epsilons) {
  std::vector<RealRegion> out;
  out.reserve(epsilons.size());
  for (double e : epsilons) out.push_back(conformal_regress_exact(family, e));
  return out;
}

RealRegion conformal_old_examples(const std::vector<double>& values, double epsilon) {
  if (values.size() < 2) throw MeasureError("conformal_old_examples: need at least 2 values");
  return conformal_regress_exact(old_examples_family(values), epsilon);
}

ClassifyResult conformal_classify(const std::vector<Example>& old_examples,
                                  const std::vector<double>& x_new,
                                  const std::vector<std::string>& label_space,
                                  const Measure& measure,
                                  const std::vector<double>& epsilons) {
  if (label_space.empty()) throw InputError("conformal_classify: empty label space");
  ClassifyResult res;
  std::vector<std::string> labels = label_space;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  for (const auto& lab : labels) {
    std::vector<Example> bag = old_examples;
    bag.push_back(Example::with_cat(x_new, lab));
    PValue p;
    try {
      p = p_value_from_scores(measure.score_all(bag));
    } catch (const MeasureError& e) {
      // failed candidate counts as maximally strange
      p = PValue{1, static_cast<long long>(bag.size())};
      res.warnings.push_back("candidate '" + lab + "': " + e.what());
    }
    res.report.candidates.emplace_back(lab, p);
  }

  auto [conf, cred] = confidence_credibility(res.report);
  res.report.confidence = conf;
  res.report.credibility = cred;
  for (double eps : epsilons) {
    LabelSet region = region_from_pvalues(res.report, eps);
    if (region.empty())
      res.warnings.push_back("empty region at epsilon " + std::to_string(eps));
    res.regions.push_back(std::move(region));
  }
  return res;
}

}  // namespace confpred
