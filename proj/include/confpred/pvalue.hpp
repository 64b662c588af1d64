#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "confpred/rational.hpp"
#include "confpred/region.hpp"

namespace confpred {

// p = #{i : scores[i] >= scores[n-1]} / n with the candidate in the last slot;
// +infinity compares >= +infinity, so the result is always >= 1/n
inline PValue p_value_from_scores(const std::vector<double>& scores) {
  if (scores.empty()) throw std::invalid_argument("p_value_from_scores: no scores");
  const double an = scores.back();
  long long count = 0;
  for (double a : scores)
    if (a >= an) ++count;
  return PValue{count, static_cast<long long>(scores.size())};
}

// p-values per candidate label plus the derived confidence/credibility pair
struct PValueReport {
  std::vector<std::pair<std::string, PValue>> candidates;
  double confidence = 1.0;
  double credibility = 1.0;
};

// labels whose p-value strictly exceeds epsilon, in canonical order
inline LabelSet region_from_pvalues(const PValueReport& report, double epsilon) {
  if (report.candidates.empty())
    throw std::invalid_argument("region_from_pvalues: empty report");
  LabelSet out;
  for (const auto& [lab, p] : report.candidates)
    if (p.exceeds(epsilon)) out.labels.push_back(lab);
  std::sort(out.labels.begin(), out.labels.end());
  return out;
}

// confidence = 1 - second-largest p-value, credibility = largest p-value;
// these are the greatest 1-eps giving a singleton region and the greatest eps
// giving an empty one; a single-candidate report gets confidence 1 by convention
inline std::pair<double, double> confidence_credibility(const PValueReport& report) {
  if (report.candidates.empty())
    throw std::invalid_argument("confidence_credibility: empty report");
  std::vector<double> ps;
  ps.reserve(report.candidates.size());
  for (const auto& [lab, p] : report.candidates) ps.push_back(p.value());
  std::sort(ps.begin(), ps.end(), std::greater<>());
  double credibility = ps[0];
  double confidence = ps.size() >= 2 ? 1.0 - ps[1] : 1.0;
  return {confidence, credibility};
}

}  // namespace confpred
