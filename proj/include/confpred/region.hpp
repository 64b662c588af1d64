#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace confpred {

// closed interval; endpoints may be +-infinity
struct Interval {
  double lo = 0;
  double hi = 0;
};

// finite union of disjoint closed intervals, kept sorted and merged
class RealRegion {
 public:
  RealRegion() = default;
  explicit RealRegion(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }
  static RealRegion interval(double lo, double hi) { return RealRegion({{lo, hi}}); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool has_gaps() const { return parts_.size() > 1; }

  Interval hull() const {
    if (parts_.empty()) throw std::logic_error("RealRegion::hull: empty region");
    return {parts_.front().lo, parts_.back().hi};
  }

  bool contains(double y, double tol = 0.0) const {
    for (const auto& iv : parts_)
      if (y >= iv.lo - tol && y <= iv.hi + tol) return true;
    return false;
  }

  // every point of this region lies in other, up to endpoint tolerance
  bool subset_of(const RealRegion& other, double tol = 1e-12) const {
    for (const auto& iv : parts_) {
      bool covered = false;
      for (const auto& ov : other.parts_) {
        if (iv.lo >= ov.lo - tol && iv.hi <= ov.hi + tol) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
    return true;
  }

 private:
  void normalize() {
    for (auto& iv : parts_)
      if (iv.lo > iv.hi) std::swap(iv.lo, iv.hi);
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& iv : parts_) {
      if (!merged.empty() && iv.lo <= merged.back().hi) {
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      } else {
        merged.push_back(iv);
      }
    }
    parts_ = std::move(merged);
  }

  std::vector<Interval> parts_;
};

// lattice points origin + k*step inside the closed region, reported as the
// interval hull of every maximal run of consecutive lattice points;
// endpoint membership uses tolerance 1e-12 so ties resolve deterministically
inline RealRegion grid_snap(const RealRegion& region, double step, double origin = 0.0) {
  if (!(step > 0)) throw std::invalid_argument("grid_snap: step must be positive");
  const double tol = 1e-12;
  std::vector<long long> ks;
  for (const auto& iv : region.parts()) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw std::invalid_argument("grid_snap: unbounded region");
    long long klo = static_cast<long long>(std::ceil((iv.lo - origin - tol) / step));
    long long khi = static_cast<long long>(std::floor((iv.hi - origin + tol) / step));
    for (long long k = klo; k <= khi; ++k) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<Interval> runs;
  std::size_t i = 0;
  while (i < ks.size()) {
    std::size_t j = i;
    while (j + 1 < ks.size() && ks[j + 1] == ks[j] + 1) ++j;
    runs.push_back({origin + static_cast<double>(ks[i]) * step,
                    origin + static_cast<double>(ks[j]) * step});
    i = j + 1;
  }
  return RealRegion(std::move(runs));
}

// finite set of categorical labels, canonical order
struct LabelSet {
  std::vector<std::string> labels;

  bool empty() const { return labels.empty(); }
  std::size_t size() const { return labels.size(); }
  bool contains(const std::string& lab) const {
    return std::find(labels.begin(), labels.end(), lab) != labels.end();
  }
  bool subset_of(const LabelSet& other) const {
    for (const auto& l : labels)
      if (!other.contains(l)) return false;
    return true;
  }
};

}  // namespace confpred
