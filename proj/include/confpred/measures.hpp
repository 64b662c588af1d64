#pragma once

#include <string>
#include <vector>

#include "confpred/bag.hpp"
#include "confpred/example.hpp"

namespace confpred {

// whether a measure scores each example against the bag without it (deletion)
// or against the full bag including it (inclusion)
enum class ScoreStyle { deletion, inclusion };

// ---- individual measures ----

// |mean(bag plus z) - z| over real-valued examples; empty bag scores 0
double average_distance(const Bag& bag, const Example& z);

// nearest same-label distance over nearest different-label distance, z scored
// against `others` (z itself excluded); conventions: 0/0 -> 0, positive/0 -> +inf,
// no same-label neighbor -> +inf, no different-label neighbor -> 0,
// no neighbors at all -> 0
double nn_label_ratio(const Bag& others, const Example& z);

// distance from z's object to the mean object of its label class, with z pooled in
double label_mean_distance(const Bag& others, const Example& z);

// separating band for two-label 1-D data: [a, b] minimizing the miscount,
// widest among minimizers, then smallest left endpoint, endpoints at data values
struct Band {
  double a = 0;
  double b = 0;
  std::string low_label;  // label expected on the low side of the band
};
struct BandScores {
  Band band;
  std::vector<double> scores;  // 0 right side, 1 inside, +inf wrong side
};
BandScores separating_band(const Bag& bag);

// 1-nearest-neighbor regression: predicted label is the median label over all
// objects tied at the minimal distance (even count: mean of the two middle)
double point_predict_nn(const Bag& bag, const std::vector<double>& x);
// absolute residual |y(z) - prediction from `others`|
double nn_regression_residual(const Bag& others, const Example& z);

// least squares with intercept on the full bag: alpha_i = |y_i - yhat_i|
std::vector<double> least_squares_scores(const Bag& bag);
// deletion variant: residual against the fit without example i, equal to
// the full-fit residual scaled by 1/(1 - leverage_i)
std::vector<double> least_squares_deletion_scores(const Bag& bag);

// ---- uniform wrapper used by the sweep engines ----

class Measure {
 public:
  enum class Kind {
    average,
    knn_ratio,
    label_mean,
    band,
    knn_reg,
    least_squares,
    least_squares_deletion,
  };

  explicit Measure(Kind kind) : kind_(kind) {}
  // throws InputError listing the known names on an unknown name
  static Measure by_name(const std::string& name);
  static std::vector<std::string> known_names();

  Kind kind() const { return kind_; }
  std::string name() const;
  ScoreStyle style() const;

  // nonconformity score of every element of `bag` (any order), each computed
  // under this measure's own deletion/inclusion convention
  std::vector<double> score_all(const std::vector<Example>& bag) const;

 private:
  Kind kind_;
};

}  // namespace confpred
