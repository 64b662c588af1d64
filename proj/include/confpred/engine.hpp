#pragma once

#include <string>
#include <vector>

#include "confpred/affine.hpp"
#include "confpred/example.hpp"
#include "confpred/measures.hpp"
#include "confpred/pvalue.hpp"
#include "confpred/region.hpp"

namespace confpred {

// finite-label classification by brute-force candidate sweep
struct ClassifyResult {
  PValueReport report;
  std::vector<LabelSet> regions;  // aligned with the epsilons argument
  std::vector<std::string> warnings;
};

// score each candidate label by inserting (x_new, label) into the bag and
// counting; a candidate whose measure evaluation fails is treated as maximally
// strange (p = 1/n) and recorded as a warning rather than a failure
ClassifyResult conformal_classify(const std::vector<Example>& old_examples,
                                  const std::vector<double>& x_new,
                                  const std::vector<std::string>& label_space,
                                  const Measure& measure,
                                  const std::vector<double>& epsilons);

// exact region {y : #{i : alpha_i(y) >= alpha_n(y)} > n*eps} for an affine
// score family; piecewise-constant count swept over its breakpoints, closed
// intervals merged
RealRegion conformal_regress_exact(const AffineScoreForm& family, double epsilon);
std::vector<RealRegion> conformal_regress_exact(const AffineScoreForm& family,
                                                const std::vector<double>& epsilons);

// prediction from label-only old examples under the average-distance measure
RealRegion conformal_old_examples(const std::vector<double>& values, double epsilon);

// count of family rows with alpha_i(y) >= alpha_n(y) at a concrete y
long long count_at(const AffineScoreForm& family, double y);

}  // namespace confpred
