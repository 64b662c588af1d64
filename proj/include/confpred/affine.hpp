#pragma once

#include <vector>

#include "confpred/example.hpp"

namespace confpred {

// per-example score forms alpha_i(y) = |c_i * y + d_i| for a symbolic
// candidate label y; c_i sign-normalized nonnegative; candidate row last
struct AffineScoreForm {
  std::vector<double> c;
  std::vector<double> d;

  std::size_t size() const { return c.size(); }
  double eval(std::size_t i, double y) const;
  void push(double ci, double di);  // flips sign jointly so c >= 0
};

// least-squares (with intercept) score of every example as an affine function
// of the unknown last label; xs holds all n objects, old_labels the first n-1
AffineScoreForm least_squares_affine(const std::vector<std::vector<double>>& xs,
                                     const std::vector<double>& old_labels);

// nearest-neighbor regression family: old rows keep constant scores computed
// from the old examples alone (c_i = 0), the candidate row is |y - yhat| with
// yhat the NN prediction at x_new; exact whenever adding the candidate cannot
// change any old example's nearest-neighbor set, which holds when the new
// object is not tied as nearest for any old object
AffineScoreForm nn_regression_family(const std::vector<Example>& old_examples,
                                     const std::vector<double>& x_new);

// average-distance family for label-only examples: with S the sum of the m
// old values, alpha_i(z) = |S + z - (m+1) v_i| / (m+1) and the candidate row
// is |m z - S| / (m+1)
AffineScoreForm old_examples_family(const std::vector<double>& values);

}  // namespace confpred
