#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "confpred/region.hpp"
#include "confpred/rng.hpp"

namespace confpred {

// sufficient summary of the on-line Gaussian linear model:
// the design rows plus the moments X'Y and Y'Y
struct GaussianSummary {
  std::vector<std::vector<double>> rows;  // x_1..x_n, each length p
  std::vector<double> xty;                // X'Y
  double yty = 0.0;

  std::size_t n() const { return rows.size(); }
  std::size_t p() const { return rows.empty() ? xty.size() : rows.front().size(); }
  void update(const std::vector<double>& x, double y);
};

struct IntervalResult {
  Interval interval{};
  double center = 0;
  double half_width = 0;
  double s = 0;         // residual scale of the fit on the old examples
  double leverage = 0;  // x_new' (X'X)^-1 x_new
  std::vector<std::string> warnings;
};

// prediction interval for the label at x_new given old (x, y) pairs:
// center = x_new' beta_hat, half width = t-quantile * s * sqrt(1 + leverage);
// requires more old examples than coefficients and a full-rank design
IntervalResult gaussian_linear_interval(const std::vector<std::vector<double>>& xs_old,
                                        const std::vector<double>& ys_old,
                                        const std::vector<double>& x_new, double epsilon);

// t-statistic (y_new - yhat) / (s * sqrt(1 + leverage)) under the same fit
double gaussian_t_stat(const std::vector<std::vector<double>>& xs_old,
                       const std::vector<double>& ys_old,
                       const std::vector<double>& x_new, double y_new);

// interval for the next value of a plain real sequence; the all-ones p = 1
// special case of the model above, delegated so the two agree bit for bit
IntervalResult fisher_interval(const std::vector<double>& values, double epsilon);

// uniform sample from {Y : X'Y = xty, Y'Y = yty}: minimum-norm particular
// solution plus a normal direction projected onto the orthogonal complement
// of the column space, rescaled to the leftover radius
std::vector<double> sphere_conditional_sample(const GaussianSummary& summary, Rng& rng);

}  // namespace confpred
