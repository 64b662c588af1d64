#include "confpred/affine.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "confpred/bag.hpp"
#include "confpred/errors.hpp"
#include "confpred/measures.hpp"

namespace confpred {

double AffineScoreForm::eval(std::size_t i, double y) const {
  return std::fabs(c[i] * y + d[i]);
}

void AffineScoreForm::push(double ci, double di) {
  if (ci < 0) {
    ci = -ci;
    di = -di;
  }
  c.push_back(ci);
  d.push_back(di);
}

AffineScoreForm least_squares_affine(const std::vector<std::vector<double>>& xs,
                                     const std::vector<double>& old_labels) {
  const std::size_t n = xs.size();
  if (n < 3) throw MeasureError("least squares requires at least 3 examples");
  if (old_labels.size() + 1 != n)
    throw MeasureError("least_squares_affine: need exactly one unknown label");
  const std::size_t arity = xs.front().size();
  for (const auto& x : xs)
    if (x.size() != arity) throw MeasureError("feature arity mismatch");
  const std::size_t p = arity + 1;
  if (n <= p) throw MeasureError("least squares requires more examples than coefficients");

  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (std::size_t j = 0; j < arity; ++j)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = xs[i][j];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < static_cast<Eigen::Index>(p))
    throw MeasureError("degenerate design: rank-deficient least squares");
  Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
  if (diag.minCoeff() <= 0 || diag.maxCoeff() / diag.minCoeff() > 1e12)
    throw MeasureError("degenerate design: condition number above 1e12");

  // residual r(y) = (I - H)(Y0 + y e_n): slope column is (I - H) e_n,
  // offset is (I - H) Y0 with the unknown slot zeroed
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i + 1 < n; ++i) y0(static_cast<Eigen::Index>(i)) = old_labels[i];
  Eigen::VectorXd en = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  en(static_cast<Eigen::Index>(n - 1)) = 1.0;

  Eigen::VectorXd off = y0 - X * qr.solve(y0);
  Eigen::VectorXd slope = en - X * qr.solve(en);

  AffineScoreForm out;
  for (std::size_t i = 0; i < n; ++i)
    out.push(slope(static_cast<Eigen::Index>(i)), off(static_cast<Eigen::Index>(i)));
  return out;
}

AffineScoreForm nn_regression_family(const std::vector<Example>& old_examples,
                                     const std::vector<double>& x_new) {
  if (old_examples.empty()) throw MeasureError("nn_regression_family: no old examples");
  const std::size_t m = old_examples.size();
  AffineScoreForm out;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Example> rest;
    rest.reserve(m - 1);
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) rest.push_back(old_examples[j]);
    out.push(0.0, nn_regression_residual(Bag(std::move(rest)), old_examples[i]));
  }
  out.push(1.0, -point_predict_nn(Bag(old_examples), x_new));
  return out;
}

AffineScoreForm old_examples_family(const std::vector<double>& values) {
  const std::size_t m = values.size();
  if (m < 1) throw MeasureError("old_examples_family: no values");
  double S = 0;
  for (double v : values) S += v;
  const double scale = static_cast<double>(m + 1);
  AffineScoreForm out;
  for (double v : values) out.push(1.0 / scale, (S - scale * v) / scale);
  out.push(static_cast<double>(m) / scale, -S / scale);
  return out;
}

}  // namespace confpred
