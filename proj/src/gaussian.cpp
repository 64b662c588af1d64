#include "confpred/gaussian.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "confpred/errors.hpp"
#include "confpred/tdist.hpp"

namespace confpred {

namespace {

struct Fit {
  Eigen::VectorXd beta;
  double s = 0;       // sqrt(RSS / (n - p))
  std::size_t df = 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  Eigen::MatrixXd R;  // p x p upper factor
};

Fit fit_old(const std::vector<std::vector<double>>& xs_old, const std::vector<double>& ys_old) {
  const std::size_t m = xs_old.size();
  if (m != ys_old.size()) throw ModelError("gaussian: xs/ys length mismatch");
  if (m == 0) throw ModelError("gaussian: no old examples");
  const std::size_t p = xs_old.front().size();
  for (const auto& x : xs_old)
    if (x.size() != p) throw ModelError("gaussian: feature arity mismatch");
  if (p == 0) throw ModelError("gaussian: empty design row");
  if (m <= p) throw ModelError("gaussian: need more old examples than coefficients");

  Eigen::MatrixXd X(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < p; ++j)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = xs_old[i][j];
    y(static_cast<Eigen::Index>(i)) = ys_old[i];
  }

  Fit f{Eigen::VectorXd(), 0.0, m - p, Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(X),
        Eigen::MatrixXd()};
  if (f.qr.rank() < static_cast<Eigen::Index>(p))
    throw ModelError("gaussian: rank-deficient design");
  Eigen::VectorXd diag = f.qr.matrixR().diagonal().cwiseAbs();
  if (diag.minCoeff() <= 0 || diag.maxCoeff() / diag.minCoeff() > 1e12)
    throw ModelError("gaussian: design condition number above 1e12");

  f.beta = f.qr.solve(y);
  double rss = (y - X * f.beta).squaredNorm();
  f.s = std::sqrt(std::max(0.0, rss) / static_cast<double>(f.df));
  f.R = f.qr.matrixR()
            .topLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))
            .triangularView<Eigen::Upper>();
  return f;
}

double leverage_at(const Fit& f, const std::vector<double>& x_new) {
  Eigen::VectorXd xn(static_cast<Eigen::Index>(x_new.size()));
  for (std::size_t j = 0; j < x_new.size(); ++j) xn(static_cast<Eigen::Index>(j)) = x_new[j];
  Eigen::VectorXd px = f.qr.colsPermutation().inverse() * xn;
  Eigen::VectorXd w = f.R.transpose().triangularView<Eigen::Lower>().solve(px);
  return w.squaredNorm();
}

}  // namespace

void GaussianSummary::update(const std::vector<double>& x, double y) {
  if (xty.empty()) xty.assign(x.size(), 0.0);
  if (x.size() != xty.size()) throw ModelError("GaussianSummary: feature arity mismatch");
  rows.push_back(x);
  for (std::size_t j = 0; j < x.size(); ++j) xty[j] += x[j] * y;
  yty += y * y;
}

IntervalResult gaussian_linear_interval(const std::vector<std::vector<double>>& xs_old,
                                        const std::vector<double>& ys_old,
                                        const std::vector<double>& x_new, double epsilon) {
  Fit f = fit_old(xs_old, ys_old);
  if (x_new.size() != xs_old.front().size())
    throw ModelError("gaussian: new object arity mismatch");

  IntervalResult out;
  Eigen::VectorXd xn(static_cast<Eigen::Index>(x_new.size()));
  for (std::size_t j = 0; j < x_new.size(); ++j) xn(static_cast<Eigen::Index>(j)) = x_new[j];
  out.center = xn.dot(f.beta);
  out.leverage = leverage_at(f, x_new);
  out.s = f.s;
  double tq = t_quantile(static_cast<double>(f.df), epsilon / 2.0);
  out.half_width = tq * f.s * std::sqrt(1.0 + out.leverage);
  out.interval = {out.center - out.half_width, out.center + out.half_width};
  if (f.s == 0.0)
    out.warnings.push_back("zero residual variance: degenerate point interval");
  return out;
}

double gaussian_t_stat(const std::vector<std::vector<double>>& xs_old,
                       const std::vector<double>& ys_old,
                       const std::vector<double>& x_new, double y_new) {
  Fit f = fit_old(xs_old, ys_old);
  Eigen::VectorXd xn(static_cast<Eigen::Index>(x_new.size()));
  for (std::size_t j = 0; j < x_new.size(); ++j) xn(static_cast<Eigen::Index>(j)) = x_new[j];
  double pred = xn.dot(f.beta);
  double h = leverage_at(f, x_new);
  return (y_new - pred) / (f.s * std::sqrt(1.0 + h));
}

IntervalResult fisher_interval(const std::vector<double>& values, double epsilon) {
  if (values.size() < 3) throw ModelError("fisher_interval: need at least 3 observed values");
  std::vector<std::vector<double>> ones(values.size(), std::vector<double>{1.0});
  return gaussian_linear_interval(ones, values, {1.0}, epsilon);
}

std::vector<double> sphere_conditional_sample(const GaussianSummary& summary, Rng& rng) {
  const std::size_t n = summary.n();
  const std::size_t p = summary.p();
  if (n == 0) throw ModelError("sphere sample: empty summary");

  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd Q;  // thin orthonormal basis of the column space
  if (p > 0) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < p; ++j)
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = summary.rows[i][j];
    Eigen::VectorXd c(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) c(static_cast<Eigen::Index>(j)) = summary.xty[j];
    // minimum-norm solution of X'Y = c lies in the column space: Y0 = X (X'X)^-1 c
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < static_cast<Eigen::Index>(p))
      throw ModelError("sphere sample: rank-deficient design");
    Eigen::MatrixXd R = qr.matrixR()
                            .topLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))
                            .triangularView<Eigen::Upper>();
    Eigen::VectorXd pc = qr.colsPermutation().inverse() * c;
    Eigen::VectorXd w = R.transpose().triangularView<Eigen::Lower>().solve(pc);
    Eigen::VectorXd v = R.triangularView<Eigen::Upper>().solve(w);
    y0 = X * (qr.colsPermutation() * v);

    Eigen::HouseholderQR<Eigen::MatrixXd> hqr(X);
    Q = hqr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                       static_cast<Eigen::Index>(p));
  }

  double rho2 = summary.yty - y0.squaredNorm();
  if (rho2 < -1e-9 * std::max(1.0, summary.yty))
    throw ModelError("sphere sample: empty constraint set (radius too small)");
  rho2 = std::max(0.0, rho2);

  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = rng.normal();
  if (p > 0) v -= Q * (Q.transpose() * v);
  double norm = v.norm();
  Eigen::VectorXd y = y0;
  if (rho2 > 0.0) {
    if (norm == 0.0) throw ModelError("sphere sample: degenerate direction draw");
    y += std::sqrt(rho2) / norm * v;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace confpred
