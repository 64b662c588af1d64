#include "confpred/tdist.hpp"

#include <cmath>
#include <stdexcept>

#include "confpred/errors.hpp"

namespace confpred {

namespace {

// continued fraction for the incomplete beta function, modified Lentz scheme
double beta_cf(double a, double b, double x) {
  const double FPMIN = 1e-300;
  const int MAXIT = 500;
  const double EPS = 1e-16;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < FPMIN) d = FPMIN;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= MAXIT; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < FPMIN) d = FPMIN;
    c = 1.0 + aa / c;
    if (std::fabs(c) < FPMIN) c = FPMIN;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < FPMIN) d = FPMIN;
    c = 1.0 + aa / c;
    if (std::fabs(c) < FPMIN) c = FPMIN;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < EPS) return h;
  }
  throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw ModelError("incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                 a * std::log(x) + b * std::log1p(-x);
  double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double t_cdf(double df, double t) {
  if (df < 1.0) throw ModelError("t_cdf: df must be >= 1");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  if (t == 0.0) return 0.5;
  double x = df / (df + t * t);
  double half_tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
  return t > 0 ? 1.0 - half_tail : half_tail;
}

double t_pdf(double df, double t) {
  double ln = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
              0.5 * std::log(df * 3.14159265358979323846) -
              0.5 * (df + 1.0) * std::log1p(t * t / df);
  return std::exp(ln);
}

double t_quantile(double df, double upper_tail_prob) {
  if (df < 1.0) throw ModelError("t_quantile: df must be >= 1");
  if (!(upper_tail_prob > 0.0 && upper_tail_prob < 1.0))
    throw ModelError("t_quantile: probability must lie strictly in (0, 1)");
  if (upper_tail_prob == 0.5) return 0.0;
  // solve for the upper tail of the smaller side, mirror at the end
  double p = upper_tail_prob < 0.5 ? upper_tail_prob : 1.0 - upper_tail_prob;
  double lo = 0.0, hi = 1.0;
  while (1.0 - t_cdf(df, hi) > p) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (1.0 - t_cdf(df, mid) > p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * (1.0 + hi)) break;
  }
  double q = 0.5 * (lo + hi);
  // Newton polish on F(q) = (1 - cdf) - p
  for (int it = 0; it < 4; ++it) {
    double f = (1.0 - t_cdf(df, q)) - p;
    double fp = -t_pdf(df, q);
    if (fp == 0.0) break;
    double step = f / fp;
    if (!std::isfinite(step)) break;
    q -= step;
  }
  return upper_tail_prob < 0.5 ? q : -q;
}

}  // namespace confpred
