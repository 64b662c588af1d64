#pragma once

namespace confpred {

// regularized incomplete beta function I_x(a, b)
double incomplete_beta(double a, double b, double x);

// Student-t CDF, df >= 1
double t_cdf(double df, double t);

// Student-t density, used for Newton polishing of the quantile
double t_pdf(double df, double t);

// upper-tail quantile: value q with P(T > q) = upper_tail_prob
double t_quantile(double df, double upper_tail_prob);

}  // namespace confpred
