#pragma once

namespace wireoff::stats {

double normal_cdf(double x);

/// Standard normal quantile (Wichura's AS241, relative accuracy ~1e-16).
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Two-sided p-value for a t statistic.
double student_t_two_sided_p(double t, double df);

}  // namespace wireoff::stats
