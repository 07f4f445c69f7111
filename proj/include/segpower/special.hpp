#pragma once

// Distribution kernels used to map unit-cube points to sufficient statistics
// and to evaluate Welch critical values at real-valued degrees of freedom.
//
// All functions are pure and reentrant. Probabilities must lie strictly inside
// (0, 1) and degrees of freedom must be positive; anything else raises
// segpower::DomainError. Probabilities below 1e-300 are saturated to 1e-300
// in the chi-square and t kernels (the returned quantile is then the
// 1e-300 quantile), which keeps clamped Sobol' coordinates finite.

namespace segpower::special {

// Standard normal quantile (Wichura's AS241, about 1e-16 relative accuracy).
double inv_norm(double p);

// Quantile of the chi-square distribution with real df > 0.
double inv_chisq(double p, double df);

// Quantile of Student's t distribution with real df > 0.
double t_quantile(double p, double df);

// Forward CDFs. The *_upper variants return 1 - CDF without cancellation.
double norm_cdf(double x);
double chisq_cdf(double x, double df);
double chisq_cdf_upper(double x, double df);
double t_cdf(double t, double df);

// Regularized incomplete gamma P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

}  // namespace segpower::special
