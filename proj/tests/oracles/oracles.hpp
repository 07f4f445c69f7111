#pragma once

// Reference implementations used only by the tests. They favour simple,
// slow, long-double algorithms that share no code with the library kernels.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

using real = long double;

inline constexpr real kPi = 3.141592653589793238462643383279502884L;

// erf by its all-positive series, erfc by a continued fraction in the tail.
inline real erfc_cf(real x) {
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
  real f = x;
  const real tiny = 1e-300L;
  real c = x, d = 0.0L;
  for (int k = 1; k < 5000; ++k) {
    const real a = k / 2.0L;
    d = x + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const real delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-19L) break;
  }
  return std::exp(-x * x) / std::sqrt(kPi) / f;
}

inline real erf_series(real x) {
  real term = x;
  real sum = x;
  for (int n = 1; n < 10000; ++n) {
    term *= 2.0L * x * x / (2.0L * n + 1.0L);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return 2.0L / std::sqrt(kPi) * std::exp(-x * x) * sum;
}

// Standard normal CDF with good relative accuracy in both tails.
inline real norm_cdf(real z) {
  const real x = std::fabs(z) / std::sqrt(2.0L);
  real upper;  // P(Z > |z|)
  if (x < 2.5L) {
    upper = 0.5L * (1.0L - erf_series(x));
  } else {
    upper = 0.5L * erfc_cf(x);
  }
  return z < 0 ? upper : 1.0L - upper;
}

// Regularized lower incomplete gamma P(a, x): series below a + 1, Legendre
// continued fraction (evaluated by backward recursion) above.
inline real gamma_p(real a, real x) {
  if (x <= 0) return 0.0L;
  const real log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0L) {
    real term = 1.0L / a, sum = term;
    for (int n = 1; n < 100000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (term < sum * 1e-21L) break;
    }
    return std::exp(log_prefix) * sum;
  }
  // Q(a,x) = e^{-x} x^a / Gamma(a) * 1/(x+1-a- 1(1-a)/(x+3-a- 2(2-a)/(x+5-a- ...)))
  const int depth = 2000;
  real tail = 0.0L;
  for (int k = depth; k >= 1; --k) tail = k * (k - a) / (x + 2.0L * k + 1.0L - a - tail);
  const real q = std::exp(log_prefix) / (x + 1.0L - a - tail);
  return 1.0L - q;
}

inline real gamma_q(real a, real x) {
  if (x < a + 1.0L) return 1.0L - gamma_p(a, x);
  const real log_prefix = a * std::log(x) - x - std::lgamma(a);
  const int depth = 2000;
  real tail = 0.0L;
  for (int k = depth; k >= 1; --k) tail = k * (k - a) / (x + 2.0L * k + 1.0L - a - tail);
  return std::exp(log_prefix) / (x + 1.0L - a - tail);
}

inline real log_beta(real a, real b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Regularized incomplete beta from the hypergeometric series
// I_x(a,b) = x^a (1-x)^b / (a B(a,b)) * 2F1(a+b, 1; a+1; x), with the
// reflection I_x(a,b) = 1 - I_{1-x}(b,a) where the series would converge slowly.
inline real beta_inc(real a, real b, real x) {
  if (x <= 0) return 0.0L;
  if (x >= 1) return 1.0L;
  auto series = [](real a_, real b_, real x_) {
    real term = 1.0L, sum = 1.0L;
    for (int n = 0; n < 2000000; ++n) {
      term *= x_ * (a_ + b_ + n) / (a_ + 1.0L + n);
      sum += term;
      if (term < sum * 1e-21L) break;
    }
    return std::exp(a_ * std::log(x_) + b_ * std::log1p(-x_) - log_beta(a_, b_)) / a_ * sum;
  };
  if (x <= (a + 1.0L) / (a + b + 2.0L)) return series(a, b, x);
  return 1.0L - series(b, a, 1.0L - x);
}

// P(T <= t) for Student's t with real df.
// Near t = 0, df / (df + t^2) rounds to 1, so there the central mass
// P(|T| < |t|) = I_{t^2/(df+t^2)}(1/2, df/2) is used there instead.
inline real t_cdf(real t, real df) {
  if (t * t < 1e-4L * df) {
    const real central = 0.5L * beta_inc(0.5L, df / 2.0L, t * t / (df + t * t));
    return t < 0 ? 0.5L - central : 0.5L + central;
  }
  const real x = df / (df + t * t);
  const real tail = 0.5L * beta_inc(df / 2.0L, 0.5L, x);  // P(T > |t|)
  return t < 0 ? tail : 1.0L - tail;
}

inline real chisq_cdf(real x, real df) { return gamma_p(df / 2.0L, x / 2.0L); }

// Bisection for an increasing CDF on [lo, hi] until the bracket is tiny.
inline real invert(const std::function<real(real)>& cdf, real p, real lo, real hi) {
  while (cdf(lo) > p) lo = lo < 0 ? lo * 2 : lo / 2 - 1;
  while (cdf(hi) < p) hi = hi > 0 ? hi * 2 : hi / 2 + 1;
  for (int i = 0; i < 400; ++i) {
    const real mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16L * std::fabs(mid)) break;
  }
  return 0.5L * (lo + hi);
}

inline real inv_norm(real p) {
  return invert([](real z) { return norm_cdf(z); }, p, -10.0L, 10.0L);
}

inline real inv_chisq(real p, real df) {
  return invert([df](real x) { return chisq_cdf(x, df); }, p, 0.0L, df + 10.0L);
}

inline real t_quantile(real p, real df) {
  return invert([df](real t) { return t_cdf(t, df); }, p, -10.0L, 10.0L);
}

// Welch degrees of freedom, written out from the textbook ratio.
inline real welch_df(real v1, real v2, real n1, real n2) {
  const real num = (v1 / n1 + v2 / n2) * (v1 / n1 + v2 / n2);
  const real den = (v1 / n1) * (v1 / n1) / (n1 - 1) + (v2 / n2) * (v2 / n2) / (n2 - 1);
  return num / den;
}

// Dense-grid root oracle: first sign change of f from > 0 to <= 0 on a
// uniform grid, returned as the grid point where f is first <= 0.
inline double first_nonpositive(const std::function<double(double)>& f, double lo, double hi,
                                double step) {
  const auto count = static_cast<long>((hi - lo) / step);
  for (long i = 0; i <= count; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    if (f(x) <= 0.0) return x;
  }
  return std::numeric_limits<double>::infinity();
}

// Counts sign changes of f over the grid.
inline int sign_changes(const std::function<double(double)>& f, double lo, double hi, double step) {
  const auto count = static_cast<long>((hi - lo) / step);
  int changes = 0;
  bool prev = f(lo) <= 0.0;
  for (long i = 1; i <= count; ++i) {
    const bool now = f(lo + static_cast<double>(i) * step) <= 0.0;
    if (now != prev) ++changes;
    prev = now;
  }
  return changes;
}

}  // namespace oracle
