#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace segpower {

struct RootResult {
  double x = 0.0;   // endpoint of the final bracket on the f <= 0 side
  double fx = 0.0;
  int evaluations = 0;
};

// Brent's zeroin on a bracket with f(pos) > 0 and f(nonpos) <= 0 (either
// order on the line). Stops once the bracket is no wider than tol plus a few
// ulps, and always returns a point where f <= 0, so the true root lies within
// tol of the answer on the f > 0 side.
template <typename F>
RootResult brent_root(F&& f, double pos, double f_pos, double nonpos, double f_nonpos, double tol) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  // b is the latest iterate, c keeps the opposite sign, a the previous b.
  double a = pos, fa = f_pos;
  double b = nonpos, fb = f_nonpos;
  double c = a, fc = fa;
  double d = b - a, e = d;
  int evaluations = 0;

  for (;;) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) break;

    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, qq;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        qq = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        qq = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) qq = -qq;
      p = std::fabs(p);
      if (std::isfinite(p) && std::isfinite(qq) &&
          2.0 * p < std::min(3.0 * xm * qq - std::fabs(tol1 * qq), std::fabs(e * qq))) {
        e = d;
        d = p / qq;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    ++evaluations;
  }
  if (fb <= 0.0) return {b, fb, evaluations};
  return {c, fc, evaluations};
}

}  // namespace segpower
