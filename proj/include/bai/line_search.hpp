#pragma once
/*
 * 1-D scalar searches shared by the solvers.
 *
 * brent_min is a safeguarded golden-section minimizer with parabolic
 * interpolation steps (Brent). It only needs unimodality on [lo, hi] and
 * tolerates -inf/+inf evaluations away from the minimum: non-finite probes
 * simply lose comparisons, which shrinks the bracket away from them.
 */
#include <cmath>
#include <limits>
#include <utility>

namespace bai {

struct line_min {
  double x = 0;
  double fx = std::numeric_limits<double>::infinity();
};

namespace detail {
inline constexpr double golden_ratio = 0.6180339887498949;  // (sqrt(5)-1)/2
}

template <class F>
line_min golden_min(F&& f, double lo, double hi, double xtol, int max_iter = 300) {
  double a = lo, b = hi;
  double c = b - detail::golden_ratio * (b - a);
  double d = a + detail::golden_ratio * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    if (fc <= fd) {  // ties keep the left bracket
      b = d;
      d = c;
      fd = fc;
      c = b - detail::golden_ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + detail::golden_ratio * (b - a);
      fd = f(d);
    }
  }
  double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

template <class F>
line_min brent_min(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  const double cgold = 1.0 - detail::golden_ratio;
  double a = lo, b = hi;
  double x = a + cgold * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0, e = 0;
  for (int it = 0; it < max_iter; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = xtol * 0.5 + 1e-18 * std::fabs(x);
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    bool parabolic = false;
    if (std::fabs(e) > tol1 && std::isfinite(fx) && std::isfinite(fw) && std::isfinite(fv)) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etemp = e;
      e = d;
      if (!(std::fabs(p) >= std::fabs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x))) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (xm >= x) ? tol1 : -tol1;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x >= xm) ? a - x : b - x;
      d = cgold * e;
    }
    const double u = (std::fabs(d) >= tol1) ? x + d : x + (d >= 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; w = x; x = u;
      fv = fw; fw = fx; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; w = u; fv = fw; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx};
}

template <class F>
line_min brent_max(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  auto r = brent_min([&](double t) { return -f(t); }, lo, hi, xtol, max_iter);
  return {r.x, -r.fx};
}

// Root of a monotone (or at least single-sign-change) function on [lo, hi].
// Requires f(lo) and f(hi) to straddle zero; returns the midpoint of the final
// bracket.
template <class F>
double bisect_zero(F&& f, double lo, double hi, double flo, double fhi, double xtol,
                   int max_iter = 200) {
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  double a = lo, b = hi;
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm < 0) == (flo < 0)) {
      a = m;
      flo = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace bai
