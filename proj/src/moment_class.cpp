#include "bai/moment_class.hpp"

#include "bai/line_search.hpp"

namespace bai {

moment_class::moment_class(f_kind kind, double p, double bound) : kind_(kind), p_(p), bound_(bound) {
  if (!(bound > 0)) fail(errc::domain_error, "moment class bound B must be positive");
  if (kind == f_kind::power && !(p > 1)) fail(errc::domain_error, "power family needs p > 1");
  f_inv_b_ = f_inv(bound);
}

double moment_class::f(double y) const {
  y = std::fabs(y);
  switch (kind_) {
    case f_kind::power:
      return std::pow(y, p_);
    case f_kind::xlogx:
      return y <= 1.0 ? 0.0 : y * std::log(y);
  }
  return 0.0;
}

double moment_class::f_inv(double v) const {
  if (v < 0) fail(errc::domain_error, "f_inv argument must be nonnegative");
  switch (kind_) {
    case f_kind::power:
      return std::pow(v, 1.0 / p_);
    case f_kind::xlogx: {
      if (v == 0) return 1.0;  // right endpoint of the flat segment
      // solve y log y = v on [1, inf) by Newton with a bisection safeguard
      double y = std::max(1.5, v / std::max(std::log(v), 1.0));
      for (int i = 0; i < 100; ++i) {
        const double g = y * std::log(y) - v;
        const double dg = std::log(y) + 1.0;
        const double step = g / dg;
        y -= step;
        if (y < 1.0) y = 1.0 + 1e-16;
        if (std::fabs(step) < 1e-15 * y) break;
      }
      return y;
    }
  }
  return 0.0;
}

constraint_min moment_class::dual_constraint_min(double x, const dual_pair& d) const {
  const double l1 = d.l1, l2 = d.l2;
  if (l2 < 0 || l1 < 0) fail(errc::domain_error, "dual components must be nonnegative");
  if (l2 == 0.0) {
    if (l1 == 0.0) return {0.0, 1.0};
    return {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  }
  auto h = [&](double y) { return 1.0 - (y - x) * l1 - (bound_ - f(y)) * l2; };
  if (l1 == 0.0) return {0.0, h(0.0)};  // f is minimal at 0 (flat tie -> smallest |y|)
  // l1 > 0 pushes the minimizer to y >= 0 where l2 f'(y) = l1.
  double y0;
  switch (kind_) {
    case f_kind::power:
      y0 = std::pow(l1 / (p_ * l2), 1.0 / (p_ - 1.0));
      break;
    case f_kind::xlogx: {
      // f'(y) = log y + 1 on [1, inf); slope of the linear part is -l1 < 0 on
      // [0, 1] where f = 0, so the minimizer is max(1, exp(l1/l2 - 1)).
      y0 = std::max(1.0, std::exp(l1 / l2 - 1.0));
      break;
    }
  }
  return {y0, h(y0)};
}

constraint_min moment_class::dual_constraint_min_bracketed(double x, const dual_pair& d) const {
  const double l1 = d.l1, l2 = d.l2;
  if (l2 < 0 || l1 < 0) fail(errc::domain_error, "dual components must be nonnegative");
  if (l2 == 0.0) {
    if (l1 == 0.0) return {0.0, 1.0};
    return {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  }
  auto h = [&](double y) { return 1.0 - (y - x) * l1 - (bound_ - f(y)) * l2; };
  if (l1 == 0.0) return {0.0, h(0.0)};
  // h is convex with h(y) -> +inf as y -> +inf (f superlinear) and decreasing
  // on y < 0; bracket [0, hi] by doubling until the right edge turns upward.
  double hi = 1.0;
  while (h(hi * 2) < h(hi) && hi < 1e150) hi *= 2;
  hi *= 2;
  auto r = brent_min(h, 0.0, hi, 1e-12 * std::max(1.0, hi), 300);
  return {r.x, r.fx};
}

}  // namespace bai
