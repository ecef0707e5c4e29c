#include "bai/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bai/line_search.hpp"

namespace bai {

namespace {

constexpr double kGapTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct arm_eval {
  const discrete_dist* d = nullptr;
  const moment_class* mc = nullptr;
  const klinf_cache* cache = nullptr;
  double tol = 1e-9;

  double operator()(double x) const {
    if (cache) return cache->eval(x);
    return klinf(*d, x, *mc, tol).value;
  }
};

// Clamp a target into the open feasible mean interval.
double clamp_target(const moment_class& mc, double x) {
  const double hi = mc.feasible_hi() * (1.0 - 1e-12) - 1e-15;
  return std::min(hi, std::max(-hi, x));
}

inner_min_result inner_min_ev(const arm_eval& e1, const arm_eval& ej, double m1, double mj,
                              double y, const moment_class& mc, double tol) {
  if (m1 - mj <= kGapTol) return {0.5 * (m1 + mj), 0.0};
  const double lo = clamp_target(mc, mj);
  const double hi = clamp_target(mc, m1);
  auto g = [&](double x) { return e1(x) + y * ej(x); };
  auto r = brent_min(g, lo, hi, std::max(1e-14, tol * (hi - lo)));
  inner_min_result best{r.x, r.fx};
  const double glo = g(lo), ghi = g(hi);
  if (glo < best.value) best = {lo, glo};
  if (ghi < best.value) best = {hi, ghi};
  return best;
}

y_of_c_result solve_y_of_c_ev(const arm_eval& e1, const arm_eval& ej, double m1, double mj,
                              double c, const moment_class& mc, double tol_y, double tol_x,
                              bool muj_in_class, double d_j) {
  const double c_lo = e1(clamp_target(mc, m1));
  if (muj_in_class && c >= d_j * (1.0 - 1e-12))
    fail(errc::target_above_range, "c at or above the Itilde range for this competitor");

  auto itilde = [&](double y) { return inner_min_ev(e1, ej, m1, mj, y, mc, tol_x); };
  const double tol_val = tol_y * std::max({c, c_lo, 1e-300});
  if (c <= c_lo + tol_val) return {0.0, clamp_target(mc, m1)};

  double y_hi = 1.0;
  inner_min_result at_hi = itilde(y_hi);
  int doublings = 0;
  while (at_hi.value < c) {
    y_hi *= 2.0;
    at_hi = itilde(y_hi);
    if (++doublings > 200) fail(errc::target_above_range, "Itilde bracket failed to reach c");
  }
  double y_lo = 0.0;
  y_of_c_result out{y_hi, at_hi.x};
  for (int it = 0; it < 200; ++it) {
    const double y = 0.5 * (y_lo + y_hi);
    const inner_min_result r = itilde(y);
    if (std::fabs(r.value - c) <= tol_val) return {y, r.x};
    if (r.value < c) {
      y_lo = y;
    } else {
      y_hi = y;
      out = {y, r.x};
    }
    if ((y_hi - y_lo) <= 1e-15 * std::max(1.0, y_hi)) break;
  }
  return out;
}

}  // namespace

inner_min_result inner_min(const discrete_dist& mu1, const discrete_dist& muj, double y,
                           const moment_class& mc, double tol, const klinf_cache* cache1,
                           const klinf_cache* cachej) {
  arm_eval e1{&mu1, &mc, cache1, tol};
  arm_eval ej{&muj, &mc, cachej, tol};
  return inner_min_ev(e1, ej, mu1.mean(), muj.mean(), y, mc, tol);
}

y_of_c_result solve_y_of_c(const discrete_dist& mu1, const discrete_dist& muj, double c,
                           const moment_class& mc, double tol, const klinf_cache* cache1,
                           const klinf_cache* cachej) {
  arm_eval e1{&mu1, &mc, cache1, tol};
  arm_eval ej{&muj, &mc, cachej, tol};
  const bool in_class = membership_margin(muj, mc) >= 0;
  const double d_j = in_class ? e1(clamp_target(mc, muj.mean())) : kInf;
  return solve_y_of_c_ev(e1, ej, mu1.mean(), muj.mean(), c, mc, tol, tol, in_class, d_j);
}

allocation_solution solve_allocation(std::span<const discrete_dist> arms, const moment_class& mc,
                                     const allocation_options& opt) {
  const std::size_t k = arms.size();
  if (k < 2) fail(errc::domain_error, "allocation needs at least two arms");
  if (!opt.caches.empty() && opt.caches.size() != k)
    fail(errc::domain_error, "cache list must match the arm count");

  allocation_solution sol;
  sol.t_star.assign(k, 0.0);
  sol.x_cross.assign(k, std::numeric_limits<double>::quiet_NaN());
  sol.y_ratios.assign(k, 0.0);

  std::vector<double> means(k);
  for (std::size_t i = 0; i < k; ++i) means[i] = arms[i].mean();
  std::size_t best = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (means[i] > means[best]) best = i;
  double second = -kInf;
  for (std::size_t i = 0; i < k; ++i)
    if (i != best) second = std::max(second, means[i]);
  sol.best = best;
  sol.tie_flag = (means[best] - second) <= kGapTol;

  if (sol.tie_flag) {
    bool all_equal = true;
    for (std::size_t i = 0; i < k; ++i)
      all_equal = all_equal && std::fabs(means[i] - means[best]) <= kGapTol;
    if (all_equal) fail(errc::no_gap, "all arm means coincide");
    // No usable top gap: hand back a uniform allocation so tracking can proceed.
    sol.degenerate = true;
    std::fill(sol.t_star.begin(), sol.t_star.end(), 1.0 / static_cast<double>(k));
    std::fill(sol.y_ratios.begin(), sol.y_ratios.end(), 1.0);
    return sol;
  }

  std::vector<arm_eval> ev(k);
  for (std::size_t i = 0; i < k; ++i)
    ev[i] = arm_eval{&arms[i], &mc, opt.caches.empty() ? nullptr : opt.caches[i], opt.klinf_tol};

  const double m1 = means[best];
  const double c_lo = ev[best](clamp_target(mc, m1));

  std::vector<std::size_t> comp;  // competitor indices
  for (std::size_t i = 0; i < k; ++i)
    if (i != best) comp.push_back(i);

  std::vector<bool> in_class(k, false);
  std::vector<double> d_j(k, kInf);
  double d = kInf;
  for (std::size_t j : comp) {
    in_class[j] = membership_margin(arms[j], mc) >= 0;
    if (in_class[j]) {
      d_j[j] = ev[best](clamp_target(mc, means[j]));
      d = std::min(d, d_j[j]);
    }
  }

  std::vector<y_of_c_result> ys(k);
  auto eval_s = [&](double c) {
    double s = 0;
    for (std::size_t j : comp) {
      ys[j] = solve_y_of_c_ev(ev[best], ev[j], m1, means[j], c, mc, opt.tol_y, opt.tol_x,
                              in_class[j], d_j[j]);
      const double num = ev[best](ys[j].x);
      const double den = ev[j](ys[j].x);
      s += (den > 0) ? num / den : kInf;
      if (s == kInf) break;
    }
    return s;
  };

  // Bracket [lo, hi] with S(lo) < 1 <= S(hi). S is nondecreasing in c.
  double lo = c_lo, hi = -1.0;
  if (d < kInf) {
    double prev = c_lo;
    for (int kk = 1; kk <= 60; ++kk) {
      const double c = d - (d - c_lo) * std::pow(2.0, -kk);
      if (eval_s(c) >= 1.0) {
        hi = c;
        lo = prev;
        break;
      }
      prev = c;
    }
    if (hi < 0) fail(errc::not_converged, "S(c) never reached 1 below the range limit");
  } else {
    double scale = kInf;
    for (std::size_t j : comp)
      scale = std::min(scale, inner_min_ev(ev[best], ev[j], m1, means[j], 1.0, mc, opt.tol_x).value);
    double c = std::max(scale, c_lo + std::max(1e-12, 1e-9 * std::fabs(c_lo)));
    double prev = c_lo;
    bool found = false;
    for (int kk = 0; kk <= 80; ++kk) {
      if (eval_s(c) >= 1.0) {
        hi = c;
        lo = prev;
        found = true;
        break;
      }
      prev = c;
      c = 2.0 * c;
    }
    if (!found) fail(errc::not_converged, "S(c) stays below 1 (arms far outside the class)");
  }

  // Outer bisection; the returned level is the last midpoint, Theorem-2
  // residuals are asserted by the callers.
  double c_star = hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = eval_s(mid);
    c_star = mid;
    if (std::fabs(s - 1.0) <= opt.tol_s) break;
    if (s < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if ((hi - lo) <= opt.tol_c * std::max(hi, 1e-300)) {
      c_star = 0.5 * (lo + hi);
      eval_s(c_star);
      break;
    }
  }

  double ysum = 1.0;
  for (std::size_t j : comp) ysum += ys[j].y;
  const double t_best = 1.0 / ysum;
  sol.t_star[best] = t_best;
  sol.y_ratios[best] = 1.0;
  for (std::size_t j : comp) {
    sol.t_star[j] = ys[j].y * t_best;
    sol.y_ratios[j] = ys[j].y;
    sol.x_cross[j] = ys[j].x;
  }
  sol.c_star = c_star;
  sol.value = c_star * t_best;
  return sol;
}

brute_force_result brute_force_allocation(std::span<const discrete_dist> arms,
                                          const moment_class& mc, int grid_n,
                                          std::size_t cache_grid) {
  const std::size_t k = arms.size();
  if (k < 2 || k > 4 || grid_n > 200) fail(errc::too_large, "brute force guards: K <= 4, grid <= 200");
  if (grid_n < k) fail(errc::domain_error, "lattice too coarse for positive weights");

  std::vector<double> means(k);
  for (std::size_t i = 0; i < k; ++i) means[i] = arms[i].mean();
  std::size_t best = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (means[i] > means[best]) best = i;

  double lo_mean = *std::min_element(means.begin(), means.end());
  std::vector<klinf_cache> caches;
  std::vector<const klinf_cache*> cache_ptrs(k, nullptr);
  if (cache_grid >= 2 && means[best] - lo_mean > kGapTol) {
    caches.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
      caches.push_back(klinf_cache::build(arms[i], mc, clamp_target(mc, lo_mean),
                                          clamp_target(mc, means[best]), cache_grid));
    for (std::size_t i = 0; i < k; ++i) cache_ptrs[i] = &caches[i];
  }
  std::vector<arm_eval> ev(k);
  for (std::size_t i = 0; i < k; ++i) ev[i] = arm_eval{&arms[i], &mc, cache_ptrs[i], 1e-9};

  auto value_at = [&](const std::vector<int>& counts) {
    const double tb = static_cast<double>(counts[best]) / grid_n;
    double worst = kInf;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == best) continue;
      const double tj = static_cast<double>(counts[j]) / grid_n;
      const double g =
          tb * inner_min_ev(ev[best], ev[j], means[best], means[j], tj / tb, mc, 1e-7).value;
      worst = std::min(worst, g);
    }
    return worst;
  };

  brute_force_result out;
  out.value = -kInf;
  std::vector<int> counts(k, 0);
  // compositions of grid_n into k positive parts
  std::vector<int> c(k, 1);
  auto rec = [&](auto&& self, std::size_t pos, int rem) -> void {
    if (pos + 1 == k) {
      c[pos] = rem;
      const double v = value_at(c);
      if (v > out.value) {
        out.value = v;
        counts = c;
      }
      return;
    }
    for (int v = 1; v <= rem - static_cast<int>(k - pos - 1); ++v) {
      c[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  rec(rec, 0, grid_n);

  out.t.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.t[i] = static_cast<double>(counts[i]) / grid_n;
  return out;
}

double sample_lower_bound_from_value(double v_mu, double delta) {
  if (!(delta > 0 && delta < 1)) fail(errc::domain_error, "delta must lie in (0,1)");
  return std::log(1.0 / (2.4 * delta)) / v_mu;
}

double sample_lower_bound(std::span<const discrete_dist> arms, const moment_class& mc,
                          double delta, const allocation_options& opt) {
  return sample_lower_bound_from_value(solve_allocation(arms, mc, opt).value, delta);
}

}  // namespace bai
