#include "bai/klinf.hpp"

#include <Eigen/Core>
#include <cmath>

#include "bai/line_search.hpp"

namespace bai {

namespace {

constexpr double kFloor = 1e-300;  // objective floor: log of it stands in for -inf

struct dual_workspace {
  const moment_class* mc;
  double x, bound;
  double l1_cap, l2_cap;
  Eigen::ArrayXd a;  // atoms - x
  Eigen::ArrayXd b;  // B - f(|atoms|)
  Eigen::ArrayXd w;

  dual_workspace(const discrete_dist& eta, double x_, const moment_class& mc_)
      : mc(&mc_), x(x_), bound(mc_.bound()) {
    const auto n = static_cast<Eigen::Index>(eta.size());
    a.resize(n);
    b.resize(n);
    w.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double y = eta.atoms()[static_cast<std::size_t>(i)];
      a[i] = y - x_;
      b[i] = bound - mc_.f(y);
      w[i] = eta.weights()[static_cast<std::size_t>(i)];
    }
    l1_cap = 1.0 / (mc_.feasible_hi() - x_);
    l2_cap = 1.0 / (bound - mc_.f(x_));
  }

  double objective(double l1, double l2) const {
    return ((1.0 - l1 * a - l2 * b).max(kFloor).log() * w).sum();
  }

  // Feasible l1 interval for fixed l2 (R2 cross-section); empty -> nullopt.
  std::optional<std::pair<double, double>> l1_interval(double l2) const {
    if (l2 <= 0.0) return std::make_pair(0.0, 0.0);
    if (mc->kind() == f_kind::power && mc->p() == 2.0) {
      // h_min(l1, l2) = 1 + x l1 - B l2 - l1^2/(4 l2); roots 2 l2 (x +- sqrt(D))
      const double disc = x * x - bound + 1.0 / l2;
      if (disc < 0) return std::nullopt;
      const double sq = std::sqrt(disc);
      const double lo = std::max(0.0, 2.0 * l2 * (x - sq));
      const double hi = std::min(l1_cap, 2.0 * l2 * (x + sq));
      if (hi < lo) return std::nullopt;
      return std::make_pair(lo, hi);
    }
    auto hmin = [&](double l1) { return mc->dual_constraint_min(x, {l1, l2}).h; };
    double base = 0.0;
    if (hmin(0.0) < 0.0) {
      auto peak = brent_max(hmin, 0.0, l1_cap, 1e-13 * std::max(1.0, l1_cap));
      if (peak.fx < 0.0) return std::nullopt;
      base = peak.x;
    }
    const double lo =
        (hmin(0.0) >= 0.0)
            ? 0.0
            : bisect_zero(hmin, 0.0, base, hmin(0.0), hmin(base), 1e-14 * std::max(1.0, l1_cap));
    double hi = l1_cap;
    const double h_hi = hmin(l1_cap);
    if (h_hi < 0.0)
      hi = bisect_zero(hmin, base, l1_cap, hmin(base), h_hi, 1e-14 * std::max(1.0, l1_cap));
    if (hi < lo) return std::nullopt;
    return std::make_pair(lo, hi);
  }
};

struct inner_max {
  double value = -std::numeric_limits<double>::infinity();
  double l1 = 0;
};

inner_max maximize_l1(const dual_workspace& ws, double l2) {
  const auto iv = ws.l1_interval(l2);
  inner_max best;
  if (!iv) return best;
  const auto [lo, hi] = *iv;
  auto g = [&](double l1) { return ws.objective(l1, l2); };
  best.value = g(lo);
  best.l1 = lo;
  if (hi > lo) {
    const double fhi = g(hi);
    if (fhi > best.value) {
      best.value = fhi;
      best.l1 = hi;
    }
    auto r = brent_max(g, lo, hi, std::max(1e-13, 3e-6 * (hi - lo)));
    if (r.fx > best.value) {
      best.value = r.fx;
      best.l1 = r.x;
    }
  }
  return best;
}

}  // namespace

klinf_result klinf_upper(const discrete_dist& eta, double x, const moment_class& mc, double tol) {
  if (eta.empty()) fail(errc::domain_error, "klinf on empty distribution");
  if (!mc.feasible_target(x)) fail(errc::infeasible_target, "f(|x|) >= B");
  if (x < eta.mean() - tol) fail(errc::bad_side, "upper-side solve with x < m(eta)");

  klinf_result res;
  res.side = klinf_side::upper;
  const double margin = membership_margin(eta, mc);
  if (x <= eta.mean() && margin >= 0) return res;  // eta itself is feasible: value 0 at (0,0)

  dual_workspace ws(eta, x, mc);

  // Feasible l2 domain is an interval containing 0 (R2 is convex).
  double l2_hi = ws.l2_cap;
  if (!ws.l1_interval(l2_hi)) {
    double lo = 0.0, hi = l2_hi;
    for (int i = 0; i < 100 && (hi - lo) > 1e-14 * ws.l2_cap; ++i) {
      const double mid = 0.5 * (lo + hi);
      (ws.l1_interval(mid) ? lo : hi) = mid;
    }
    l2_hi = lo;
  }

  auto outer = [&](double l2) { return maximize_l1(ws, l2).value; };
  inner_max best = maximize_l1(ws, l2_hi);
  double best_l2 = l2_hi;
  if (best.value < 0.0) {  // (0,0) is always feasible with value 0
    best = {0.0, 0.0};
    best_l2 = 0.0;
  }
  if (l2_hi > 0) {
    auto r = brent_max(outer, 0.0, l2_hi, std::max(1e-13, 3e-6 * l2_hi));
    if (r.fx > best.value) {
      best_l2 = r.x;
      best = maximize_l1(ws, best_l2);
    }
  }

  res.value = std::max(0.0, best.value);
  if (res.value > 0.0) res.dual = {best.l1, best_l2};
  return res;
}

klinf_result klinf(const discrete_dist& eta, double x, const moment_class& mc, double tol) {
  if (x >= eta.mean()) return klinf_upper(eta, x, mc, tol);
  klinf_result r = klinf_upper(eta.reflected(), -x, mc, tol);
  r.side = klinf_side::lower;
  return r;
}

double klinf_bounded(const discrete_dist& eta, double x, double hi, double tol) {
  if (eta.max_atom() > hi) fail(errc::bad_support, "atom above the stated support bound");
  if (!(x < hi)) fail(errc::domain_error, "klinf_bounded needs x < hi");
  const auto n = static_cast<Eigen::Index>(eta.size());
  Eigen::ArrayXd a(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a[i] = eta.atoms()[static_cast<std::size_t>(i)] - x;
    w[i] = eta.weights()[static_cast<std::size_t>(i)];
  }
  auto g = [&](double l) { return ((1.0 - l * a).max(kFloor).log() * w).sum(); };
  const double cap = 1.0 / (hi - x);
  auto r = brent_max(g, 0.0, cap, std::max(tol * cap, 1e-14 * cap));
  double best = std::max(r.fx, std::max(g(0.0), g(cap)));
  return std::max(0.0, best);
}

primal_reconstruction primal_reconstruct(const discrete_dist& eta, double x,
                                         const moment_class& mc, const dual_pair& dual) {
  primal_reconstruction out;
  std::vector<double> atoms = eta.atoms();
  std::vector<double> weights(eta.size());
  double s = 0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const double h =
        1.0 - (atoms[i] - x) * dual.l1 - (mc.bound() - mc.f(atoms[i])) * dual.l2;
    if (!(h > 1e-12))
      fail(errc::not_converged, "dual is infeasible at an atom of eta");
    weights[i] = eta.weights()[i] / h;
    s += weights[i];
  }
  if (s > 1.0 + 1e-6) fail(errc::not_converged, "reconstructed mass exceeds 1");
  if (s < 1.0 - 1e-8) {
    const auto cm = mc.dual_constraint_min(x, dual);
    atoms.push_back(cm.y);
    weights.push_back(1.0 - s);
    out.extra_atom = std::make_pair(cm.y, 1.0 - s);
  }
  out.kappa = discrete_dist::from_points(std::move(atoms), std::move(weights));
  out.mean_residual = out.kappa.mean() - x;
  out.moment_residual = out.kappa.moment_f(mc) - mc.bound();
  return out;
}

klinf_cache klinf_cache::build(const discrete_dist& eta, const moment_class& mc, double x_lo,
                               double x_hi, std::size_t n_grid, double tol) {
  if (n_grid < 2) fail(errc::domain_error, "cache needs n_grid >= 2");
  if (!(x_lo < x_hi)) fail(errc::domain_error, "cache needs x_lo < x_hi");
  if (!mc.feasible_target(x_lo) || !mc.feasible_target(x_hi))
    fail(errc::domain_error, "cache range leaves the feasible mean interval");
  klinf_cache c;
  c.x_lo_ = x_lo;
  c.x_hi_ = x_hi;
  c.dx_ = (x_hi - x_lo) / static_cast<double>(n_grid - 1);
  c.vals_.resize(n_grid);
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double x = (i + 1 == n_grid) ? x_hi : x_lo + c.dx_ * static_cast<double>(i);
    c.vals_[i] = klinf(eta, x, mc, tol).value;
  }
  return c;
}

double klinf_cache::eval(double x, bool& out_of_range) const {
  out_of_range = false;
  if (x <= x_lo_) {
    out_of_range = x < x_lo_;
    return vals_.front();
  }
  if (x >= x_hi_) {
    out_of_range = x > x_hi_;
    return vals_.back();
  }
  const double t = (x - x_lo_) / dx_;
  auto i = static_cast<std::size_t>(t);
  if (i + 1 >= vals_.size()) i = vals_.size() - 2;
  const double frac = t - static_cast<double>(i);
  return vals_[i] * (1.0 - frac) + vals_[i + 1] * frac;
}

}  // namespace bai
