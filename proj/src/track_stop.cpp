#include "bai/track_stop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bai/line_search.hpp"

namespace bai {

namespace {

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

double clamp_target(const moment_class& mc, double x) {
  const double hi = mc.feasible_hi() * (1.0 - 1e-12) - 1e-15;
  return std::min(hi, std::max(-hi, x));
}

}  // namespace

double btilde_from_moments(double abs_dev, double abs_f_dev, double mean, const moment_class& mc,
                           btilde_mode mode) {
  const double g1 = mc.feasible_hi() - mean;
  const double g2 = mc.bound() - mc.f(mean);
  if (!(g1 > 0) || !(g2 > 0)) fail(errc::domain_error, "mean outside the feasible interval");
  const double d1 = abs_dev / (2.0 * g1);
  const double d2 = abs_f_dev / (2.0 * g2);
  const double statement = d1 + d2;
  return mode == btilde_mode::statement ? statement : 2.0 * statement;
}

double btilde_for_arm(const arm_spec& arm, const moment_class& mc, btilde_mode mode) {
  return btilde_from_moments(arm.abs_dev(), arm.abs_f_dev(mc), arm.mean(), mc, mode);
}

double btilde_for_dist(const discrete_dist& d, const moment_class& mc, btilde_mode mode) {
  double afd = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    afd += d.weights()[i] * std::fabs(mc.bound() - mc.f(d.atoms()[i]));
  return btilde_from_moments(d.abs_dev(), afd, d.mean(), mc, mode);
}

double btilde_conservative_default(const moment_class& mc) {
  // E|X - m| <= 2 f^-1(B) against the centered worst case, E|B - f| <= 2B.
  const double c1_max = 2.0 * mc.feasible_hi() / mc.feasible_hi();
  const double c2_max = 2.0 * mc.bound() / mc.bound();
  return 2.0 * (c1_max + c2_max);
}

double threshold(std::int64_t n, double delta, double c_const, int alpha, std::size_t k) {
  if (n < 2) fail(errc::domain_error, "threshold needs n >= 2");
  if (!(delta > 0 && delta < 1)) fail(errc::domain_error, "delta must lie in (0,1)");
  const double log_inv_delta = std::log(1.0 / delta);
  return std::log(c_const) + alpha * std::log(static_cast<double>(n)) - std::log(delta) +
         static_cast<double>(k) * std::log(std::log(static_cast<double>(n))) +
         static_cast<double>(2 * k + 1) * std::log(log_inv_delta);
}

double threshold_constant(double delta, int alpha, std::size_t k, std::int64_t m,
                          std::span<const double> b_tilde) {
  if (b_tilde.size() != k) fail(errc::domain_error, "need one B~ constant per arm");
  if (alpha < static_cast<int>(2 * k + 2))
    fail(errc::domain_error, "alpha >= 2K+2 is required for the series to converge");
  if (m < 2) fail(errc::domain_error, "batch size must be at least 2");
  const double kd = static_cast<double>(k);
  const double log_inv_delta = std::log(1.0 / delta);
  double sum_b = 0;
  for (double b : b_tilde) sum_b += b;

  const double fixed_log = 1.0 + sum_b - kd * std::log(kd) -
                           static_cast<double>(2 * k + 1) * std::log(log_inv_delta);
  double c = 1.0;
  for (int it = 0; it < 100; ++it) {
    double s = 0;
    for (std::int64_t l = 1;; ++l) {
      const double n = static_cast<double>(l) * static_cast<double>(m);
      const double beta = threshold(l * m, delta, c, alpha, k);
      if (!(beta > 0)) fail(errc::domain_error, "nonpositive threshold inside the series");
      const double log_term = kd * std::log(4.0 * std::exp(1.0) * beta * beta) + fixed_log -
                              static_cast<double>(alpha - 2 * static_cast<int>(k)) * std::log(n);
      const double term = std::exp(log_term);
      s += term;
      if (l > 4 && term < 1e-12 * s) break;
      if (l > 50'000'000) fail(errc::diverged, "series truncation never triggered");
    }
    if (std::fabs(s - c) <= 1e-6 * c) return s * 1.01;  // 1% safety margin
    c = s;
  }
  fail(errc::diverged, "threshold-constant fixed point did not converge in 100 iterations");
}

glr_result glr_statistic(const run_state& state, const moment_class& mc, double tol) {
  const std::size_t k = state.emp.size();
  if (k < 2) fail(errc::domain_error, "need at least two arms");
  glr_result out;
  for (std::size_t a = 1; a < k; ++a)
    if (state.emp[a].mean() > state.emp[out.best].mean()) out.best = a;
  const std::size_t j = out.best;
  const double mj = state.emp[j].mean();
  const double nj = static_cast<double>(state.counts[j]);

  double z = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < k; ++b) {
    if (b == j) continue;
    const double mb = state.emp[b].mean();
    const double nb = static_cast<double>(state.counts[b]);
    const double lo = clamp_target(mc, mb), hi = clamp_target(mc, mj);
    auto g = [&](double x) {
      return nj * klinf(state.emp[j], x, mc, 1e-8).value +
             nb * klinf(state.emp[b], x, mc, 1e-8).value;
    };
    double zb;
    if (hi - lo <= 1e-14) {
      zb = g(lo);
    } else {
      const double xtol = std::max(1e-12, std::sqrt(tol) * (hi - lo));
      zb = std::min({brent_min(g, lo, hi, xtol).fx, g(lo), g(hi)});
    }
    z = std::min(z, zb);
    if (z <= 0) break;
  }
  out.z = std::max(0.0, z);
  return out;
}

std::vector<std::int64_t> plan_batch(std::span<const std::int64_t> counts,
                                     std::span<const double> t_star, std::int64_t m,
                                     std::int64_t batch_index, rng_stream& rng) {
  const std::size_t k = counts.size();
  const auto k1 = static_cast<std::int64_t>(k + 1);
  if (m < k1 * k1) fail(errc::batch_too_small, "batch size below (K+1)^2");
  if (t_star.size() != k) fail(errc::domain_error, "t* size mismatch");

  const double target = std::sqrt(static_cast<double>((batch_index + 1) * m));
  std::vector<std::int64_t> starve(k);
  std::int64_t total_starve = 0;
  for (std::size_t a = 0; a < k; ++a) {
    const double deficit = target - static_cast<double>(counts[a]);
    starve[a] = deficit > 0 ? static_cast<std::int64_t>(std::ceil(deficit)) : 0;
    total_starve += starve[a];
  }

  std::vector<std::int64_t> plan(k, 0);
  if (total_starve <= m) {
    plan = starve;
    std::int64_t rest = m - total_starve;
    // i.i.d. draws of arm indices from t*
    std::vector<double> cdf(k);
    double acc = 0;
    for (std::size_t a = 0; a < k; ++a) {
      acc += t_star[a];
      cdf[a] = acc;
    }
    for (std::int64_t i = 0; i < rest; ++i) {
      const double u = rng.next_unit() * acc;
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      plan[static_cast<std::size_t>(std::min<std::ptrdiff_t>(
          it - cdf.begin(), static_cast<std::ptrdiff_t>(k) - 1))] += 1;
    }
  } else {
    // water-filling: grant one unit at a time to the largest residual
    // starve[a] - plan[a] (ties to the lowest index); this minimizes the
    // maximal residual subject to sum plan = m, 0 <= plan <= starve.
    for (std::int64_t granted = 0; granted < m; ++granted) {
      std::size_t pick = 0;
      std::int64_t best_res = -1;
      for (std::size_t a = 0; a < k; ++a) {
        const std::int64_t res = starve[a] - plan[a];
        if (res > best_res) {
          best_res = res;
          pick = a;
        }
      }
      plan[pick] += 1;
    }
  }
  return plan;
}

run_result run(std::span<const arm_spec> arms, const moment_class& mc, const stop_config& cfg,
               rng_stream& rng) {
  const std::size_t k = arms.size();
  if (k < 2) fail(errc::domain_error, "need at least two arms");
  const auto k1 = static_cast<std::int64_t>(k + 1);

  run_result res;
  res.resolved_alpha = cfg.alpha == 0 ? static_cast<int>(2 * k + 2) : cfg.alpha;
  if (res.resolved_alpha < static_cast<int>(2 * k + 2))
    fail(errc::domain_error, "alpha >= 2K+2 is required");

  std::vector<double> b_tilde = cfg.b_tilde;
  if (b_tilde.empty()) {
    b_tilde.reserve(k);
    for (const auto& a : arms) b_tilde.push_back(btilde_for_arm(a, mc, cfg.b_mode));
  } else if (b_tilde.size() != k) {
    fail(errc::domain_error, "b_tilde size mismatch");
  }

  std::int64_t m = cfg.m;
  if (m == 0) {
    // provisional C at the floor batch size, then the cost-model optimum
    const double c0 = cfg.c_const > 0
                          ? cfg.c_const
                          : threshold_constant(cfg.delta, res.resolved_alpha, k, k1 * k1, b_tilde);
    std::vector<discrete_dist> laws;
    laws.reserve(k);
    for (const auto& a : arms) laws.push_back(a.discretize(512));
    const double v = solve_allocation(laws, mc).value;
    const double mstar = optimal_batch(cfg.costs, cfg.delta, c0, res.resolved_alpha, v);
    m = std::max<std::int64_t>(k1 * k1, static_cast<std::int64_t>(std::ceil(mstar)));
  } else if (m < k1 * k1) {
    fail(errc::batch_too_small, "configured batch size below (K+1)^2");
  }
  res.resolved_m = m;

  res.resolved_c = cfg.c_const > 0
                       ? cfg.c_const
                       : threshold_constant(cfg.delta, res.resolved_alpha, k, m, b_tilde);

  std::size_t true_best = 0;
  for (std::size_t a = 1; a < k; ++a)
    if (arms[a].mean() > arms[true_best].mean()) true_best = a;

  run_state st;
  st.m = m;
  st.counts.assign(k, 0);
  st.emp.resize(k);

  auto draw_into = [&](std::span<const std::int64_t> plan) {
    const auto t0 = clock::now();
    for (std::size_t a = 0; a < k; ++a) {
      if (plan[a] <= 0) continue;
      const auto xs = arms[a].sample_n(rng, static_cast<std::size_t>(plan[a]));
      st.emp[a] = empirical_push(st.emp[a], xs, st.counts[a]);
      st.counts[a] += plan[a];
    }
    res.sample_seconds += seconds_since(t0);
  };

  // round-robin init: one sample at a time, arms in index order
  {
    std::vector<std::int64_t> init(k, m / static_cast<std::int64_t>(k));
    for (std::int64_t r = 0; r < m % static_cast<std::int64_t>(k); ++r) init[static_cast<std::size_t>(r)] += 1;
    draw_into(init);
    st.batch_index = 1;
    st.total = m;
  }

  std::vector<double> t_prev(k, 1.0 / static_cast<double>(k));
  allocation_options aopt;
  aopt.tol_c = 1e-5;
  aopt.tol_s = 1e-4;
  aopt.tol_y = 1e-6;
  aopt.tol_x = 1e-6;
  aopt.klinf_tol = 1e-8;

  for (;;) {
    if (cfg.check_sample_floor) {
      const double floor_val = std::sqrt(static_cast<double>(st.total)) - 1.0;
      for (std::size_t a = 0; a < k; ++a)
        if (static_cast<double>(st.counts[a]) < floor_val - 1e-9) res.sample_floor_violations += 1;
    }

    const auto t0 = clock::now();
    const glr_result g = glr_statistic(st, mc, cfg.glr_tol);
    res.solver_seconds += seconds_since(t0);
    const double beta = threshold(st.total, cfg.delta, res.resolved_c, res.resolved_alpha, k);

    if (cfg.record_trace) {
      batch_trace_row row;
      row.n = st.total;
      row.z = g.z;
      row.beta = beta;
      row.props.resize(k);
      for (std::size_t a = 0; a < k; ++a)
        row.props[a] = static_cast<double>(st.counts[a]) / static_cast<double>(st.total);
      res.trace.push_back(std::move(row));
    }

    if (g.z >= beta) {
      res.best_arm = g.best;
      break;
    }
    if (st.total + m > cfg.max_samples) {
      res.best_arm = g.best;
      res.budget_exceeded = true;
      break;
    }

    const auto t1 = clock::now();
    std::vector<const klinf_cache*> cache_ptrs;
    std::vector<klinf_cache> caches;
    if (cfg.cache_grid >= 2) {
      double lo = st.emp[0].mean(), hi = lo;
      for (std::size_t a = 1; a < k; ++a) {
        lo = std::min(lo, st.emp[a].mean());
        hi = std::max(hi, st.emp[a].mean());
      }
      lo = clamp_target(mc, lo);
      hi = clamp_target(mc, hi);
      if (hi - lo > 1e-9) {
        caches.reserve(k);
        for (std::size_t a = 0; a < k; ++a)
          caches.push_back(klinf_cache::build(st.emp[a], mc, lo, hi, cfg.cache_grid, 1e-8));
        for (const auto& c : caches) cache_ptrs.push_back(&c);
      }
    }
    try {
      allocation_options opt = aopt;
      opt.caches = cache_ptrs;
      const allocation_solution sol = solve_allocation(st.emp, mc, opt);
      t_prev = sol.t_star;
    } catch (const error&) {
      res.alloc_failures += 1;  // keep tracking the previous proportions
    }
    res.solver_seconds += seconds_since(t1);

    const auto plan = plan_batch(st.counts, t_prev, m, st.batch_index, rng);
    draw_into(plan);
    st.batch_index += 1;
    st.total += m;
  }

  res.tau = st.total;
  res.batches = st.batch_index;
  res.correct = res.best_arm == true_best;
  res.final_props.resize(k);
  for (std::size_t a = 0; a < k; ++a)
    res.final_props[a] = static_cast<double>(st.counts[a]) / static_cast<double>(st.total);
  return res;
}

}  // namespace bai
