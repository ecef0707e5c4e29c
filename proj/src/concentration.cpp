#include "bai/concentration.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "bai/klinf.hpp"

namespace bai {

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(rep) for rep in [0, reps) across a small worker pool.
template <class F>
void parallel_reps(std::int64_t reps, int threads, F f) {
  const int nt = std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(1, reps));
  if (nt <= 1) {
    for (std::int64_t r = 0; r < reps; ++r) f(r);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t r = next.fetch_add(1);
        if (r >= reps) return;
        f(r);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace

double klinf_tail_bound(std::int64_t n, double u, double b_tilde1) {
  if (n < 1) fail(errc::domain_error, "tail bound needs n >= 1");
  const double nd = static_cast<double>(n);
  return std::exp(2.0 * std::log(nd + 1.0) + b_tilde1 - nd * u);
}

double sum_tail_bound(std::int64_t n, double gamma, std::size_t k,
                      std::span<const double> b_tilde) {
  if (n < 2) fail(errc::domain_error, "sum tail bound needs n >= 2");
  if (b_tilde.size() != k) fail(errc::domain_error, "need one B~ constant per arm");
  if (!(gamma > static_cast<double>(k) + 1.0))
    fail(errc::gamma_too_small, "sum tail bound needs Gamma > K+1");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  double sum_b = 0;
  for (double b : b_tilde) sum_b += b;
  const double log_val = (kd + 1.0) +
                         kd * std::log(4.0 * nd * nd * gamma * gamma * std::log(nd) / kd) - gamma +
                         sum_b;
  return std::exp(log_val);
}

std::vector<tail_bound_report> mc_tail_estimate(const arm_spec& kappa, const moment_class& mc,
                                                std::int64_t n, std::span<const double> u_grid,
                                                std::int64_t reps, std::uint64_t seed,
                                                double b_tilde1, int threads) {
  if (reps < 1) fail(errc::domain_error, "need at least one replication");
  const double true_mean = kappa.mean();
  std::vector<std::atomic<std::int64_t>> exceed(u_grid.size());
  for (auto& c : exceed) c.store(0);

  parallel_reps(reps, threads, [&](std::int64_t rep) {
    rng_stream rng(seed + static_cast<std::uint64_t>(rep));
    const auto xs = kappa.sample_n(rng, static_cast<std::size_t>(n));
    const auto emp = discrete_dist::from_samples(xs);
    const double v = klinf(emp, true_mean, mc, 1e-9).value;
    for (std::size_t i = 0; i < u_grid.size(); ++i)
      if (v >= u_grid[i]) exceed[i].fetch_add(1);
  });

  std::vector<tail_bound_report> out(u_grid.size());
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    out[i].n = n;
    out[i].u = u_grid[i];
    out[i].bound = klinf_tail_bound(n, u_grid[i], b_tilde1);
    out[i].empirical_freq =
        static_cast<double>(exceed[i].load()) / static_cast<double>(reps);
    out[i].reps = reps;
    out[i].seed = seed;
  }
  return out;
}

std::vector<tail_bound_report> mc_sum_tail_estimate(std::span<const arm_spec> arms,
                                                    const moment_class& mc,
                                                    std::int64_t n_per_arm,
                                                    std::span<const double> gamma_grid,
                                                    std::int64_t reps, std::uint64_t seed,
                                                    std::span<const double> b_tilde,
                                                    int threads) {
  if (reps < 1) fail(errc::domain_error, "need at least one replication");
  const std::size_t k = arms.size();
  const std::int64_t n_total = n_per_arm * static_cast<std::int64_t>(k);
  std::vector<std::atomic<std::int64_t>> exceed(gamma_grid.size());
  for (auto& c : exceed) c.store(0);

  parallel_reps(reps, threads, [&](std::int64_t rep) {
    rng_stream rng(seed + static_cast<std::uint64_t>(rep));
    double stat = 0;
    for (std::size_t a = 0; a < k; ++a) {
      const auto xs = arms[a].sample_n(rng, static_cast<std::size_t>(n_per_arm));
      const auto emp = discrete_dist::from_samples(xs);
      stat += static_cast<double>(n_per_arm) * klinf(emp, arms[a].mean(), mc, 1e-9).value;
    }
    for (std::size_t i = 0; i < gamma_grid.size(); ++i)
      if (stat >= gamma_grid[i]) exceed[i].fetch_add(1);
  });

  std::vector<tail_bound_report> out(gamma_grid.size());
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    out[i].n = n_total;
    out[i].u = gamma_grid[i];
    out[i].bound = sum_tail_bound(n_total, gamma_grid[i], k, b_tilde);
    out[i].empirical_freq =
        static_cast<double>(exceed[i].load()) / static_cast<double>(reps);
    out[i].reps = reps;
    out[i].seed = seed;
  }
  return out;
}

}  // namespace bai
