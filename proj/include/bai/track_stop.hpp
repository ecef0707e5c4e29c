#pragma once
/*
 * The batched track-and-stop algorithm:
 *
 *  1. round-robin init of m samples (m >= (K+1)^2)
 *  2. per batch: check the GLR stopping rule, then re-solve the allocation on
 *     the empirical laws and draw the next batch
 *  3. starvation quotas s_a = (sqrt((l+1)m) - N_a)^+ keep every arm above
 *     sqrt(lm) - 1 pulls; the remainder is drawn i.i.d. from t*(mu_hat)
 *
 * Stopping fires when Z(n) = min_b inf_x N_j KL_inf(mu_hat_j, x)
 * + N_b KL_inf(mu_hat_b, x) reaches beta(n, delta) = log(C n^alpha / delta
 * (log n)^K (log 1/delta)^(2K+1)), with C the fixed point of the series bound
 * that makes the error probability sum below delta.
 */
#include <cstdint>
#include <span>
#include <vector>

#include "bai/cost_model.hpp"
#include "bai/distributions.hpp"
#include "bai/lower_bound.hpp"

namespace bai {

// Normalization of the per-arm deviation constants: the theorem statements
// use (d1 + d2) with halved denominators, the appendix derivation works with
// c1 + c2 = 2(d1 + d2). Both are exposed; bounds only loosen under `proof`.
enum class btilde_mode { statement, proof };

double btilde_from_moments(double abs_dev, double abs_f_dev, double mean, const moment_class& mc,
                           btilde_mode mode);
double btilde_for_arm(const arm_spec& arm, const moment_class& mc, btilde_mode mode);
double btilde_for_dist(const discrete_dist& d, const moment_class& mc, btilde_mode mode);
// Heuristic fallback when true moments are unknown: 2 (c1_max + c2_max) with
// E|X - m| <= 2 f^-1(B) against a centered mean and E|B - f| <= 2B.
double btilde_conservative_default(const moment_class& mc);

struct stop_config {
  double delta = 0.05;
  int alpha = 0;                 // 0 -> 2K+2; explicit values below that are rejected
  double c_const = 0;            // <= 0 -> threshold_constant fixed point
  std::int64_t m = 0;            // 0 -> cost-model optimum, floored at (K+1)^2
  std::vector<double> b_tilde;   // per-arm; empty -> closed forms from the arm specs
  btilde_mode b_mode = btilde_mode::statement;
  std::int64_t max_samples = 100'000'000;
  cost_params costs{0.0001, 5.0, 1e-4};  // used only when m is auto
  std::size_t cache_grid = 48;   // allocation caches per batch; 0 = exact solves
  double glr_tol = 1e-6;         // relative value tolerance of the stopping statistic
  bool check_sample_floor = false;  // verify N_a(lm) >= sqrt(lm) - 1 every batch
  bool record_trace = false;
};

// beta(n, delta); requires n >= 2.
double threshold(std::int64_t n, double delta, double c_const, int alpha, std::size_t k);

// Fixed point of
//   C = sum_l (4 e beta^2(lm, delta))^K e prod_a e^{B_a}
//             / (K^K (lm)^(alpha-2K) (log 1/delta)^(2K+1)),
// the series truncated when a term drops below 1e-12 of the partial sum.
// The converged value is rounded up by 1% as margin.
double threshold_constant(double delta, int alpha, std::size_t k, std::int64_t m,
                          std::span<const double> b_tilde);

struct run_state {
  std::vector<std::int64_t> counts;
  std::vector<discrete_dist> emp;
  std::int64_t m = 0;
  std::int64_t batch_index = 0;  // l
  std::int64_t total = 0;        // lm
};

struct glr_result {
  std::size_t best = 0;
  double z = 0;
};

// Z_j(n) with j the largest empirical mean (lowest index on ties).
glr_result glr_statistic(const run_state& state, const moment_class& mc, double tol = 1e-6);

// Per-arm draw counts for the next batch (sums to m exactly).
std::vector<std::int64_t> plan_batch(std::span<const std::int64_t> counts,
                                     std::span<const double> t_star, std::int64_t m,
                                     std::int64_t batch_index, rng_stream& rng);

struct batch_trace_row {
  std::int64_t n = 0;
  double z = 0;
  double beta = 0;
  std::vector<double> props;
};

struct run_result {
  std::size_t best_arm = 0;
  std::int64_t tau = 0;
  std::int64_t batches = 0;
  bool correct = false;
  bool budget_exceeded = false;
  std::vector<double> final_props;
  std::int64_t alloc_failures = 0;      // batches that reused the previous t*
  std::int64_t sample_floor_violations = 0;
  double solver_seconds = 0;
  double sample_seconds = 0;
  std::int64_t resolved_m = 0;
  double resolved_c = 0;
  int resolved_alpha = 0;
  std::vector<batch_trace_row> trace;
};

run_result run(std::span<const arm_spec> arms, const moment_class& mc, const stop_config& cfg,
               rng_stream& rng);

}  // namespace bai
