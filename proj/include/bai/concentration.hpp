#pragma once
/*
 * Evaluable deviation bounds for the empirical KL_inf statistics, plus the
 * Monte Carlo harnesses that check the empirical tail never exceeds them.
 * Bounds are reported unclamped (values above 1 stay visible).
 */
#include <cstdint>
#include <span>
#include <vector>

#include "bai/distributions.hpp"

namespace bai {

struct tail_bound_report {
  std::int64_t n = 0;
  double u = 0;  // deviation level (or Gamma for the sum statistic)
  double bound = 0;
  double empirical_freq = 0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
};

// (n+1)^2 e^{B1} e^{-n u}
double klinf_tail_bound(std::int64_t n, double u, double b_tilde1);

// e^{K+1} (4 n^2 Gamma^2 log n / K)^K e^{-Gamma} prod_a e^{B_a}; Gamma > K+1.
double sum_tail_bound(std::int64_t n, double gamma, std::size_t k,
                      std::span<const double> b_tilde);

// Frequency of KL_inf(kappa_hat(n), m(kappa)) >= u over seeded replications,
// one report row per u; bound column uses b_tilde1.
std::vector<tail_bound_report> mc_tail_estimate(const arm_spec& kappa, const moment_class& mc,
                                                std::int64_t n, std::span<const double> u_grid,
                                                std::int64_t reps, std::uint64_t seed,
                                                double b_tilde1, int threads = 0);

// Same harness for the sum statistic sum_a N_a KL_inf(mu_hat_a, m(mu_a)) under
// a uniform allocation of n_per_arm samples to each arm.
std::vector<tail_bound_report> mc_sum_tail_estimate(std::span<const arm_spec> arms,
                                                    const moment_class& mc,
                                                    std::int64_t n_per_arm,
                                                    std::span<const double> gamma_grid,
                                                    std::int64_t reps, std::uint64_t seed,
                                                    std::span<const double> b_tilde,
                                                    int threads = 0);

}  // namespace bai
