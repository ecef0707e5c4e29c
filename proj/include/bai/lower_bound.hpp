#pragma once
/*
 * The max-min lower-bound problem:
 *
 *   V(mu) = sup_{t in simplex} min_{j != best} inf_x  t_best KL_inf(mu_best, x)
 *                                                   + t_j    KL_inf(mu_j, x)
 *
 * solved by the nested line-search scheme: for a level c, each competitor's
 * weight ratio y_j(c) solves Itilde_j(y) = inf_x KL_inf(mu_best,x)
 * + y KL_inf(mu_j,x) = c (Itilde_j is strictly increasing in y), and the outer
 * search drives S(c) = sum_j KL_inf(mu_best,x_j(c)) / KL_inf(mu_j,x_j(c))
 * (nondecreasing in c) to 1. Then t_j = y_j(c*) / sum_i y_i(c*) and
 * V = c* t_best.
 *
 * Empirical arms may fall outside the class; the level range then has
 * d_j = +inf for those competitors and the y-bracket doubles adaptively.
 */
#include <span>
#include <vector>

#include "bai/klinf.hpp"

namespace bai {

struct allocation_solution {
  std::vector<double> t_star;    // input order, sums to 1
  double value = 0;              // V(mu) = c_star * t_best
  double c_star = 0;
  std::vector<double> x_cross;   // crossing points; NaN at the best arm
  std::vector<double> y_ratios;  // t_j / t_best; 1 at the best arm
  std::size_t best = 0;
  bool tie_flag = false;    // best-mean tie broken by lowest index
  bool degenerate = false;  // no usable gap: uniform fallback allocation
};

struct allocation_options {
  double tol_c = 1e-8;      // relative width for the outer c bisection
  double tol_s = 1e-7;      // residual |S(c) - 1| accepted at termination
  double tol_y = 1e-9;      // relative residual for the Itilde(y) = c solves
  double tol_x = 1e-9;      // inner x search, relative to the mean gap
  double klinf_tol = 1e-9;  // dual solver tolerance for direct evaluations
  std::vector<const klinf_cache*> caches;  // optional per-arm interpolation caches
};

struct inner_min_result {
  double x = 0;
  double value = 0;
};

// inf over x in [m(mu_j), m(mu_best)] of KL_inf(mu1,x) + y KL_inf(muj,x).
// A vanishing mean gap short-circuits to value 0 at the common mean.
inner_min_result inner_min(const discrete_dist& mu1, const discrete_dist& muj, double y,
                           const moment_class& mc, double tol = 1e-9,
                           const klinf_cache* cache1 = nullptr,
                           const klinf_cache* cachej = nullptr);

struct y_of_c_result {
  double y = 0;
  double x = 0;
};

// Solves Itilde_j(y) = c by bisection over an adaptively doubled bracket.
y_of_c_result solve_y_of_c(const discrete_dist& mu1, const discrete_dist& muj, double c,
                           const moment_class& mc, double tol = 1e-9,
                           const klinf_cache* cache1 = nullptr,
                           const klinf_cache* cachej = nullptr);

allocation_solution solve_allocation(std::span<const discrete_dist> arms, const moment_class& mc,
                                     const allocation_options& opt = {});

struct brute_force_result {
  std::vector<double> t;
  double value = 0;
};

// Exhaustive simplex-lattice evaluation of max_t min_j G_j; test oracle.
// Guards: K <= 4, grid_n <= 200.
brute_force_result brute_force_allocation(std::span<const discrete_dist> arms,
                                          const moment_class& mc, int grid_n,
                                          std::size_t cache_grid = 2001);

// log(1/(2.4 delta)) / V(mu)
double sample_lower_bound(std::span<const discrete_dist> arms, const moment_class& mc,
                          double delta, const allocation_options& opt = {});
double sample_lower_bound_from_value(double v_mu, double delta);

}  // namespace bai
