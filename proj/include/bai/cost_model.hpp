#pragma once
/*
 * Experiment-cost model: a solve costs c21 + c22 n seconds after n samples, a
 * sample costs c1. With R = beta_tilde(delta)/V(mu) as the sample-complexity
 * proxy and (R + m)/m batches, the total cost is
 *
 *   (c1 + c21/m)(R + m) + 0.5 c22/m (R + m)^2,
 *
 * minimized at m* = sqrt(c21 R + 0.5 c22 R^2) / sqrt(c1 + 0.5 c22).
 */
#include <span>
#include <utility>

namespace bai {

struct cost_params {
  double c1 = 0;   // seconds per sample
  double c21 = 0;  // fixed seconds per solve
  double c22 = 0;  // seconds per solve per accumulated sample
};

struct cost_fit {
  double c21 = 0;
  double c22 = 0;
  double residual = 0;  // root mean squared
  bool clamped = false;
};

// Ordinary least squares of seconds against n; negative coefficients are
// clamped to zero with a flag.
cost_fit fit_solver_cost(std::span<const std::pair<double, double>> timings);

// log(C/delta (log(C/delta))^alpha); requires C/delta > e.
double beta_tilde(double delta, double c_const, double alpha);

// beta_tilde/V + m
double complexity_proxy(double delta, double c_const, double alpha, double v_mu, double m);

double total_cost(double m, const cost_params& cp, double delta, double c_const, double alpha,
                  double v_mu);

double optimal_batch(const cost_params& cp, double delta, double c_const, double alpha,
                     double v_mu);

}  // namespace bai
