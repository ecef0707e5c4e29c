#pragma once
/*
 * Arm models, empirical-distribution accumulation and discrete-measure
 * utilities.
 *
 * discrete_dist is the universal representation for empirical laws and test
 * measures: strictly sorted atoms, positive weights summing to one. rng_stream
 * is a counter-based generator (splitmix64): the same seed yields a
 * bit-identical sample stream, and replications are parallelized by seed
 * arithmetic alone.
 */
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "bai/moment_class.hpp"

namespace bai {

class rng_stream {
 public:
  explicit rng_stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform on the open interval (0, 1)
  double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

class discrete_dist {
 public:
  discrete_dist() = default;

  // Merges duplicate points and normalizes; weights must be positive.
  static discrete_dist from_points(std::vector<double> atoms, std::vector<double> weights);
  static discrete_dist from_samples(std::span<const double> samples);
  static discrete_dist point_mass(double v) { return from_points({v}, {1.0}); }

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  double mean() const { return mean_; }
  double min_atom() const { return atoms_.front(); }
  double max_atom() const { return atoms_.back(); }

  double moment_f(const moment_class& mc) const;  // E f(|X|)
  double abs_dev() const;                         // E |X - mean|

  // Atoms negated (law of -X). klinf's lower side reduces to the upper side
  // of the reflected law because the class constraint uses f(|y|).
  discrete_dist reflected() const;
  // Law of 2c - X (mirror about c); used for symmetric test instances.
  discrete_dist mirrored(double c) const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  double mean_ = 0;
};

// B - E_dist f(|X|); nonnegative iff dist lies in the class.
double membership_margin(const discrete_dist& dist, const moment_class& mc);

// Empirical law of the multiset behind `dist` (prior_count points) extended by
// `samples`. Weights stay exact multiples of 1/(prior_count + samples.size()).
discrete_dist empirical_push(const discrete_dist& dist, std::span<const double> samples,
                             std::int64_t prior_count);

// sum_i p_i log(p_i / q_i); +inf when some p-atom has no q-mass.
double kl_discrete(const discrete_dist& p, const discrete_dist& q);

struct witness_result {
  discrete_dist kappa;
  double gamma = 0;
  double beta = 0;
  double kl_bound = 0;      // -eta(y_cut) log(1-gamma), >= KL(eta, kappa)
  bool mean_target_met = false;
};

// The tail-inflation construction: kappa = (1-gamma) eta below y_cut with the
// tail scaled by beta = 1 + gamma eta(y_cut)/eta_bar(y_cut), gamma = 1-e^-a.
// KL(eta, kappa) <= a always; m(kappa) >= b only when the tail allows.
witness_result right_dense_witness(const discrete_dist& eta, double a, double b, double y_cut);

// ---------------------------------------------------------------------------
// Samplable arms.

struct pareto_arm {
  double alpha = 0;  // shape, > 1 so the mean exists
  double beta = 0;   // scale, > 0
};
struct bernoulli_arm {
  double q = 0;  // P(hi)
  double lo = 0;
  double hi = 1;
};
struct uniform_discrete_arm {
  std::vector<double> atoms;
};
struct point_mass_arm {
  double v = 0;
};
struct trunc_normal_arm {
  double mu0 = 0;
  double sigma = 1;
  double lo = 0;
  double hi = 1;
};

class arm_spec {
 public:
  using variant = std::variant<pareto_arm, bernoulli_arm, uniform_discrete_arm, point_mass_arm,
                               trunc_normal_arm>;

  arm_spec(variant v);  // validates parameters

  static arm_spec pareto(double alpha, double beta) { return arm_spec(pareto_arm{alpha, beta}); }
  static arm_spec bernoulli(double q, double lo = 0, double hi = 1) {
    return arm_spec(bernoulli_arm{q, lo, hi});
  }
  static arm_spec uniform_discrete(std::vector<double> atoms) {
    return arm_spec(uniform_discrete_arm{std::move(atoms)});
  }
  static arm_spec point_mass(double v) { return arm_spec(point_mass_arm{v}); }
  static arm_spec trunc_normal(double mu0, double sigma, double lo, double hi) {
    return arm_spec(trunc_normal_arm{mu0, sigma, lo, hi});
  }

  const variant& value() const { return v_; }

  double mean() const;
  double moment_f(const moment_class& mc) const;  // E f(|X|)
  double abs_dev() const;                         // E |X - mean|
  double abs_f_dev(const moment_class& mc) const; // E |B - f(|X|)|

  double sample(rng_stream& rng) const;
  std::vector<double> sample_n(rng_stream& rng, std::size_t n) const;

  // Quantile discretization (inverse CDF at (i+1/2)/n) for the continuous
  // kinds; discrete kinds return their exact law regardless of n.
  discrete_dist discretize(std::size_t n) const;

 private:
  variant v_;
};

std::vector<double> sample(const arm_spec& arm, rng_stream& rng, std::size_t n);

}  // namespace bai
