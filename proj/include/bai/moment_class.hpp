#pragma once
/*
 * The distribution class L = { eta : E_eta f(|X|) <= B } for a convex,
 * strictly increasing f with f(y)/y -> inf. Two families are shipped:
 *
 *   power:  f(y) = y^p, p > 1
 *   xlogx:  f(y) = y log y on [1, inf), 0 on [0, 1]
 *
 * All feasibility geometry used by the KL_inf dual lives here: the feasible
 * mean interval (-f^-1(B), f^-1(B)), membership margins, and the global
 * minimum of the dual constraint function
 *
 *   h(y) = 1 - (y - x) l1 - (B - f(|y|)) l2.
 *
 * xlogx is not strictly convex on [0,1]; when the minimizer set of h is flat
 * there, ties are resolved toward the smallest |y|.
 */
#include <cmath>
#include <limits>
#include <utility>

#include "bai/common.hpp"

namespace bai {

enum class f_kind { power, xlogx };

struct dual_pair {
  double l1 = 0;
  double l2 = 0;
};

struct constraint_min {
  double y = 0;     // global minimizer of h (+inf when the infimum is -inf)
  double h = 0;     // value at the minimizer
};

class moment_class {
 public:
  moment_class(f_kind kind, double p, double bound);

  static moment_class power(double p, double bound) { return {f_kind::power, p, bound}; }
  static moment_class xlogx(double bound) { return {f_kind::xlogx, 0.0, bound}; }

  f_kind kind() const { return kind_; }
  double p() const { return p_; }
  double bound() const { return bound_; }

  double f(double y) const;          // f(|y|)
  double f_inv(double v) const;      // inverse of f on [0, inf), v >= 0
  double feasible_hi() const { return f_inv_b_; }  // f^-1(B)

  // (-f^-1(B), f^-1(B)); any x with f(|x|) < B lies strictly inside.
  std::pair<double, double> feasible_mean_interval() const { return {-f_inv_b_, f_inv_b_}; }

  bool feasible_target(double x) const { return f(x) < bound_; }

  // Global minimum of h(y) = 1 - (y-x) l1 - (B - f(|y|)) l2 over y in R.
  // l2 = 0, l1 > 0 has infimum -inf: returns {+inf, -inf}. l1 = l2 = 0 is the
  // constant 1, minimizer 0 by convention.
  constraint_min dual_constraint_min(double x, const dual_pair& d) const;

  // Derivative-free bracketed variant (reference path for the closed forms).
  constraint_min dual_constraint_min_bracketed(double x, const dual_pair& d) const;

 private:
  f_kind kind_;
  double p_;
  double bound_;
  double f_inv_b_;
};

}  // namespace bai
