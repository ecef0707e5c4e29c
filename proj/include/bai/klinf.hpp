#pragma once
/*
 * KL_inf(eta, x): the minimal KL divergence from eta to any distribution in
 * the class with mean on the far side of x, computed through its concave dual
 *
 *   max_{(l1,l2) in R2}  E_eta log(1 - (X - x) l1 - (B - f(|X|)) l2),
 *
 * where R2 = { l >= 0 : h(y) = 1 - (y-x) l1 - (B - f(|y|)) l2 >= 0 for all y }.
 * R2 is contained in the rectangle S = [0, 1/(f^-1(B)-x)] x [0, 1/(B-f(|x|))].
 *
 * The maximizer is found by a bilevel line search: for each l2 the feasible
 * l1 range is an interval (R2 is convex), the partial maximum over it is a
 * concave function of l2, and both levels are solved by safeguarded
 * golden-section (Brent) with explicit endpoint evaluation. Feasibility
 * endpoints come from closed forms of the constraint minimum for the shipped
 * f families.
 *
 * The lower side (m(kappa) <= x) reduces to the upper side of the reflected
 * law, valid because the class constraint uses f(|y|).
 */
#include <optional>
#include <utility>
#include <vector>

#include "bai/distributions.hpp"
#include "bai/moment_class.hpp"

namespace bai {

enum class klinf_side { upper, lower };

struct klinf_result {
  double value = 0;
  dual_pair dual;  // for side == lower these are the duals of the reflected problem
  klinf_side side = klinf_side::upper;
  std::optional<std::pair<double, double>> primal_extra_atom;  // (y0, mass)
};

// Upper side: requires f(|x|) < B and x >= m(eta) - tol.
klinf_result klinf_upper(const discrete_dist& eta, double x, const moment_class& mc,
                         double tol = 1e-9);

// Side dispatch on x vs m(eta); lower side solved by reflection.
klinf_result klinf(const discrete_dist& eta, double x, const moment_class& mc, double tol = 1e-9);

// Bounded-support fast path: all atoms <= hi, maximize E log(1 - (X-x) l)
// over l in [0, 1/(hi-x)].
double klinf_bounded(const discrete_dist& eta, double x, double hi, double tol = 1e-9);

struct primal_reconstruction {
  discrete_dist kappa;
  std::optional<std::pair<double, double>> extra_atom;  // (y0, mass)
  double mean_residual = 0;    // m(kappa) - x
  double moment_residual = 0;  // E_kappa f(|X|) - B
};

// Rebuilds the primal optimizer kappa* from an (upper-side) dual argmax:
// density w_i / h(x_i) on eta's atoms plus, when mass is missing, one extra
// atom at the constraint minimizer y0.
primal_reconstruction primal_reconstruct(const discrete_dist& eta, double x,
                                         const moment_class& mc, const dual_pair& dual);

class klinf_cache {
 public:
  static klinf_cache build(const discrete_dist& eta, const moment_class& mc, double x_lo,
                           double x_hi, std::size_t n_grid, double tol = 1e-9);

  // Exact at grid points, linear in between, clamped outside (flag set).
  double eval(double x, bool& out_of_range) const;
  double eval(double x) const {
    bool oor;
    return eval(x, oor);
  }

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  std::size_t grid_size() const { return vals_.size(); }
  const std::vector<double>& values() const { return vals_; }

 private:
  double x_lo_ = 0, x_hi_ = 0, dx_ = 0;
  std::vector<double> vals_;
};

}  // namespace bai
