#include <chrono>
#include <cstdio>
#include <cmath>

#include "bai/klinf.hpp"
#include "bai/lower_bound.hpp"

using namespace bai;

int main() {
  const auto mc = moment_class::power(2.0, 9.0);

  // Point mass at 0, x = 2: analytic optimum kappa* = (5/9) d0 + (4/9) d4.5,
  // KL_inf = log(9/5), duals l1 = 0.8, l2 = 4/45.
  auto eta = discrete_dist::point_mass(0.0);
  auto r = klinf_upper(eta, 2.0, mc);
  std::printf("point mass: value=%.12f expect=%.12f  dual=(%.6f, %.6f) expect=(0.8, %.6f)\n",
              r.value, std::log(9.0 / 5.0), r.dual.l1, r.dual.l2, 4.0 / 45.0);

  auto rec = primal_reconstruct(eta, 2.0, mc, r.dual);
  std::printf("reconstruct: mean_res=%.3e mom_res=%.3e atom=(%.6f, %.6f)\n", rec.mean_residual,
              rec.moment_residual, rec.extra_atom ? rec.extra_atom->first : -1,
              rec.extra_atom ? rec.extra_atom->second : -1);

  // value 0 at the mean for a member of the class
  auto u01 = discrete_dist::from_points({0.0, 1.0}, {0.5, 0.5});
  auto r0 = klinf(u01, 0.5, mc);
  std::printf("at mean: %.3e (expect 0), dual (%g, %g)\n", r0.value, r0.dual.l1, r0.dual.l2);

  // reflection consistency
  auto rl = klinf(u01, -0.5, mc);
  auto rr = klinf_upper(u01.reflected(), 0.5, mc);
  std::printf("reflect: %.12f vs %.12f\n", rl.value, rr.value);

  // timing on a biggish empirical-like law
  {
    rng_stream rng(7);
    auto arm = arm_spec::pareto(4.0, 1.875);
    auto xs = arm.sample_n(rng, 5000);
    auto d = discrete_dist::from_samples(xs);
    auto t0 = std::chrono::steady_clock::now();
    double acc = 0;
    const int reps = 50;
    for (int i = 0; i < reps; ++i) acc += klinf(d, 2.7 + 1e-5 * i, mc).value;
    auto t1 = std::chrono::steady_clock::now();
    std::printf("5000-atom solve: %.3f ms each (acc=%g)\n",
                std::chrono::duration<double, std::milli>(t1 - t0).count() / reps, acc);
  }

  // symmetric two-arm allocation must be (1/2, 1/2)
  auto a1 = discrete_dist::from_points({1.0, 2.0}, {0.5, 0.5});
  auto a2 = a1.mirrored(1.25);  // means 1.5 vs 1.0
  discrete_dist arms[] = {a1, a2};
  auto sol = solve_allocation(arms, mc);
  std::printf("sym alloc: t=(%.9f, %.9f) V=%.9f c*=%.9f x2=%.9f\n", sol.t_star[0], sol.t_star[1],
              sol.value, sol.c_star, sol.x_cross[1]);
  return 0;
}
