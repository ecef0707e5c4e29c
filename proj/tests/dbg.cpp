#include <cstdio>
#include "bai/lower_bound.hpp"
using namespace bai;
int main() {
  const auto mc = moment_class::power(2.0, 9.0);
  // mirrored about zero: exact symmetry of the class
  auto a1 = discrete_dist::from_points({1.0, 2.0}, {0.5, 0.5});
  auto a2 = a1.reflected();
  discrete_dist arms[] = {a1, a2};
  auto sol = solve_allocation(arms, mc);
  std::printf("zero-mirror: t=(%.9f, %.9f) V=%.9g c*=%.9g x2=%.3e\n", sol.t_star[0], sol.t_star[1],
              sol.value, sol.c_star, sol.x_cross[1]);
  // brute-force cross-check of the midpoint-1.25 instance
  auto b2 = a1.mirrored(1.25);
  discrete_dist arms2[] = {a1, b2};
  auto sol2 = solve_allocation(arms2, mc);
  auto bf = brute_force_allocation(arms2, mc, 200);
  std::printf("mid-1.25: solver t=(%.6f,%.6f) V=%.9g | brute t=(%.3f,%.3f) V=%.9g\n",
              sol2.t_star[0], sol2.t_star[1], sol2.value, bf.t[0], bf.t[1], bf.value);
  // Theorem 2(b) residual with exact klinf at the returned crossing
  double r = klinf(a1, sol2.x_cross[1], mc).value / klinf(b2, sol2.x_cross[1], mc).value;
  std::printf("S residual at x2: %.3e\n", r - 1.0);
  return 0;
}
