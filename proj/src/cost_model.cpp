#include "bai/cost_model.hpp"

#include <cmath>

#include "bai/common.hpp"

namespace bai {

cost_fit fit_solver_cost(std::span<const std::pair<double, double>> timings) {
  if (timings.size() < 2) fail(errc::underdetermined, "need at least two timing points");
  double sn = 0, ss = 0, snn = 0, sns = 0;
  const auto count = static_cast<double>(timings.size());
  for (const auto& [n, sec] : timings) {
    sn += n;
    ss += sec;
    snn += n * n;
    sns += n * sec;
  }
  const double det = count * snn - sn * sn;
  if (det <= 0) fail(errc::underdetermined, "timings share a single n value");
  cost_fit fit;
  fit.c22 = (count * sns - sn * ss) / det;
  fit.c21 = (ss - fit.c22 * sn) / count;
  if (fit.c21 < 0 || fit.c22 < 0) {
    fit.clamped = true;
    if (fit.c22 < 0) {  // refit as a constant
      fit.c22 = 0;
      fit.c21 = std::max(0.0, ss / count);
    } else {
      fit.c21 = 0;
      fit.c22 = std::max(0.0, sns / snn);
    }
  }
  double sq = 0;
  for (const auto& [n, sec] : timings) {
    const double r = sec - (fit.c21 + fit.c22 * n);
    sq += r * r;
  }
  fit.residual = std::sqrt(sq / count);
  return fit;
}

double beta_tilde(double delta, double c_const, double alpha) {
  const double ratio = c_const / delta;
  if (!(ratio > std::exp(1.0))) fail(errc::domain_error, "beta_tilde needs C/delta > e");
  return std::log(ratio * std::pow(std::log(ratio), alpha));
}

double complexity_proxy(double delta, double c_const, double alpha, double v_mu, double m) {
  return beta_tilde(delta, c_const, alpha) / v_mu + m;
}

double total_cost(double m, const cost_params& cp, double delta, double c_const, double alpha,
                  double v_mu) {
  if (!(m >= 1)) fail(errc::domain_error, "total_cost needs m >= 1");
  const double r = beta_tilde(delta, c_const, alpha) / v_mu + m;
  return (cp.c1 + cp.c21 / m) * r + 0.5 * cp.c22 / m * r * r;
}

double optimal_batch(const cost_params& cp, double delta, double c_const, double alpha,
                     double v_mu) {
  const double denom = cp.c1 + 0.5 * cp.c22;
  if (!(denom > 0)) fail(errc::degenerate_cost, "c1 + c22/2 must be positive");
  const double r = beta_tilde(delta, c_const, alpha) / v_mu;
  return std::sqrt((cp.c21 * r + 0.5 * cp.c22 * r * r) / denom);
}

}  // namespace bai
