#include "bai/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bai {

namespace {

constexpr double kWeightSumTol = 1e-12;

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

// Adaptive Simpson on [a, b]; integrand must be smooth.
template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F f, double a, double b, double tol = 1e-11) {
  const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

discrete_dist discrete_dist::from_points(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.size() != weights.size()) fail(errc::domain_error, "atoms/weights size mismatch");
  if (atoms.empty()) fail(errc::domain_error, "empty distribution");
  std::vector<std::size_t> idx(atoms.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });

  discrete_dist d;
  d.atoms_.reserve(atoms.size());
  d.weights_.reserve(atoms.size());
  double wsum = 0;
  for (std::size_t k : idx) {
    const double x = atoms[k], w = weights[k];
    if (!(w > 0)) fail(errc::domain_error, "weights must be positive");
    if (!std::isfinite(x)) fail(errc::domain_error, "atoms must be finite");
    wsum += w;
    if (!d.atoms_.empty() && d.atoms_.back() == x) {
      d.weights_.back() += w;
    } else {
      d.atoms_.push_back(x);
      d.weights_.push_back(w);
    }
  }
  double mean = 0;
  for (std::size_t i = 0; i < d.atoms_.size(); ++i) {
    d.weights_[i] /= wsum;
    mean += d.weights_[i] * d.atoms_[i];
  }
  d.mean_ = mean;
  return d;
}

discrete_dist discrete_dist::from_samples(std::span<const double> samples) {
  if (samples.empty()) fail(errc::domain_error, "empty sample set");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  std::vector<double> atoms, weights;
  for (double x : xs) {
    if (!atoms.empty() && atoms.back() == x) {
      weights.back() += 1.0;
    } else {
      atoms.push_back(x);
      weights.push_back(1.0);
    }
  }
  return from_points(std::move(atoms), std::move(weights));
}

double discrete_dist::moment_f(const moment_class& mc) const {
  double s = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) s += weights_[i] * mc.f(atoms_[i]);
  return s;
}

double discrete_dist::abs_dev() const {
  double s = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) s += weights_[i] * std::fabs(atoms_[i] - mean_);
  return s;
}

discrete_dist discrete_dist::reflected() const {
  discrete_dist d;
  d.atoms_.assign(atoms_.rbegin(), atoms_.rend());
  for (double& x : d.atoms_) x = -x;
  d.weights_.assign(weights_.rbegin(), weights_.rend());
  d.mean_ = -mean_;
  return d;
}

discrete_dist discrete_dist::mirrored(double c) const {
  discrete_dist d;
  d.atoms_.assign(atoms_.rbegin(), atoms_.rend());
  for (double& x : d.atoms_) x = 2.0 * c - x;
  d.weights_.assign(weights_.rbegin(), weights_.rend());
  d.mean_ = 2.0 * c - mean_;
  return d;
}

double membership_margin(const discrete_dist& dist, const moment_class& mc) {
  return mc.bound() - dist.moment_f(mc);
}

discrete_dist empirical_push(const discrete_dist& dist, std::span<const double> samples,
                             std::int64_t prior_count) {
  if (prior_count < 0) fail(errc::domain_error, "prior_count must be nonnegative");
  if (prior_count == 0) return discrete_dist::from_samples(samples);
  if (samples.empty()) return dist;

  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());

  const auto& a = dist.atoms();
  const auto& w = dist.weights();
  std::vector<double> atoms, counts;
  atoms.reserve(a.size() + xs.size());
  counts.reserve(a.size() + xs.size());
  std::size_t i = 0, j = 0;
  auto push = [&](double x, double c) {
    if (!atoms.empty() && atoms.back() == x) {
      counts.back() += c;
    } else {
      atoms.push_back(x);
      counts.push_back(c);
    }
  };
  while (i < a.size() || j < xs.size()) {
    if (j == xs.size() || (i < a.size() && a[i] <= xs[j])) {
      push(a[i], std::round(w[i] * static_cast<double>(prior_count)));
      ++i;
    } else {
      push(xs[j], 1.0);
      ++j;
    }
  }
  return discrete_dist::from_points(std::move(atoms), std::move(counts));
}

double kl_discrete(const discrete_dist& p, const discrete_dist& q) {
  const auto& pa = p.atoms();
  const auto& pw = p.weights();
  const auto& qa = q.atoms();
  const auto& qw = q.weights();
  double s = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    while (j < qa.size() && qa[j] < pa[i]) ++j;
    if (j == qa.size() || qa[j] != pa[i]) return std::numeric_limits<double>::infinity();
    s += pw[i] * std::log(pw[i] / qw[j]);
  }
  return s;
}

witness_result right_dense_witness(const discrete_dist& eta, double a, double b, double y_cut) {
  if (!(a > 0)) fail(errc::domain_error, "witness needs a > 0");
  double below = 0;
  for (std::size_t i = 0; i < eta.size(); ++i)
    if (eta.atoms()[i] <= y_cut) below += eta.weights()[i];
  const double tail = 1.0 - below;
  if (!(tail > 0)) fail(errc::no_tail_mass, "eta has no mass above y_cut");

  const double gamma = 1.0 - std::exp(-a);
  const double beta = 1.0 + gamma * below / tail;
  std::vector<double> atoms = eta.atoms();
  std::vector<double> weights = eta.weights();
  for (std::size_t i = 0; i < atoms.size(); ++i)
    weights[i] *= (atoms[i] <= y_cut) ? (1.0 - gamma) : beta;

  witness_result r;
  r.kappa = discrete_dist::from_points(std::move(atoms), std::move(weights));
  r.gamma = gamma;
  r.beta = beta;
  r.kl_bound = below * a;  // -eta(y_cut) log(1-gamma)
  r.mean_target_met = r.kappa.mean() >= b;
  return r;
}

// ---------------------------------------------------------------------------

arm_spec::arm_spec(variant v) : v_(std::move(v)) {
  std::visit(
      [](const auto& arm) {
        using T = std::decay_t<decltype(arm)>;
        if constexpr (std::is_same_v<T, pareto_arm>) {
          if (!(arm.alpha > 1)) fail(errc::domain_error, "pareto needs alpha > 1 for a finite mean");
          if (!(arm.beta > 0)) fail(errc::domain_error, "pareto needs beta > 0");
        } else if constexpr (std::is_same_v<T, bernoulli_arm>) {
          if (!(arm.q >= 0 && arm.q <= 1)) fail(errc::domain_error, "bernoulli q outside [0,1]");
          if (!(arm.lo < arm.hi)) fail(errc::domain_error, "bernoulli needs lo < hi");
        } else if constexpr (std::is_same_v<T, uniform_discrete_arm>) {
          if (arm.atoms.empty()) fail(errc::domain_error, "uniform_discrete needs atoms");
        } else if constexpr (std::is_same_v<T, trunc_normal_arm>) {
          if (!(arm.sigma > 0)) fail(errc::domain_error, "trunc_normal needs sigma > 0");
          if (!(arm.lo < arm.hi)) fail(errc::domain_error, "trunc_normal needs lo < hi");
        }
      },
      v_);
}

namespace {

// E[g(X)] for a truncated normal, by adaptive Simpson over [lo, hi].
template <class G>
double tnorm_expect(const trunc_normal_arm& t, G g) {
  const double za = (t.lo - t.mu0) / t.sigma, zb = (t.hi - t.mu0) / t.sigma;
  const double z = norm_cdf(zb) - norm_cdf(za);
  auto f = [&](double x) {
    const double u = (x - t.mu0) / t.sigma;
    return g(x) * norm_pdf(u) / (t.sigma * z);
  };
  return integrate(f, t.lo, t.hi);
}

double pareto_exf_tail(const pareto_arm& p, const moment_class& mc, double cut);

// E[f(X) ; X > cut] for Pareto support [beta, inf), cut >= beta.
double pareto_exf_tail(const pareto_arm& p, const moment_class& mc, double cut) {
  const double a = p.alpha, b = p.beta;
  switch (mc.kind()) {
    case f_kind::power: {
      const double q = mc.p();
      if (!(a > q)) fail(errc::domain_error, "pareto alpha must exceed the power exponent");
      // alpha beta^alpha int_cut^inf x^{q-alpha-1} dx
      return a * std::pow(b, a) * std::pow(cut, q - a) / (a - q);
    }
    case f_kind::xlogx: {
      const double c = std::max(cut, 1.0);  // f = 0 below 1
      // alpha beta^alpha int_c^inf x^{-alpha} log x dx
      return a * std::pow(b, a) * std::pow(c, 1.0 - a) *
             (std::log(c) / (a - 1.0) + 1.0 / ((a - 1.0) * (a - 1.0)));
    }
  }
  return 0;
}

}  // namespace

double arm_spec::mean() const {
  return std::visit(
      [](const auto& arm) -> double {
        using T = std::decay_t<decltype(arm)>;
        if constexpr (std::is_same_v<T, pareto_arm>) {
          return arm.alpha * arm.beta / (arm.alpha - 1.0);
        } else if constexpr (std::is_same_v<T, bernoulli_arm>) {
          return arm.lo + arm.q * (arm.hi - arm.lo);
        } else if constexpr (std::is_same_v<T, uniform_discrete_arm>) {
          double s = 0;
          for (double x : arm.atoms) s += x;
          return s / static_cast<double>(arm.atoms.size());
        } else if constexpr (std::is_same_v<T, point_mass_arm>) {
          return arm.v;
        } else {
          const double za = (arm.lo - arm.mu0) / arm.sigma, zb = (arm.hi - arm.mu0) / arm.sigma;
          const double z = norm_cdf(zb) - norm_cdf(za);
          return arm.mu0 + arm.sigma * (norm_pdf(za) - norm_pdf(zb)) / z;
        }
      },
      v_);
}

double arm_spec::moment_f(const moment_class& mc) const {
  return std::visit(
      [&](const auto& arm) -> double {
        using T = std::decay_t<decltype(arm)>;
        if constexpr (std::is_same_v<T, pareto_arm>) {
          return pareto_exf_tail(arm, mc, arm.beta);
        } else if constexpr (std::is_same_v<T, trunc_normal_arm>) {
          return tnorm_expect(arm, [&](double x) { return mc.f(x); });
        } else {
          return discretize(0).moment_f(mc);
        }
      },
      v_);
}

double arm_spec::abs_dev() const {
  const double m = mean();
  return std::visit(
      [&](const auto& arm) -> double {
        using T = std::decay_t<decltype(arm)>;
        if constexpr (std::is_same_v<T, pareto_arm>) {
          // 2 E(X - m)^+ = 2 beta^alpha m^{1-alpha} / (alpha - 1)
          return 2.0 * std::pow(arm.beta, arm.alpha) * std::pow(m, 1.0 - arm.alpha) /
                 (arm.alpha - 1.0);
        } else if constexpr (std::is_same_v<T, trunc_normal_arm>) {
          return tnorm_expect(arm, [&](double x) { return std::fabs(x - m); });
        } else {
          return discretize(0).abs_dev();
        }
      },
      v_);
}

double arm_spec::abs_f_dev(const moment_class& mc) const {
  const double b = mc.bound();
  return std::visit(
      [&](const auto& arm) -> double {
        using T = std::decay_t<decltype(arm)>;
        if constexpr (std::is_same_v<T, pareto_arm>) {
          const double ef = pareto_exf_tail(arm, mc, arm.beta);
          const double xb = mc.f_inv(b);
          if (xb <= arm.beta) return ef - b;  // f(X) >= B on the whole support
          // E|B - f| = (B - Ef) + 2 E(f - B)^+
          const double sf = std::pow(arm.beta / xb, arm.alpha);  // P(X > xb)
          const double tail_pos = pareto_exf_tail(arm, mc, xb) - b * sf;
          return (b - ef) + 2.0 * tail_pos;
        } else if constexpr (std::is_same_v<T, trunc_normal_arm>) {
          return tnorm_expect(arm, [&](double x) { return std::fabs(b - mc.f(x)); });
        } else {
          const discrete_dist d = discretize(0);
          double s = 0;
          for (std::size_t i = 0; i < d.size(); ++i)
            s += d.weights()[i] * std::fabs(b - mc.f(d.atoms()[i]));
          return s;
        }
      },
      v_);
}

double arm_spec::sample(rng_stream& rng) const {
  return std::visit(
      [&](const auto& arm) -> double {
        using T = std::decay_t<decltype(arm)>;
        if constexpr (std::is_same_v<T, pareto_arm>) {
          return arm.beta * std::pow(rng.next_unit(), -1.0 / arm.alpha);
        } else if constexpr (std::is_same_v<T, bernoulli_arm>) {
          return rng.next_unit() <= arm.q ? arm.hi : arm.lo;
        } else if constexpr (std::is_same_v<T, uniform_discrete_arm>) {
          auto k = static_cast<std::size_t>(rng.next_unit() * static_cast<double>(arm.atoms.size()));
          if (k >= arm.atoms.size()) k = arm.atoms.size() - 1;
          return arm.atoms[k];
        } else if constexpr (std::is_same_v<T, point_mass_arm>) {
          return arm.v;
        } else {
          for (;;) {  // Box-Muller with rejection outside [lo, hi]
            const double u1 = rng.next_unit(), u2 = rng.next_unit();
            const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            const double x = arm.mu0 + arm.sigma * z;
            if (x >= arm.lo && x <= arm.hi) return x;
          }
        }
      },
      v_);
}

std::vector<double> arm_spec::sample_n(rng_stream& rng, std::size_t n) const {
  std::vector<double> out(n);
  for (double& x : out) x = sample(rng);
  return out;
}

discrete_dist arm_spec::discretize(std::size_t n) const {
  return std::visit(
      [&](const auto& arm) -> discrete_dist {
        using T = std::decay_t<decltype(arm)>;
        if constexpr (std::is_same_v<T, pareto_arm>) {
          if (n < 2) fail(errc::domain_error, "discretize needs n >= 2 for continuous arms");
          std::vector<double> atoms(n), w(n, 1.0);
          for (std::size_t i = 0; i < n; ++i) {
            const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            atoms[i] = arm.beta * std::pow(1.0 - q, -1.0 / arm.alpha);
          }
          return discrete_dist::from_points(std::move(atoms), std::move(w));
        } else if constexpr (std::is_same_v<T, bernoulli_arm>) {
          if (arm.q == 0) return discrete_dist::point_mass(arm.lo);
          if (arm.q == 1) return discrete_dist::point_mass(arm.hi);
          return discrete_dist::from_points({arm.lo, arm.hi}, {1.0 - arm.q, arm.q});
        } else if constexpr (std::is_same_v<T, uniform_discrete_arm>) {
          return discrete_dist::from_points(arm.atoms,
                                            std::vector<double>(arm.atoms.size(), 1.0));
        } else if constexpr (std::is_same_v<T, point_mass_arm>) {
          return discrete_dist::point_mass(arm.v);
        } else {
          if (n < 2) fail(errc::domain_error, "discretize needs n >= 2 for continuous arms");
          const double za = (arm.lo - arm.mu0) / arm.sigma, zb = (arm.hi - arm.mu0) / arm.sigma;
          const double ca = norm_cdf(za), cb = norm_cdf(zb);
          std::vector<double> atoms(n), w(n, 1.0);
          for (std::size_t i = 0; i < n; ++i) {
            const double q = ca + (cb - ca) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            double lo = arm.lo, hi = arm.hi;
            for (int it = 0; it < 80; ++it) {
              const double mid = 0.5 * (lo + hi);
              (norm_cdf((mid - arm.mu0) / arm.sigma) < q ? lo : hi) = mid;
            }
            atoms[i] = 0.5 * (lo + hi);
          }
          return discrete_dist::from_points(std::move(atoms), std::move(w));
        }
      },
      v_);
}

std::vector<double> sample(const arm_spec& arm, rng_stream& rng, std::size_t n) {
  return arm.sample_n(rng, n);
}

}  // namespace bai
