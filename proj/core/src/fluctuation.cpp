#include "levysup/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levysup/numerics.hpp"

namespace levysup {
namespace {

constexpr double kMaxCdfStep = 1e-4;

}  // namespace

RootResult phi_zero(const ProcessSpec& spec) {
  if (spec.mean_drift() <= 0.0) return {};

  auto psi = [&](double lam) { return psi_dual(spec, lam); };
  RootResult r;
  double lo = 0.0, hi = 1.0;
  while (!(psi(hi) > 0.0)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw NumericError("phi_zero: psi stays nonpositive on [0, 1e6]; cannot bracket root");
  }
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  for (; r.iterations < 80; ++r.iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (psi(mid) > 0.0 ? hi : lo) = mid;
  }
  double root = 0.5 * (lo + hi);
  // Newton polish with a symmetric difference derivative
  const double h = 1e-6 * std::max(1.0, root);
  const double slope = (psi(root + h) - psi(root - h)) / (2.0 * h);
  if (slope > 0.0) {
    const double candidate = root - psi(root) / slope;
    if (candidate > 0.0 && std::abs(psi(candidate)) < std::abs(psi(root))) root = candidate;
  }
  r.phi0 = root;
  r.residual = std::abs(psi(root));
  return r;
}

double hitting_probability(const ProcessSpec& spec, double y) {
  if (y > 0.0) throw std::domain_error("hitting_probability: level y must be <= 0");
  return std::exp(phi_zero(spec).phi0 * y);
}

TabulatedCdf::TabulatedCdf(std::vector<double> x, std::vector<double> cdf, std::vector<double> density)
    : x_(std::move(x)), cdf_(std::move(cdf)), density_(std::move(density)) {
  if (x_.size() < 2 || x_.size() != cdf_.size() || x_.size() != density_.size())
    throw std::invalid_argument("TabulatedCdf: need matching node arrays of size >= 2");
}

double TabulatedCdf::operator()(double x) const {
  if (x_.empty()) throw std::logic_error("TabulatedCdf: empty table");
  if (x < x_.front()) return 0.0;
  if (x >= x_.back()) {
    const double rest = 1.0 - cdf_.back();
    if (rest <= 0.0 || density_.back() <= 0.0) return 1.0;
    return 1.0 - rest * std::exp(-(x - x_.back()) * density_.back() / rest);
  }
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  // cubic Hermite with exact end slopes, clamped to stay monotone
  const double t2 = t * t, t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * cdf_[i] + (t3 - 2 * t2 + t) * h * density_[i] +
                   (-2 * t3 + 3 * t2) * cdf_[i + 1] + (t3 - t2) * h * density_[i + 1];
  return std::clamp(v, cdf_[i], cdf_[i + 1]);
}

double CrossingLaw::discounted_tail_integral(double x) const {
  std::vector<double> shifted;
  for (double k : z_.kinks())
    if (k > x) shifted.push_back(k - x);
  auto f = [&](double v) { return std::exp(-phi0_ * v) * z_.tail(x + v); };
  if (x > 0.0) return numerics::integrate_to_infinity(f, 0.0, {.rel = 1e-12, .abs = 1e-16}, shifted).value;
  auto g = [&](double v) { return v > 0.0 ? f(v) : 0.0; };
  return numerics::integrate_to_infinity(g, 0.0, {.rel = 1e-12, .abs = 1e-16, .max_intervals = 20000}, shifted).value;
}

double CrossingLaw::overshoot_density(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (phi0_ == 0.0) return z_.tail(x) / drift_;
  return (z_.tail(x) - phi0_ * discounted_tail_integral(x)) / drift_;
}

double CrossingLaw::conditional_overshoot_tail(double x) const {
  if (x <= 0.0) return 1.0;
  return discounted_tail_integral(x) / norm_;
}

CrossingLaw crossing_law(const ProcessSpec& spec, bool tabulate) {
  if (spec.diffusion() != 0.0) throw std::domain_error("crossing_law: requires a = 0 (drift plus jumps)");
  if (!(spec.z().mean() > 0.0)) throw std::domain_error("crossing_law: Z measure is zero");
  CrossingLaw law;
  law.z_ = spec.z();
  law.drift_ = spec.drift();
  law.phi0_ = phi_zero(spec).phi0;
  if (law.phi0_ == 0.0) {
    law.norm_ = spec.z().mean();
  } else {
    law.norm_ = law.discounted_tail_integral(0.0);
  }
  if (!std::isfinite(law.norm_)) throw NumericError("crossing_law: divergent tail integral");
  law.p_ = law.norm_ / law.drift_;
  if (!tabulate) return law;

  auto cdf = [&](double x) { return 1.0 - law.conditional_overshoot_tail(x); };
  std::vector<double> xs{0.0};
  for (double k : law.z_.kinks()) xs.push_back(k);
  double hi = 1.0;
  while (1.0 - cdf(hi) > 1e-12 && hi < 1e6) hi *= 2.0;
  for (double x = 1.0; x <= hi; x *= 2.0) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  while (xs.back() > hi) xs.pop_back();

  std::vector<double> fs;
  for (double x : xs) fs.push_back(cdf(x));
  for (std::size_t i = 0; i + 1 < xs.size();) {
    if (fs[i + 1] - fs[i] > kMaxCdfStep && xs[i + 1] - xs[i] > 1e-12) {
      const double mid = 0.5 * (xs[i] + xs[i + 1]);
      xs.insert(xs.begin() + static_cast<std::ptrdiff_t>(i) + 1, mid);
      fs.insert(fs.begin() + static_cast<std::ptrdiff_t>(i) + 1, cdf(mid));
    } else {
      ++i;
    }
  }
  std::vector<double> dens;
  for (double x : xs) dens.push_back(x > 0.0 ? law.conditional_density(x) : law.conditional_density(1e-300));
  law.table_ = TabulatedCdf(std::move(xs), std::move(fs), std::move(dens));
  return law;
}

std::function<double(double)> conditional_overshoot(const JumpMeasure& z) {
  const double mu = z.mean();
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::domain_error("conditional_overshoot: need 0 < mu_Z < inf");
  return [z, mu](double x) { return x > 0.0 ? z.tail(x) / mu : 0.0; };
}

double geometric_sum_lt(double rho, const std::function<double(double)>& f, double lam) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("geometric_sum_lt: rho must lie in (0,1)");
  return (1.0 - rho) / (1.0 - rho * f(lam));
}

double sup_laplace_transform(const ProcessSpec& y, double lam) {
  if (y.has_c()) throw std::domain_error("sup_laplace_transform: expects Y without a C component");
  const double gamma = y.mean_drift();
  if (!(gamma < 0.0)) throw std::domain_error("sup_laplace_transform: requires E Y_1 < 0");
  if (!(lam > 0.0)) throw std::domain_error("sup_laplace_transform: lam must be positive");
  return -gamma * lam / psi_dual(y, lam);
}

double exp_model_sup_cdf(double c, double rate, double theta, double x) {
  const double rho = rate / (theta * c);
  if (!(rho < 1.0)) throw std::domain_error("exp_model_sup_cdf: requires mu_Z < c");
  if (x < 0.0) return 0.0;
  return 1.0 - rho * std::exp(-theta * (1.0 - rho) * x);
}

}  // namespace levysup
