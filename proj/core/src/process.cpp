#include "levysup/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levysup/numerics.hpp"

namespace levysup {

ProcessSpec::ProcessSpec(double drift, JumpMeasure z, std::optional<JumpMeasure> c, double diffusion, std::string name)
    : drift_(drift), z_(std::move(z)), c_(std::move(c)), diffusion_(diffusion), name_(std::move(name)) {
  if (!(drift > 0.0) || !std::isfinite(drift)) throw std::invalid_argument("process spec: drift rate c must be positive");
  if (!(diffusion >= 0.0) || !std::isfinite(diffusion)) throw std::invalid_argument("process spec: diffusion must be >= 0");
  mean_drift_ = -drift_ + z_.mean() + (c_ ? c_->mean() : 0.0);
}

bool ProcessSpec::compound_poisson() const {
  return diffusion_ == 0.0 && z_.finite_activity() && (!c_ || c_->finite_activity());
}

ProcessSpec ProcessSpec::without_c() const { return ProcessSpec(drift_, z_, std::nullopt, diffusion_, name_); }

ProcessSpec ProcessSpec::with_c(JumpMeasure c) const { return ProcessSpec(drift_, z_, std::move(c), diffusion_, name_); }

ProcessSpec ProcessSpec::renamed(std::string name) const { return ProcessSpec(drift_, z_, c_, diffusion_, std::move(name)); }

double psi_dual(const ProcessSpec& spec, double lam) {
  double v = 0.5 * spec.diffusion() * lam * lam + spec.drift() * lam - spec.z().laplace_exponent(lam);
  if (spec.has_c()) v -= spec.c()->laplace_exponent(lam);
  return v;
}

double mean_drift(const ProcessSpec& spec) { return spec.mean_drift(); }

double exponential_moment_limit(const ProcessSpec& spec) {
  double r = spec.z().exponential_moment_limit();
  if (spec.has_c()) r = std::min(r, spec.c()->exponential_moment_limit());
  return r;
}

double cumulant(const ProcessSpec& spec, double r) { return psi_dual(spec, -r); }

SigmaPositivity sigma_positivity_check(const ProcessSpec& spec) {
  if (!spec.has_c()) return {true, 0.0};
  const auto& c = *spec.c();
  // integral_0^1 x nu(dx) = integral_0^1 (tail(x) - tail(1)) dx
  const double tail_one = c.tail(1.0);
  const auto kinks = c.kinks();
  const double value =
      numerics::integrate([&](double x) { return x > 0.0 ? c.tail(x) - tail_one : 0.0; }, 0.0, 1.0,
                          {.rel = 1e-10, .abs = 1e-14, .max_intervals = 20000}, kinks)
          .value;
  return {std::isfinite(value), value};
}

double ExponentView::min_second_difference(std::span<const double> grid) const {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double h0 = grid[i] - grid[i - 1], h1 = grid[i + 1] - grid[i];
    const double d0 = (psi(grid[i]) - psi(grid[i - 1])) / h0;
    const double d1 = (psi(grid[i + 1]) - psi(grid[i])) / h1;
    worst = std::min(worst, 2.0 * (d1 - d0) / (h0 + h1));
  }
  return worst;
}

}  // namespace levysup
