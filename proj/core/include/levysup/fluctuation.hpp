#pragma once

#include <functional>
#include <vector>

#include "levysup/process.hpp"

namespace levysup {

struct RootResult {
  double phi0 = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |psi(phi0)|
};

/// Largest root Phi_X(0) of psi_X. Returns exactly 0 whenever E X_1 <= 0;
/// otherwise brackets by doubling from 1, runs 80 bisection steps and a
/// Newton polish. Throws NumericError if no bracket exists below 1e6.
RootResult phi_zero(const ProcessSpec& spec);

/// P(T_y < inf) = exp(Phi_X(0) y) for y <= 0.
double hitting_probability(const ProcessSpec& spec, double y);

/// Piecewise-cubic CDF on a refined grid with exponential extrapolation past
/// the last node.
class TabulatedCdf {
 public:
  TabulatedCdf() = default;
  TabulatedCdf(std::vector<double> x, std::vector<double> cdf, std::vector<double> density);
  double operator()(double x) const;
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return cdf_; }

 private:
  std::vector<double> x_, cdf_, density_;
};

/// Law of the first passage above 0 restricted to crossings made by a Z jump.
class CrossingLaw {
 public:
  double p_cross_by_z() const { return p_; }
  double phi0() const { return phi0_; }
  /// Density of {tau_0 < inf, X_tau in dx, crossing by Z}; integrates to p_cross_by_z().
  double overshoot_density(double x) const;
  double conditional_density(double x) const { return overshoot_density(x) / p_; }
  /// P(overshoot > x | crossing by Z).
  double conditional_overshoot_tail(double x) const;
  /// Tabulated conditional CDF; increments between nodes are below 1e-4.
  const TabulatedCdf& conditional_cdf() const { return table_; }

 private:
  friend CrossingLaw crossing_law(const ProcessSpec& spec, bool tabulate);
  /// integral_0^inf e^{-Phi v} tail(x + v) dv
  double discounted_tail_integral(double x) const;

  JumpMeasure z_;
  double drift_ = 1.0;
  double phi0_ = 0.0;
  double p_ = 0.0;
  double norm_ = 0.0;  // discounted_tail_integral(0)
  TabulatedCdf table_;
};

CrossingLaw crossing_law(const ProcessSpec& spec, bool tabulate = true);

/// x -> nu_Z(x, inf) / mu_Z.
std::function<double(double)> conditional_overshoot(const JumpMeasure& z);

/// (1 - rho) / (1 - rho f(lam)): Laplace transform of a geometric sum of
/// i.i.d. terms with transform f, P(N >= k) = rho^k.
double geometric_sum_lt(double rho, const std::function<double(double)>& f, double lam);

/// E exp(-lam sup_t Y_t) = -gamma lam / psi_Y(lam) for E Y_1 = gamma < 0.
double sup_laplace_transform(const ProcessSpec& y, double lam);

/// CDF of sup Y for Y = -ct + compound Poisson(rate, Exp(theta)):
/// 1 - rho exp(-theta (1 - rho) x), rho = rate / (theta c).
double exp_model_sup_cdf(double c, double rate, double theta, double x);

}  // namespace levysup
