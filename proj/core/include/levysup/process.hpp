#pragma once

#include <optional>
#include <span>
#include <string>

#include "levysup/jump_measure.hpp"

namespace levysup {

/// X_t = -c t + Z_t + C_t (+ sqrt(a) B_t). The Brownian part is only
/// meaningful for specs handed to the approximation module.
class ProcessSpec {
 public:
  ProcessSpec(double drift, JumpMeasure z, std::optional<JumpMeasure> c = std::nullopt, double diffusion = 0.0,
              std::string name = {});

  double drift() const { return drift_; }
  const JumpMeasure& z() const { return z_; }
  const std::optional<JumpMeasure>& c() const { return c_; }
  bool has_c() const { return c_.has_value(); }
  double diffusion() const { return diffusion_; }
  const std::string& name() const { return name_; }
  /// E X_1 = -c + mu_Z + mu_C.
  double mean_drift() const { return mean_drift_; }
  /// Both jump measures have finite mass and there is no Brownian part.
  bool compound_poisson() const;

  /// The Y = -ct + Z part (C dropped).
  ProcessSpec without_c() const;
  ProcessSpec with_c(JumpMeasure c) const;
  ProcessSpec renamed(std::string name) const;

 private:
  double drift_;
  JumpMeasure z_;
  std::optional<JumpMeasure> c_;
  double diffusion_;
  std::string name_;
  double mean_drift_;
};

/// psi_X(lam) = a lam^2/2 + c lam - phi_Z(lam) - phi_C(lam), the Laplace
/// exponent of the dual process -X. Negative lam gives the cumulant of X.
double psi_dual(const ProcessSpec& spec, double lam);
double mean_drift(const ProcessSpec& spec);

/// log E exp(r X_1) = psi_dual(spec, -r); finite for r below
/// exponential_moment_limit(spec).
double cumulant(const ProcessSpec& spec, double r);
double exponential_moment_limit(const ProcessSpec& spec);

struct SigmaPositivity {
  bool positive;
  /// integral_0^1 x nu_C(dx)
  double integral;
};

/// For spectrally positive Y the renewal function of the descending ladder
/// height is V(x) = x, so sigma > 0 a.s. iff integral_0^1 x nu_C(dx) < inf.
SigmaPositivity sigma_positivity_check(const ProcessSpec& spec);

/// Exponent evaluation for one spec. Stateless, so safe to share across threads.
class ExponentView {
 public:
  explicit ExponentView(const ProcessSpec& spec) : spec_(spec) {}
  double phi_z(double lam) const { return spec_.z().laplace_exponent(lam); }
  double phi_c(double lam) const { return spec_.has_c() ? spec_.c()->laplace_exponent(lam) : 0.0; }
  double psi(double lam) const { return psi_dual(spec_, lam); }
  /// Smallest second divided difference of psi over an increasing grid.
  double min_second_difference(std::span<const double> grid) const;

 private:
  const ProcessSpec& spec_;
};

}  // namespace levysup
