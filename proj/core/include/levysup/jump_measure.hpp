#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levysup/rng.hpp"

namespace levysup {

/// nu(dx) = rate * theta * exp(-theta x) dx: compound Poisson with Exp(theta) jumps.
struct ExponentialJumps {
  double rate;
  double theta;
};

/// nu(dx) = alpha x^{-1} exp(-beta x) dx (gamma subordinator, infinite activity).
struct GammaJumps {
  double alpha;
  double beta;
};

/// nu(dx) = scale x^{-1-index} dx on (0, upper], index in (0, 1).
struct StableLikeJumps {
  double scale;
  double index;
  double upper;
};

/// nu = mass * delta_location.
struct PointMass {
  double location;
  double mass;
};

using JumpFamily = std::variant<ExponentialJumps, GammaJumps, StableLikeJumps, PointMass>;

/// One family restricted to (cutoff, inf). cutoff = 0 means unrestricted.
struct JumpComponent {
  JumpFamily family;
  double cutoff = 0.0;
};

/// Levy measure on (0, inf) built as a finite sum of parametric families.
/// Immutable after construction; every instance has a finite mean.
class JumpMeasure {
 public:
  JumpMeasure() = default;  // zero measure

  static JumpMeasure exponential(double rate, double theta);
  static JumpMeasure gamma(double alpha, double beta);
  static JumpMeasure stable_like(double scale, double index, double upper);
  static JumpMeasure atom(double location, double mass);
  static JumpMeasure sum(std::span<const JumpMeasure> parts);

  /// nu(x, inf) for x > 0.
  double tail(double x) const;
  /// nu(0, inf); +inf for infinite activity.
  double total_mass() const;
  bool finite_activity() const;
  bool empty() const { return parts_.empty(); }
  /// integral of x nu(dx) = integral of tail(x) dx.
  double mean() const { return mean_; }
  double second_moment() const;
  /// phi(lam) = integral of (1 - e^{-lam x}) nu(dx). Negative lam is accepted
  /// down to -exponential_moment_limit() (exclusive).
  double laplace_exponent(double lam) const;
  /// sup{r : integral of e^{r x} over x > 1 is finite}.
  double exponential_moment_limit() const;

  /// nu restricted to (eps, inf).
  JumpMeasure restricted_above(double eps) const;

  /// Jump size draw; requires 0 < total_mass() < inf.
  double sample_jump(RandomStream& rng) const;
  /// Draw from the integrated-tail law tail(x) dx / mean().
  double sample_integrated_tail(RandomStream& rng) const;

  /// Points where tail() is not smooth (atoms, cutoffs, support ends).
  std::vector<double> kinks() const;
  std::span<const JumpComponent> components() const { return parts_; }
  std::string describe() const;

 private:
  explicit JumpMeasure(std::vector<JumpComponent> parts);

  std::vector<JumpComponent> parts_;
  std::vector<double> mass_cdf_;  // cumulative component masses (finite activity only)
  std::vector<double> mean_cdf_;  // cumulative component means
  double mass_ = 0.0;
  double mean_ = 0.0;
};

// Free-function spellings used throughout the library.
double tail_mass(const JumpMeasure& m, double x);
double mean_jump_rate(const JumpMeasure& m);
double subordinator_exponent(const JumpMeasure& m, double lam);

/// E1(x) = integral_x^inf e^{-u}/u du for x > 0.
double exponential_integral_e1(double x);

}  // namespace levysup
