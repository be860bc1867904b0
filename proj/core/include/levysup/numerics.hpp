#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace levysup {

/// Raised when a numerical routine cannot reach its tolerance (divergent
/// integral, failed bracketing, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace numerics {

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-14;
  int max_intervals = 4000;
};

struct Integral {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Breakpoints
/// inside (a, b) seed the initial partition, which is how callers hand over
/// known discontinuities (atoms of a jump measure).
Integral integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol = {},
                   std::span<const double> breakpoints = {});

/// Integral of f over [x, inf) via the substitution u = x - log(s), s in (0, 1].
/// Well suited to integrands with exponential decay.
Integral integrate_to_infinity(const std::function<double(double)>& f, double x, Tolerance tol = {},
                               std::span<const double> breakpoints = {});

/// Plain bisection on a sign-changing bracket; returns the midpoint of the final bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi, int steps);

}  // namespace numerics
}  // namespace levysup
