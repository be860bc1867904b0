#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levysup/jump_measure.hpp"
#include "levysup/pathsim.hpp"
#include "levysup/process.hpp"

namespace levysup {

/// Small-jump cutoff 1/n.
class TruncationLevel {
 public:
  explicit TruncationLevel(unsigned n);
  unsigned n() const { return n_; }
  double threshold() const { return 1.0 / static_cast<double>(n_); }

 private:
  unsigned n_;
};

/// Spectrally positive triplet (a, gamma, nu) with centering c(x) = 1, so
/// gamma = E Y_1.
struct LevyTriplet {
  double diffusion = 0.0;
  double gamma = 0.0;
  JumpMeasure nu;
};

/// Triplet of Y = -ct + Z (+ sqrt(a) B); C is ignored.
LevyTriplet triplet_of(const ProcessSpec& y);

/// log E exp(-lam Y_1) = a lam^2/2 - gamma lam + integral (e^{-lam x} - 1 + lam x) nu(dx).
double triplet_exponent(const LevyTriplet& t, double lam);

/// nu restricted to (1/n, inf).
JumpMeasure truncate_subordinator(const JumpMeasure& m, TruncationLevel level);

struct CPApproximation {
  LevyTriplet source;
  unsigned n = 1;
  double x_n = 1.0;
  JumpMeasure nu_n;  // nu on (1/n, inf) plus a/x_n^2 at x_n
  ProcessSpec spec;  // -c_n t + compound Poisson with measure nu_n
};

/// Finite-activity process with the same mean gamma whose exponent tends to
/// the source's. x_n defaults to n^{-1/2}.
CPApproximation compound_poisson_approx(const LevyTriplet& source, unsigned n,
                                        std::optional<double> x_n = std::nullopt);

struct ExponentGap {
  std::size_t level;
  double sup_gap;
  double at_lambda;
};

/// sup over the grid of |psi_n - psi| for each approximant (level = n).
std::vector<ExponentGap> exponent_convergence_report(const LevyTriplet& source,
                                                     std::span<const CPApproximation> approximants,
                                                     std::span<const double> lambda_grid);
/// Same for plain specs; level is the position in the list.
std::vector<ExponentGap> exponent_convergence_report(const ProcessSpec& source,
                                                     std::span<const ProcessSpec> approximants,
                                                     std::span<const double> lambda_grid);
bool gaps_nonincreasing(std::span<const ExponentGap> gaps, double slack = 1e-12);
bool gaps_strictly_decreasing(std::span<const ExponentGap> gaps);

// Replay of recorded paths.

/// Pure jump path on [0, horizon]: sum of sizes[k] over times[k] <= t.
struct JumpPath {
  std::vector<double> times;
  std::vector<double> sizes;
  double horizon = 0.0;

  double value(double t) const;
  /// Keeps jumps strictly larger than threshold.
  JumpPath truncated(double threshold) const;
};

/// y(t) = -drift t + jumps(t).
struct DriftJumpPath {
  double drift = 0.0;
  JumpPath jumps;

  double value(double t) const { return -drift * t + jumps.value(t); }
  /// Drops jumps <= threshold and lowers the drift by their expected rate so
  /// that the mean slope is unchanged.
  DriftJumpPath compensated_truncation(double threshold, double dropped_mean) const;
};

/// Splits a recorded X = Y + C path into its y and c parts.
std::pair<DriftJumpPath, JumpPath> split_record(const PathRecord& rec);

/// sup over [0, horizon] of |a - b|.
double sup_distance(const DriftJumpPath& a, const DriftJumpPath& b);

/// sigma and x(sigma-) for x = y + c on [0, horizon]. sigma is +inf when no C
/// jump in the horizon strictly exceeds the gap; sup_before is then the
/// supremum over the whole horizon.
struct SigmaReplay {
  double sigma = std::numeric_limits<double>::infinity();
  double sup_before = 0.0;
  double c_before = 0.0;  // c(sigma-)
  /// min |dc - gap| over the C jumps examined (strict-overshoot margin).
  double margin = std::numeric_limits<double>::infinity();
  bool finite() const { return sigma < std::numeric_limits<double>::infinity(); }
};

SigmaReplay replay_sigma(const DriftJumpPath& y, const JumpPath& c);

struct Hypotheses {
  bool disjoint_jump_times = true;
  double overshoot_margin = std::numeric_limits<double>::infinity();
  bool satisfied(double tol) const { return disjoint_jump_times && overshoot_margin > tol; }
};

Hypotheses check_hypotheses(const DriftJumpPath& y, const JumpPath& c);

struct PathwiseLevel {
  unsigned n = 0;
  double sigma_n = 0.0;
  double sup_n = 0.0;
  double sup_error = 0.0;
  /// Deterministic bound on sup_error when sigma_n = sigma.
  double bound = 0.0;
};

enum class CheckStatus { passed, failed, skipped };
std::string to_string(CheckStatus s);

struct PathwiseReport {
  std::string scheme;
  Hypotheses hypotheses;
  double sigma = 0.0;
  double sup = 0.0;
  std::vector<PathwiseLevel> levels;
  /// First level from which sigma_n = sigma and |sup_n - sup| < tol hold at
  /// every later level.
  std::optional<unsigned> n0;
  bool bounds_hold = true;
  bool case_two = false;
  CheckStatus status = CheckStatus::skipped;
  std::string detail;
};

struct ApproxPath {
  unsigned n;
  DriftJumpPath y_n;
};

/// Approximating y by y_n with c fixed.
PathwiseReport pathwise_sigma_convergence_check(const DriftJumpPath& y, std::span<const ApproxPath> y_n,
                                                const JumpPath& c, double tol = 1e-9);

/// Truncating c to its jumps above 1/n with y fixed. When sigma_zero is set
/// the reference is taken to have sigma = 0 and only limsup sigma_n = 0 and
/// limsup x_n(sigma_n-) <= 0 are asserted: the last level must have
/// sigma_n <= sigma_zero_eps and no level past the first half may report
/// x_n(sigma_n-) > tol.
PathwiseReport pathwise_truncation_check(const DriftJumpPath& y, const JumpPath& c, std::span<const unsigned> levels,
                                         double tol = 1e-9, bool sigma_zero = false, double sigma_zero_eps = 1e-3);

struct ConvergenceRow {
  unsigned n = 0;
  double sigma_n = std::numeric_limits<double>::quiet_NaN();
  double sup_n = std::numeric_limits<double>::quiet_NaN();
  double ks_distance = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace levysup
