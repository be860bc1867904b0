#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levysup/process.hpp"

namespace levysup {

/// Empirical CDF with the zero atom tracked separately.
class Ecdf {
 public:
  explicit Ecdf(std::span<const double> values);
  double operator()(double x) const;
  double atom_at_zero() const { return atom_; }
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
  double atom_ = 0.0;
};

enum class Verdict { consistent, rejected };
std::string to_string(Verdict v);

struct TestReport {
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  Verdict verdict = Verdict::consistent;
  std::string basis;
};

/// Atom-aware comparison: a proportion test on the zero atom plus KS on the
/// CDF over (0, inf). Consistent only if both parts are.
struct DistributionReport {
  TestReport atom;
  TestReport ks;
  Verdict verdict = Verdict::consistent;
};

/// c(alpha) = sqrt(-log(alpha / 2) / 2); c(0.05) = 1.358.
double ks_critical_value(double alpha);

/// sup over x >= 0 of |F_a(x) - F_b(x)| for full empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// Two-sample test: KS threshold c(alpha) sqrt((n+m)/(nm)); zero atoms by a
/// pooled two-proportion z-test at the given z.
DistributionReport ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha, double z = 3.0);

/// One-sample test against a CDF that may carry an atom at 0: KS threshold
/// c(alpha)/sqrt(n), atom by an exact two-sided binomial test at level alpha.
DistributionReport ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf, double alpha);

/// |count/n - p0| against z sqrt(p0 (1 - p0) / n).
TestReport proportion_test(std::size_t count, std::size_t n, double p0, double z);

/// Exact two-sided binomial p-value 2 min(P(X <= k), P(X >= k)), capped at 1.
double binomial_two_sided_p(std::size_t k, std::size_t n, double p);

struct LtEstimate {
  double lambda;
  double value;
  double half_width;  // 99% normal-approximation half width
};

std::vector<LtEstimate> empirical_lt(std::span<const double> values, std::span<const double> lambdas);

struct TakacsBin {
  double lo, hi;
  double mean_x;
  std::size_t hits;
  double empirical;  // fraction with sup_{s<=t} X_s > 0
  double predicted;  // 1 - (-mean_x / (c t))^+
  double deviation;
};

struct TakacsReport {
  double t = 0.0;
  double bin_width = 0.0;
  std::size_t reps = 0;
  std::size_t min_hits = 200;
  std::vector<TakacsBin> bins;
  double max_deviation = 0.0;  // over bins with >= min_hits
};

/// Conditional probability that the path went above 0 by time t, binned by X_t.
TakacsReport takacs_check(const ProcessSpec& spec, double t, std::size_t n_reps, double bin_width,
                          std::uint64_t seed, unsigned workers, std::size_t min_hits = 200);

}  // namespace levysup
