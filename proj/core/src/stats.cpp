#include "levysup/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levysup/pathsim.hpp"
#include "levysup/runner.hpp"

namespace levysup {
namespace {

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

std::size_t zeros(const std::vector<double>& sorted) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin());
}

TestReport decide(TestReport r) {
  r.verdict = r.statistic <= r.threshold ? Verdict::consistent : Verdict::rejected;
  return r;
}

}  // namespace

std::string to_string(Verdict v) { return v == Verdict::consistent ? "consistent" : "rejected"; }

Ecdf::Ecdf(std::span<const double> values) : sorted_(sorted_copy(values)) {
  if (sorted_.empty()) throw std::invalid_argument("Ecdf: empty sample");
  atom_ = static_cast<double>(zeros(sorted_)) / static_cast<double>(sorted_.size());
}

double Ecdf::operator()(double x) const {
  const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double ks_critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("ks_critical_value: alpha must lie in (0,1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
  const auto sa = sorted_copy(a), sb = sorted_copy(b);
  const double n = static_cast<double>(sa.size()), m = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j]))
      x = sa[i];
    else
      x = sb[j];
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    if (x >= 0.0) d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

DistributionReport ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha, double z) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty input");
  const std::size_t n = a.size(), m = b.size();
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);

  DistributionReport out;
  out.ks = decide({"ks_two_sample", ks_distance(a, b), ks_critical_value(alpha) * std::sqrt((dn + dm) / (dn * dm)), n, m,
                   Verdict::consistent, "sup_{x>=0}|F_a-F_b| vs c(alpha)sqrt((n+m)/(nm)), alpha=" + std::to_string(alpha)});

  const auto za = static_cast<double>(std::count(a.begin(), a.end(), 0.0));
  const auto zb = static_cast<double>(std::count(b.begin(), b.end(), 0.0));
  const double pooled = (za + zb) / (dn + dm);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / dn + 1.0 / dm));
  out.atom = decide({"atom_two_proportion", std::abs(za / dn - zb / dm), z * se, n, m, Verdict::consistent,
                     "pooled two-proportion z-test on P(value=0), z=" + std::to_string(z)});
  out.verdict = (out.ks.verdict == Verdict::consistent && out.atom.verdict == Verdict::consistent) ? Verdict::consistent
                                                                                                  : Verdict::rejected;
  return out;
}

double binomial_two_sided_p(std::size_t k, std::size_t n, double p) {
  if (k > n) throw std::domain_error("binomial_two_sided_p: k > n");
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  const double ln_n1 = std::lgamma(static_cast<double>(n) + 1.0);
  std::vector<double> logpmf(n + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= n; ++j) {
    const double dj = static_cast<double>(j);
    logpmf[j] = ln_n1 - std::lgamma(dj + 1.0) - std::lgamma(static_cast<double>(n - j) + 1.0) + dj * lp +
                static_cast<double>(n - j) * lq;
    top = std::max(top, logpmf[j]);
  }
  double total = 0.0, lower = 0.0, upper = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double w = std::exp(logpmf[j] - top);
    total += w;
    if (j <= k) lower += w;
    if (j >= k) upper += w;
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

DistributionReport ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf, double alpha) {
  if (a.empty()) throw std::invalid_argument("ks_one_sample: empty input");
  const auto s = sorted_copy(a);
  const double n = static_cast<double>(s.size());
  const std::size_t k0 = zeros(s);
  const double atom = cdf(0.0);

  double d = std::abs(static_cast<double>(k0) / n - atom);
  double previous = atom;
  for (std::size_t i = k0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    if (f < previous - 1e-12 || f > 1.0 + 1e-12 || f < -1e-12)
      throw std::domain_error("ks_one_sample: cdf is not a nondecreasing probability on the sample points");
    previous = f;
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
  }

  DistributionReport out;
  out.ks = decide({"ks_one_sample", d, ks_critical_value(alpha) / std::sqrt(n), s.size(), 0, Verdict::consistent,
                   "sup_{x>=0}|F_n-F| vs c(alpha)/sqrt(n), alpha=" + std::to_string(alpha)});
  const double pvalue = binomial_two_sided_p(k0, s.size(), atom);
  out.atom = {"atom_binomial_exact", pvalue, alpha, s.size(), 0,
              pvalue >= alpha ? Verdict::consistent : Verdict::rejected,
              "exact two-sided binomial p-value of #zeros vs F(0)=" + std::to_string(atom) + "; consistent iff p >= alpha"};
  out.verdict = (out.ks.verdict == Verdict::consistent && out.atom.verdict == Verdict::consistent) ? Verdict::consistent
                                                                                                  : Verdict::rejected;
  return out;
}

TestReport proportion_test(std::size_t count, std::size_t n, double p0, double z) {
  if (n == 0 || count > n) throw std::domain_error("proportion_test: need 0 <= count <= n, n > 0");
  const double dn = static_cast<double>(n);
  return decide({"proportion", std::abs(static_cast<double>(count) / dn - p0), z * std::sqrt(p0 * (1.0 - p0) / dn), n, 0,
                 Verdict::consistent, "|k/n - p0| vs z sqrt(p0(1-p0)/n), p0=" + std::to_string(p0) + ", z=" + std::to_string(z)});
}

std::vector<LtEstimate> empirical_lt(std::span<const double> values, std::span<const double> lambdas) {
  if (values.empty()) throw std::invalid_argument("empirical_lt: empty sample");
  const double n = static_cast<double>(values.size());
  std::vector<LtEstimate> out;
  for (double lam : lambdas) {
    if (lam == 0.0) {
      out.push_back({lam, 1.0, 0.0});
      continue;
    }
    double sum = 0.0, sq = 0.0;
    for (double v : values) {
      if (v < 0.0) throw std::domain_error("empirical_lt: values must be nonnegative");
      const double e = std::exp(-lam * v);
      sum += e;
      sq += e * e;
    }
    const double mean = sum / n;
    const double var = values.size() > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1.0)) : 0.0;
    out.push_back({lam, mean, 2.58 * std::sqrt(var / n)});
  }
  return out;
}

TakacsReport takacs_check(const ProcessSpec& spec, double t, std::size_t n_reps, double bin_width, std::uint64_t seed,
                          unsigned workers, std::size_t min_hits) {
  if (!(t > 0.0)) throw std::domain_error("takacs_check: t must be positive");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw std::domain_error("takacs_check: degenerate binning");
  struct Endpoint {
    double x = 0.0;
    bool crossed = false;
  };
  const auto ends = run_replications<Endpoint>(n_reps, workers, [&](std::size_t i) {
    RandomStream rng(seed, i, static_cast<std::uint32_t>(StreamDomain::horizon));
    const auto rec = simulate_horizon(spec, t, rng);
    return Endpoint{rec.terminal_value, rec.sup_positive()};
  });

  const double ct = spec.drift() * t;
  std::vector<double> xs;
  for (const auto& e : ends) xs.push_back(e.x);
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  if (lo_it == xs.end()) throw std::domain_error("takacs_check: no replications");
  const auto first = static_cast<long long>(std::floor(*lo_it / bin_width));
  const auto last = static_cast<long long>(std::floor(*hi_it / bin_width));
  if (last - first > 10'000'000) throw std::domain_error("takacs_check: degenerate binning (too many bins)");

  struct Acc {
    std::size_t hits = 0, crossed = 0;
    double sum_x = 0.0;
  };
  std::vector<Acc> acc(static_cast<std::size_t>(last - first + 1));
  for (const auto& e : ends) {
    auto& a = acc[static_cast<std::size_t>(static_cast<long long>(std::floor(e.x / bin_width)) - first)];
    ++a.hits;
    a.crossed += e.crossed ? 1 : 0;
    a.sum_x += e.x;
  }

  TakacsReport rep{t, bin_width, n_reps, min_hits, {}, 0.0};
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (acc[k].hits == 0) continue;
    const double lo = static_cast<double>(first + static_cast<long long>(k)) * bin_width;
    const double mean_x = acc[k].sum_x / static_cast<double>(acc[k].hits);
    const double predicted = std::clamp(1.0 - std::max(0.0, -mean_x / ct), 0.0, 1.0);
    const double empirical = static_cast<double>(acc[k].crossed) / static_cast<double>(acc[k].hits);
    TakacsBin bin{lo, lo + bin_width, mean_x, acc[k].hits, empirical, predicted, std::abs(empirical - predicted)};
    if (bin.hits >= min_hits) rep.max_deviation = std::max(rep.max_deviation, bin.deviation);
    rep.bins.push_back(bin);
  }
  return rep;
}

}  // namespace levysup
