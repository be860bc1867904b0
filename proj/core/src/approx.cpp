#include "levysup/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levysup {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_sorted(const JumpPath& p, const char* who) {
  if (p.times.size() != p.sizes.size()) throw std::invalid_argument(std::string(who) + ": times/sizes length mismatch");
  if (!std::is_sorted(p.times.begin(), p.times.end()))
    throw std::invalid_argument(std::string(who) + ": jump times must be sorted");
}

bool same_sigma(double a, double b) { return a == b; }  // +inf == +inf included

std::optional<unsigned> first_stable_level(const std::vector<PathwiseLevel>& levels, double sigma, double sup,
                                           double tol) {
  std::optional<unsigned> n0;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    if (!same_sigma(it->sigma_n, sigma) || !(std::abs(it->sup_n - sup) < tol)) break;
    n0 = it->n;
  }
  return n0;
}

}  // namespace

TruncationLevel::TruncationLevel(unsigned n) : n_(n) {
  if (n == 0) throw std::invalid_argument("TruncationLevel: n must be positive");
}

LevyTriplet triplet_of(const ProcessSpec& y) { return {y.diffusion(), -y.drift() + y.z().mean(), y.z()}; }

double triplet_exponent(const LevyTriplet& t, double lam) {
  if (lam < 0.0) throw std::domain_error("triplet_exponent: lam must be nonnegative");
  return 0.5 * t.diffusion * lam * lam - t.gamma * lam + lam * t.nu.mean() - t.nu.laplace_exponent(lam);
}

JumpMeasure truncate_subordinator(const JumpMeasure& m, TruncationLevel level) {
  return m.restricted_above(level.threshold());
}

CPApproximation compound_poisson_approx(const LevyTriplet& source, unsigned n, std::optional<double> x_n) {
  if (source.diffusion < 0.0) throw std::domain_error("compound_poisson_approx: diffusion must be nonnegative");
  if (!(source.gamma < 0.0)) throw std::domain_error("compound_poisson_approx: gamma must be negative");
  const double x = x_n.value_or(1.0 / std::sqrt(static_cast<double>(TruncationLevel(n).n())));
  if (!(x > 0.0 && x <= 1.0)) throw std::domain_error("compound_poisson_approx: x_n must lie in (0, 1]");

  JumpMeasure nu_n = truncate_subordinator(source.nu, TruncationLevel(n));
  if (source.diffusion > 0.0) {
    const JumpMeasure parts[] = {nu_n, JumpMeasure::atom(x, source.diffusion / (x * x))};
    nu_n = JumpMeasure::sum(parts);
  }
  const double drift = -source.gamma + nu_n.mean();
  ProcessSpec spec(drift, nu_n, std::nullopt, 0.0, "cp_approx_n" + std::to_string(n));
  return {source, n, x, std::move(nu_n), std::move(spec)};
}

std::vector<ExponentGap> exponent_convergence_report(const LevyTriplet& source,
                                                     std::span<const CPApproximation> approximants,
                                                     std::span<const double> lambda_grid) {
  std::vector<ExponentGap> out;
  for (const auto& ap : approximants) {
    ExponentGap g{ap.n, 0.0, 0.0};
    for (double lam : lambda_grid) {
      const double d = std::abs(psi_dual(ap.spec, lam) - triplet_exponent(source, lam));
      if (d > g.sup_gap) g = {ap.n, d, lam};
    }
    out.push_back(g);
  }
  return out;
}

std::vector<ExponentGap> exponent_convergence_report(const ProcessSpec& source,
                                                     std::span<const ProcessSpec> approximants,
                                                     std::span<const double> lambda_grid) {
  std::vector<ExponentGap> out;
  for (std::size_t i = 0; i < approximants.size(); ++i) {
    ExponentGap g{i, 0.0, 0.0};
    for (double lam : lambda_grid) {
      const double d = std::abs(psi_dual(approximants[i], lam) - psi_dual(source, lam));
      if (d > g.sup_gap) g = {i, d, lam};
    }
    out.push_back(g);
  }
  return out;
}

bool gaps_nonincreasing(std::span<const ExponentGap> gaps, double slack) {
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (gaps[i].sup_gap > gaps[i - 1].sup_gap + slack) return false;
  return true;
}

bool gaps_strictly_decreasing(std::span<const ExponentGap> gaps) {
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (!(gaps[i].sup_gap < gaps[i - 1].sup_gap)) return false;
  return true;
}

double JumpPath::value(double t) const {
  double v = 0.0;
  for (std::size_t k = 0; k < times.size() && times[k] <= t; ++k) v += sizes[k];
  return v;
}

JumpPath JumpPath::truncated(double threshold) const {
  JumpPath out{{}, {}, horizon};
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (sizes[k] > threshold) {
      out.times.push_back(times[k]);
      out.sizes.push_back(sizes[k]);
    }
  }
  return out;
}

DriftJumpPath DriftJumpPath::compensated_truncation(double threshold, double dropped_mean) const {
  return {drift - dropped_mean, jumps.truncated(threshold)};
}

std::pair<DriftJumpPath, JumpPath> split_record(const PathRecord& rec) {
  DriftJumpPath y{rec.drift, {{}, {}, rec.t_end}};
  JumpPath c{{}, {}, rec.t_end};
  for (const auto& e : rec.events) {
    JumpPath& dst = e.source == JumpSource::z ? y.jumps : c;
    dst.times.push_back(e.time);
    dst.sizes.push_back(e.jump);
  }
  return {std::move(y), std::move(c)};
}

double sup_distance(const DriftJumpPath& a, const DriftJumpPath& b) {
  require_sorted(a.jumps, "sup_distance");
  require_sorted(b.jumps, "sup_distance");
  const double horizon = std::max(a.jumps.horizon, b.jumps.horizon);
  const double slope = b.drift - a.drift;  // d(t) = a(t) - b(t)
  double jump_diff = 0.0, best = 0.0;
  std::size_t i = 0, j = 0;
  while (true) {
    const double ta = i < a.jumps.times.size() ? a.jumps.times[i] : kInf;
    const double tb = j < b.jumps.times.size() ? b.jumps.times[j] : kInf;
    const double s = std::min(ta, tb);
    if (!(s <= horizon)) break;
    best = std::max(best, std::abs(slope * s + jump_diff));
    while (i < a.jumps.times.size() && a.jumps.times[i] == s) jump_diff += a.jumps.sizes[i++];
    while (j < b.jumps.times.size() && b.jumps.times[j] == s) jump_diff -= b.jumps.sizes[j++];
    best = std::max(best, std::abs(slope * s + jump_diff));
  }
  return std::max(best, std::abs(slope * horizon + jump_diff));
}

SigmaReplay replay_sigma(const DriftJumpPath& y, const JumpPath& c) {
  require_sorted(y.jumps, "replay_sigma");
  require_sorted(c, "replay_sigma");
  const double horizon = std::max(y.jumps.horizon, c.horizon);
  SigmaReplay r;
  double t = 0.0, x = 0.0, sup = 0.0, c_acc = 0.0;
  std::size_t i = 0, j = 0;
  while (true) {
    const double ty = i < y.jumps.times.size() ? y.jumps.times[i] : kInf;
    const double tc = j < c.times.size() ? c.times[j] : kInf;
    const bool from_y = ty <= tc;
    const double s = from_y ? ty : tc;
    if (!(s <= horizon)) break;
    const double x_minus = x - y.drift * (s - t);
    if (from_y) {
      x = x_minus + y.jumps.sizes[i++];
    } else {
      const double dc = c.sizes[j++];
      const double gap = sup - x_minus;
      r.margin = std::min(r.margin, std::abs(dc - gap));
      if (dc > gap) {
        r.sigma = s;
        r.sup_before = sup;
        r.c_before = c_acc;
        return r;
      }
      c_acc += dc;
      x = x_minus + dc;
    }
    sup = std::max(sup, x);
    t = s;
  }
  r.sup_before = sup;
  r.c_before = c_acc;
  return r;
}

Hypotheses check_hypotheses(const DriftJumpPath& y, const JumpPath& c) {
  Hypotheses h;
  std::size_t i = 0, j = 0;
  while (i < y.jumps.times.size() && j < c.times.size()) {
    if (y.jumps.times[i] == c.times[j]) {
      h.disjoint_jump_times = false;
      break;
    }
    if (y.jumps.times[i] < c.times[j])
      ++i;
    else
      ++j;
  }
  h.overshoot_margin = replay_sigma(y, c).margin;
  return h;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::passed: return "passed";
    case CheckStatus::failed: return "failed";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

PathwiseReport pathwise_sigma_convergence_check(const DriftJumpPath& y, std::span<const ApproxPath> y_n,
                                                const JumpPath& c, double tol) {
  PathwiseReport rep;
  rep.scheme = "approx_cpp";
  rep.hypotheses = check_hypotheses(y, c);
  const SigmaReplay ref = replay_sigma(y, c);
  rep.sigma = ref.sigma;
  rep.sup = ref.sup_before;
  for (const auto& ap : y_n) {
    const SigmaReplay r = replay_sigma(ap.y_n, c);
    PathwiseLevel lv{ap.n, r.sigma, r.sup_before, std::abs(r.sup_before - ref.sup_before), sup_distance(ap.y_n, y)};
    if (same_sigma(lv.sigma_n, ref.sigma) && lv.sup_error > lv.bound + tol) rep.bounds_hold = false;
    rep.levels.push_back(lv);
  }
  rep.n0 = first_stable_level(rep.levels, rep.sigma, rep.sup, tol);

  if (!rep.hypotheses.satisfied(tol)) {
    rep.status = CheckStatus::skipped;
    rep.detail = rep.hypotheses.disjoint_jump_times ? "strict-overshoot margin below tolerance"
                                                    : "simultaneous jumps of y and c";
  } else if (!rep.n0) {
    rep.status = CheckStatus::failed;
    rep.detail = "sigma_n or sup_n differs from the reference at the last level";
  } else if (!rep.bounds_hold) {
    rep.status = CheckStatus::failed;
    rep.detail = "sup error exceeds sup|y_n - y| at a level with sigma_n = sigma";
  } else {
    rep.status = CheckStatus::passed;
  }
  return rep;
}

PathwiseReport pathwise_truncation_check(const DriftJumpPath& y, const JumpPath& c, std::span<const unsigned> levels,
                                         double tol, bool sigma_zero, double sigma_zero_eps) {
  PathwiseReport rep;
  rep.scheme = "truncated_c";
  rep.case_two = sigma_zero;
  rep.hypotheses = check_hypotheses(y, c);
  const SigmaReplay ref = replay_sigma(y, c);
  rep.sigma = sigma_zero ? 0.0 : ref.sigma;
  rep.sup = sigma_zero ? 0.0 : ref.sup_before;
  for (unsigned n : levels) {
    const JumpPath c_n = c.truncated(TruncationLevel(n).threshold());
    const SigmaReplay r = replay_sigma(y, c_n);
    // on [0, sigma) we have 0 <= c - c_n <= c(sigma-) - c_n(sigma-)
    PathwiseLevel lv{n, r.sigma, r.sup_before, std::abs(r.sup_before - rep.sup), ref.c_before - r.c_before};
    if (!sigma_zero && same_sigma(lv.sigma_n, ref.sigma) && lv.sup_error > lv.bound + tol) rep.bounds_hold = false;
    rep.levels.push_back(lv);
  }

  if (!rep.hypotheses.satisfied(tol)) {
    rep.status = CheckStatus::skipped;
    rep.detail = rep.hypotheses.disjoint_jump_times ? "strict-overshoot margin below tolerance"
                                                    : "simultaneous jumps of y and c";
    return rep;
  }
  if (sigma_zero) {
    bool ok = !rep.levels.empty() && rep.levels.back().sigma_n <= sigma_zero_eps;
    for (std::size_t k = rep.levels.size() / 2; k < rep.levels.size(); ++k)
      if (rep.levels[k].sup_n > tol) ok = false;
    rep.status = ok ? CheckStatus::passed : CheckStatus::failed;
    if (!ok) rep.detail = "limsup sigma_n = 0 or limsup x_n(sigma_n-) <= 0 not observed";
    return rep;
  }
  rep.n0 = first_stable_level(rep.levels, rep.sigma, rep.sup, tol);
  if (!rep.n0) {
    rep.status = CheckStatus::failed;
    rep.detail = "sigma_n or sup_n differs from the reference at the last level";
  } else if (!rep.bounds_hold) {
    rep.status = CheckStatus::failed;
    rep.detail = "sup error exceeds c(sigma-) - c_n(sigma-) at a level with sigma_n = sigma";
  } else {
    rep.status = CheckStatus::passed;
  }
  return rep;
}

}  // namespace levysup
