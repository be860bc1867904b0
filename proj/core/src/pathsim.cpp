#include "levysup/pathsim.hpp"

#include <cmath>
#include <stdexcept>

#include "levysup/fluctuation.hpp"
#include "levysup/numerics.hpp"
#include "levysup/runner.hpp"

namespace levysup {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_simulable(const ProcessSpec& spec, const char* who) {
  if (!spec.compound_poisson())
    throw std::domain_error(std::string(who) + ": needs a = 0 and finite jump measures (use the approx module)");
}

void require_policy(const TruncationPolicy& policy, const char* who) {
  if (!(policy.gap_K > 0.0)) throw std::domain_error(std::string(who) + ": gap_K must be positive");
  if (policy.event_cap == 0) throw std::domain_error(std::string(who) + ": event_cap must be positive");
}

/// Merged Poisson clocks of the Z and C streams.
class JumpClock {
 public:
  explicit JumpClock(const ProcessSpec& spec)
      : z_(spec.z()), c_(spec.has_c() ? &*spec.c() : nullptr), rate_z_(z_.total_mass()),
        rate_(rate_z_ + (c_ ? c_->total_mass() : 0.0)) {}

  bool silent() const { return rate_ <= 0.0; }
  double wait(RandomStream& rng) const { return rng.exponential(rate_); }
  JumpSource source(RandomStream& rng) const {
    return rng.uniform() * rate_ < rate_z_ ? JumpSource::z : JumpSource::c;
  }
  double jump(JumpSource s, RandomStream& rng) const {
    return s == JumpSource::z ? z_.sample_jump(rng) : c_->sample_jump(rng);
  }

 private:
  const JumpMeasure& z_;
  const JumpMeasure* c_;
  double rate_z_;
  double rate_;
};

}  // namespace

std::string to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::sigma_hit: return "sigma_hit";
    case OutcomeKind::truncated_gap: return "truncated_gap";
    case OutcomeKind::event_cap: return "event_cap";
    case OutcomeKind::exact: return "exact";
  }
  return "unknown";
}

std::string to_string(JumpSource source) { return source == JumpSource::z ? "Z" : "C"; }

std::optional<double> adjustment_coefficient(const ProcessSpec& spec) {
  if (!(spec.mean_drift() < 0.0)) return std::nullopt;
  const double limit = exponential_moment_limit(spec);
  auto kappa = [&](double r) { return cumulant(spec, r); };
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  if (std::isfinite(limit)) {
    for (int k = 1; k <= 60 && !bracketed; ++k) {
      const double r = limit * (1.0 - std::ldexp(1.0, -k));
      if (kappa(r) > 0.0) {
        hi = r;
        bracketed = true;
      } else {
        lo = r;
      }
    }
  } else {
    for (double r = 1.0; r <= 1e6 && !bracketed; r *= 2.0) {
      if (kappa(r) > 0.0) {
        hi = r;
        bracketed = true;
      } else {
        lo = r;
      }
    }
  }
  if (!bracketed) return std::nullopt;
  return numerics::bisect(kappa, lo, hi, 200);
}

double overshoot_bias_bound(const ProcessSpec& spec, double gap) {
  if (!(spec.mean_drift() < 0.0)) return 1.0;
  if (const auto r = adjustment_coefficient(spec)) return std::exp(-*r * gap);
  double second = spec.diffusion() + spec.z().second_moment();
  if (spec.has_c()) second += spec.c()->second_moment();
  const double mean_sup = second / (2.0 * -spec.mean_drift());
  return std::min(1.0, mean_sup / gap);
}

TruncationPolicy sigma_policy(const ProcessSpec& spec, double gap_K, double min_time_T, std::uint64_t event_cap) {
  TruncationPolicy p{gap_K, min_time_T, event_cap, 0.0};
  if (spec.mean_drift() < 0.0) {
    p.bias_bound = overshoot_bias_bound(spec, gap_K);
  } else {
    p.gap_K = kInf;
  }
  return p;
}

TruncationPolicy hitting_policy(const ProcessSpec& spec, double gap_K, double min_time_T, std::uint64_t event_cap) {
  TruncationPolicy p{gap_K, min_time_T, event_cap, 0.0};
  if (spec.mean_drift() > 0.0) {
    p.bias_bound = hitting_probability(spec, -gap_K);
  } else {
    p.gap_K = kInf;
  }
  return p;
}

SimOutcome simulate_until_sigma(const ProcessSpec& spec, const TruncationPolicy& policy, RandomStream& rng) {
  require_simulable(spec, "simulate_until_sigma");
  require_policy(policy, "simulate_until_sigma");
  const JumpClock clock(spec);
  if (clock.silent()) return {0.0, OutcomeKind::truncated_gap, 0, std::nullopt};

  const double c = spec.drift();
  double t = 0.0, x = 0.0, sup = 0.0;
  std::uint64_t events = 0;
  for (;;) {
    const double dt = clock.wait(rng);
    t += dt;
    x -= c * dt;
    const double gap = sup - x;
    if (t > policy.min_time_T && gap > policy.gap_K) return {sup, OutcomeKind::truncated_gap, events, std::nullopt};
    const JumpSource source = clock.source(rng);
    const double jump = clock.jump(source, rng);
    ++events;
    if (source == JumpSource::c && jump > gap) return {sup, OutcomeKind::sigma_hit, events, t};
    x += jump;
    if (x > sup) sup = x;
    if (events >= policy.event_cap) return {sup, OutcomeKind::event_cap, events, std::nullopt};
  }
}

double sample_sup_geometric(const ProcessSpec& y, RandomStream& rng) {
  if (y.has_c()) throw std::domain_error("sample_sup_geometric: expects Y without a C component");
  if (y.diffusion() != 0.0) throw std::domain_error("sample_sup_geometric: requires a = 0");
  const double rho = y.z().mean() / y.drift();
  if (!(rho < 1.0)) throw std::domain_error("sample_sup_geometric: requires mu_Z < c");
  const std::uint64_t n = rng.geometric(rho);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) sum += y.z().sample_integrated_tail(rng);
  return sum;
}

FirstPassage first_passage_zero(const ProcessSpec& spec, const TruncationPolicy& policy, RandomStream& rng) {
  require_simulable(spec, "first_passage_zero");
  require_policy(policy, "first_passage_zero");
  const JumpClock clock(spec);
  FirstPassage out;
  if (clock.silent()) return out;

  const double c = spec.drift();
  double t = 0.0, x = 0.0;
  for (;;) {
    const double dt = clock.wait(rng);
    t += dt;
    x -= c * dt;
    if (t > policy.min_time_T && -x > policy.gap_K) return out;
    const JumpSource source = clock.source(rng);
    const double jump = clock.jump(source, rng);
    ++out.events_used;
    if (x + jump > 0.0) {
      out.finite = true;
      out.overshoot = x + jump;
      out.undershoot = x;
      out.source = source;
      out.kind = OutcomeKind::sigma_hit;
      return out;
    }
    x += jump;
    if (out.events_used >= policy.event_cap) {
      out.kind = OutcomeKind::event_cap;
      return out;
    }
  }
}

HittingOutcome sample_hitting_time(const ProcessSpec& spec, double y, const TruncationPolicy& policy,
                                   RandomStream& rng) {
  if (!(y < 0.0)) throw std::domain_error("sample_hitting_time: level y must be negative");
  require_simulable(spec, "sample_hitting_time");
  require_policy(policy, "sample_hitting_time");
  const JumpClock clock(spec);
  if (clock.silent()) return {true, OutcomeKind::sigma_hit, 0};

  const double c = spec.drift();
  double t = 0.0, x = 0.0;
  HittingOutcome out;
  for (;;) {
    if (t > policy.min_time_T && x - y > policy.gap_K) return out;
    const double dt = clock.wait(rng);
    if (x - c * dt <= y) {
      out.finite = true;
      out.kind = OutcomeKind::sigma_hit;
      return out;
    }
    t += dt;
    x -= c * dt;
    const JumpSource source = clock.source(rng);
    x += clock.jump(source, rng);
    if (++out.events_used >= policy.event_cap) {
      out.kind = OutcomeKind::event_cap;
      return out;
    }
  }
}

PathRecord simulate_horizon(const ProcessSpec& spec, double t_end, RandomStream& rng, std::uint64_t event_cap) {
  if (!(t_end > 0.0)) throw std::domain_error("simulate_horizon: t_end must be positive");
  require_simulable(spec, "simulate_horizon");
  const JumpClock clock(spec);
  PathRecord rec;
  rec.drift = spec.drift();
  rec.t_end = t_end;
  const double c = spec.drift();
  double t = 0.0, x = 0.0, sup = 0.0;
  while (!clock.silent()) {
    const double dt = clock.wait(rng);
    if (t + dt > t_end) break;
    t += dt;
    x -= c * dt;
    const JumpSource source = clock.source(rng);
    const double jump = clock.jump(source, rng);
    rec.events.push_back({t, jump, source, x, x + jump, sup});
    x += jump;
    if (x > sup) sup = x;
    if (rec.events.size() > event_cap) throw std::runtime_error("simulate_horizon: event cap exceeded");
  }
  rec.terminal_value = x - c * (t_end - t);
  rec.running_sup = sup;
  return rec;
}

std::array<std::size_t, 4> SampleSet::counts() const {
  std::array<std::size_t, 4> out{};
  for (auto k : kinds) ++out[static_cast<std::size_t>(k)];
  return out;
}

std::vector<double> SampleSet::usable_values() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (kinds.empty() || kinds[i] != OutcomeKind::event_cap) out.push_back(values[i]);
  return out;
}

SampleSet sample_sigma_suprema(const ProcessSpec& spec, const TruncationPolicy& policy, std::size_t reps,
                               std::uint64_t seed, unsigned workers) {
  require_simulable(spec, "sample_sigma_suprema");
  auto outcomes = run_replications<SimOutcome>(reps, workers, [&](std::size_t i) {
    RandomStream rng(seed, i, static_cast<std::uint32_t>(StreamDomain::sigma));
    return simulate_until_sigma(spec, policy, rng);
  });
  SampleSet s{spec.name(), seed, policy, {}, {}, {}, {}};
  s.values.reserve(reps);
  for (const auto& o : outcomes) {
    s.values.push_back(o.value);
    s.kinds.push_back(o.kind);
    s.events.push_back(o.events_used);
    s.sigma_times.push_back(o.sigma_time.value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  return s;
}

SampleSet sample_geometric_suprema(const ProcessSpec& y, std::size_t reps, std::uint64_t seed, unsigned workers,
                                   StreamDomain domain) {
  const ProcessSpec ycore = y.without_c();
  auto values = run_replications<double>(reps, workers, [&](std::size_t i) {
    RandomStream rng(seed, i, static_cast<std::uint32_t>(domain));
    return sample_sup_geometric(ycore, rng);
  });
  SampleSet s{ycore.name(), seed, {}, std::move(values), {}, {}, {}};
  s.kinds.assign(s.values.size(), OutcomeKind::exact);
  s.events.assign(s.values.size(), 0);
  s.sigma_times.assign(s.values.size(), std::numeric_limits<double>::quiet_NaN());
  return s;
}

}  // namespace levysup
