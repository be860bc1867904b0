#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "levysup/process.hpp"
#include "levysup/rng.hpp"

namespace levysup {

/// exact marks draws that involve no stopping rule (the geometric sampler).
enum class OutcomeKind { sigma_hit, truncated_gap, event_cap, exact };
enum class JumpSource { z, c };

std::string to_string(OutcomeKind kind);
std::string to_string(JumpSource source);

struct SimOutcome {
  double value = 0.0;
  OutcomeKind kind = OutcomeKind::truncated_gap;
  std::uint64_t events_used = 0;
  std::optional<double> sigma_time;
};

/// Finite-horizon stand-in for "never": stop once t > min_time_T and the
/// distance to the relevant level exceeds gap_K. bias_bound bounds the
/// probability that the stopped path would still have changed the result.
struct TruncationPolicy {
  double gap_K = 40.0;
  double min_time_T = 0.0;
  std::uint64_t event_cap = 10'000'000;
  double bias_bound = 0.0;
};

/// Adjustment coefficient R > 0 with log E exp(R X_1) = 0, if one exists.
std::optional<double> adjustment_coefficient(const ProcessSpec& spec);

/// Upper bound on P(sup_t X_t >= gap) for E X_1 < 0: Lundberg exp(-R gap)
/// when R exists, otherwise Markov E[sup X] / gap with
/// E[sup X] = (a + integral x^2 nu(dx)) / (2 |E X_1|).
double overshoot_bias_bound(const ProcessSpec& spec, double gap);

/// Policy for the sigma and first-passage samplers. For E X_1 >= 0 the gap
/// rule is disabled (gap_K = inf) because the stopping time is a.s. finite.
TruncationPolicy sigma_policy(const ProcessSpec& spec, double gap_K = 40.0, double min_time_T = 0.0,
                              std::uint64_t event_cap = 10'000'000);
/// Policy for the hitting sampler: bias exp(-Phi gap_K); disabled when Phi = 0.
TruncationPolicy hitting_policy(const ProcessSpec& spec, double gap_K = 40.0, double min_time_T = 0.0,
                                std::uint64_t event_cap = 10'000'000);

/// Runs X until the first C jump that strictly exceeds the gap sup - X and
/// returns the supremum just before it.
SimOutcome simulate_until_sigma(const ProcessSpec& spec, const TruncationPolicy& policy, RandomStream& rng);

/// sup_t Y_t as a geometric number of integrated-tail overshoots; never looks at C.
double sample_sup_geometric(const ProcessSpec& y, RandomStream& rng);

struct FirstPassage {
  bool finite = false;
  double overshoot = 0.0;   // X at the crossing
  double undershoot = 0.0;  // X just before the crossing (<= 0)
  JumpSource source = JumpSource::z;
  OutcomeKind kind = OutcomeKind::truncated_gap;  // sigma_hit is reused for "crossed"
  std::uint64_t events_used = 0;
};

FirstPassage first_passage_zero(const ProcessSpec& spec, const TruncationPolicy& policy, RandomStream& rng);

struct HittingOutcome {
  bool finite = false;
  OutcomeKind kind = OutcomeKind::truncated_gap;
  std::uint64_t events_used = 0;
};

/// Whether X reaches y < 0. The level is hit by the drift between jumps.
HittingOutcome sample_hitting_time(const ProcessSpec& spec, double y, const TruncationPolicy& policy,
                                   RandomStream& rng);

struct PathEvent {
  double time;
  double jump;
  JumpSource source;
  double value_before;
  double value_after;
  double running_sup_before;
};

struct PathRecord {
  double drift = 0.0;
  double t_end = 0.0;
  std::vector<PathEvent> events;
  double terminal_value = 0.0;
  double running_sup = 0.0;
  bool sup_positive() const { return running_sup > 0.0; }
};

PathRecord simulate_horizon(const ProcessSpec& spec, double t_end, RandomStream& rng,
                            std::uint64_t event_cap = 10'000'000);

/// Replication values with their provenance.
struct SampleSet {
  std::string model;
  std::uint64_t seed = 0;
  TruncationPolicy policy;
  std::vector<double> values;
  std::vector<OutcomeKind> kinds;
  std::vector<std::uint64_t> events;
  std::vector<double> sigma_times;  // NaN when absent

  std::array<std::size_t, 4> counts() const;
  std::size_t count(OutcomeKind kind) const { return counts()[static_cast<std::size_t>(kind)]; }
  /// Values with event-capped replications removed.
  std::vector<double> usable_values() const;
};

/// Random-stream domains keep the two sides of a comparison independent.
enum class StreamDomain : std::uint32_t { sigma = 1, geometric = 2, first_passage = 3, hitting = 4, horizon = 5, target = 6 };

SampleSet sample_sigma_suprema(const ProcessSpec& spec, const TruncationPolicy& policy, std::size_t reps,
                               std::uint64_t seed, unsigned workers);
SampleSet sample_geometric_suprema(const ProcessSpec& y, std::size_t reps, std::uint64_t seed, unsigned workers,
                                   StreamDomain domain = StreamDomain::geometric);

}  // namespace levysup
