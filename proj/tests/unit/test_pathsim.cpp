#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "levysup/fluctuation.hpp"
#include "levysup/model_config.hpp"
#include "levysup/pathsim.hpp"
#include "levysup/runner.hpp"
#include "levysup/stats.hpp"

namespace {

using levysup::JumpSource;
using levysup::OutcomeKind;
using levysup::ProcessSpec;
using levysup::RandomStream;

ProcessSpec model(const char* name) { return *levysup::preset(name); }

TEST(SimulateHorizon, TerminalMeanMatchesDrift) {
  const auto a = model("A");
  constexpr std::size_t n = 20'000;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng(11, i);
    sum += levysup::simulate_horizon(a, 2.0, rng).terminal_value;
  }
  // Var X_2 = 2 (E J_Z^2 rate_Z + E J_C^2 rate_C) = 2 (0.5 * 2 + 0.3 * 0.5)
  const double sd = std::sqrt(2.0 * 1.15 / n);
  EXPECT_NEAR(sum / n, -0.7, 4.0 * sd);
}

TEST(SimulateHorizon, RecordIsConsistent) {
  const auto a = model("A");
  for (std::uint64_t i = 0; i < 200; ++i) {
    RandomStream rng(3, i);
    const auto rec = levysup::simulate_horizon(a, 5.0, rng);
    double prev_t = 0.0, prev_x = 0.0, sup = 0.0;
    for (const auto& e : rec.events) {
      ASSERT_GE(e.time, prev_t);
      ASSERT_LE(e.time, 5.0);
      ASSERT_NEAR(e.value_before, prev_x - rec.drift * (e.time - prev_t), 1e-12);
      ASSERT_NEAR(e.value_after, e.value_before + e.jump, 1e-12);
      ASSERT_GT(e.jump, 0.0);
      ASSERT_EQ(e.running_sup_before, sup);
      sup = std::max(sup, e.value_after);
      prev_t = e.time;
      prev_x = e.value_after;
    }
    EXPECT_EQ(rec.running_sup, sup);
    EXPECT_NEAR(rec.terminal_value, prev_x - rec.drift * (5.0 - prev_t), 1e-12);
  }
}

TEST(SimulateHorizon, Errors) {
  RandomStream rng(1, 0);
  EXPECT_THROW(levysup::simulate_horizon(model("A"), 0.0, rng), std::domain_error);
  EXPECT_THROW(levysup::simulate_horizon(model("brownianY"), 1.0, rng), std::domain_error);
  EXPECT_THROW(levysup::simulate_horizon(model("gammaC"), 1.0, rng), std::domain_error);
}

TEST(Policies, GapRuleOnlyWhenNeeded) {
  const auto a = levysup::sigma_policy(model("A"));
  EXPECT_EQ(a.gap_K, 40.0);
  EXPECT_GT(a.bias_bound, 0.0);
  EXPECT_LT(a.bias_bound, 1e-6);
  const auto r = levysup::adjustment_coefficient(model("A"));
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(a.bias_bound, std::exp(-*r * 40.0), 1e-15);

  EXPECT_TRUE(std::isinf(levysup::sigma_policy(model("B")).gap_K));
  EXPECT_TRUE(std::isinf(levysup::sigma_policy(model("C")).gap_K));
  EXPECT_TRUE(std::isinf(levysup::hitting_policy(model("A")).gap_K));

  const auto h = levysup::hitting_policy(model("B"));
  EXPECT_NEAR(h.bias_bound, std::exp(-0.5 * 40.0), 1e-20);
}

TEST(SigmaSampler, ZeroStatesAndErrors) {
  RandomStream rng(1, 0);
  levysup::TruncationPolicy bad;
  bad.gap_K = 0.0;
  EXPECT_THROW(levysup::simulate_until_sigma(model("A"), bad, rng), std::domain_error);
  EXPECT_THROW(levysup::simulate_until_sigma(model("brownianY"), levysup::TruncationPolicy{}, rng),
               std::domain_error);
}

TEST(SigmaSampler, SupBeforeSigmaNeverExceedsGapAtSigma) {
  const auto a = model("A");
  const auto policy = levysup::sigma_policy(a);
  for (std::uint64_t i = 0; i < 2000; ++i) {
    RandomStream rng(5, i);
    const auto out = levysup::simulate_until_sigma(a, policy, rng);
    ASSERT_GE(out.value, 0.0);
    ASSERT_EQ(out.sigma_time.has_value(), out.kind == OutcomeKind::sigma_hit);
    ASSERT_GE(out.events_used, out.kind == OutcomeKind::sigma_hit ? 1u : 0u);
  }
}

TEST(SigmaSampler, DeterministicAcrossWorkerCounts) {
  const auto a = model("A");
  const auto policy = levysup::sigma_policy(a);
  const auto one = levysup::sample_sigma_suprema(a, policy, 3000, 77, 1);
  const auto four = levysup::sample_sigma_suprema(a, policy, 3000, 77, 4);
  EXPECT_EQ(one.values, four.values);
  EXPECT_EQ(one.kinds, four.kinds);
  EXPECT_EQ(one.events, four.events);
  const auto other = levysup::sample_sigma_suprema(a, policy, 3000, 78, 1);
  EXPECT_NE(one.values, other.values);
}

TEST(GeometricSampler, LawOfSupY) {
  const auto y = model("A").without_c();
  const auto s = levysup::sample_geometric_suprema(y, 20'000, 9, 2);
  EXPECT_EQ(s.count(OutcomeKind::exact), s.values.size());
  const auto rep = levysup::ks_one_sample(
      s.values, [](double x) { return levysup::exp_model_sup_cdf(1.0, 0.5, 1.0, x); }, 0.01);
  EXPECT_EQ(rep.verdict, levysup::Verdict::consistent) << rep.ks.statistic << " " << rep.atom.statistic;
}

TEST(GeometricSampler, Errors) {
  RandomStream rng(1, 0);
  EXPECT_THROW(levysup::sample_sup_geometric(model("A"), rng), std::domain_error);
  EXPECT_THROW(levysup::sample_sup_geometric(model("D"), rng), std::domain_error);
}

// Memorylessness: given a crossing by a jump of rate-theta exponential size,
// the overshoot is Exp(theta) whatever the undershoot was.
TEST(FirstPassage, AttributionAndOvershootLaws) {
  const auto a = model("A");
  const auto policy = levysup::sigma_policy(a);
  constexpr std::size_t n = 40'000;
  std::vector<double> by_z, by_c;
  std::size_t infinite = 0;
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng(21, i, static_cast<std::uint32_t>(levysup::StreamDomain::first_passage));
    const auto fp = levysup::first_passage_zero(a, policy, rng);
    if (!fp.finite) {
      ++infinite;
      continue;
    }
    ASSERT_GT(fp.overshoot, 0.0);
    ASSERT_LE(fp.undershoot, 0.0);
    (fp.source == JumpSource::z ? by_z : by_c).push_back(fp.overshoot);
  }
  EXPECT_EQ(levysup::proportion_test(by_z.size(), n, 0.5, 4.0).verdict, levysup::Verdict::consistent);
  EXPECT_EQ(levysup::proportion_test(by_c.size(), n, 0.15, 4.0).verdict, levysup::Verdict::consistent);
  EXPECT_EQ(levysup::proportion_test(infinite, n, 0.35, 4.0).verdict, levysup::Verdict::consistent);
  auto exp_cdf = [](double theta) { return [theta](double x) { return -std::expm1(-theta * x); }; };
  EXPECT_EQ(levysup::ks_one_sample(by_z, exp_cdf(1.0), 0.01).verdict, levysup::Verdict::consistent);
  EXPECT_EQ(levysup::ks_one_sample(by_c, exp_cdf(2.0), 0.01).verdict, levysup::Verdict::consistent);
}

TEST(Hitting, ProbabilityForPositiveDrift) {
  const auto b = model("B");
  const auto policy = levysup::hitting_policy(b);
  constexpr std::size_t n = 20'000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng(4, i);
    hits += levysup::sample_hitting_time(b, -2.0, policy, rng).finite ? 1 : 0;
  }
  EXPECT_EQ(levysup::proportion_test(hits, n, std::exp(-1.0), 4.0).verdict, levysup::Verdict::consistent);
  RandomStream rng(4, 0);
  EXPECT_THROW(levysup::sample_hitting_time(b, 0.0, policy, rng), std::domain_error);
}

TEST(SampleSet, CountsAndUsableValues) {
  levysup::SampleSet s;
  s.values = {1.0, 2.0, 3.0, 4.0};
  s.kinds = {OutcomeKind::sigma_hit, OutcomeKind::event_cap, OutcomeKind::truncated_gap, OutcomeKind::exact};
  const auto c = s.counts();
  EXPECT_EQ(c[0] + c[1] + c[2] + c[3], 4u);
  EXPECT_EQ(s.count(OutcomeKind::event_cap), 1u);
  EXPECT_EQ(s.usable_values(), (std::vector<double>{1.0, 3.0, 4.0}));
  EXPECT_EQ(levysup::to_string(OutcomeKind::exact), "exact");
}

TEST(Runner, PropagatesExceptions) {
  auto fail = [](std::size_t i) -> int {
    if (i == 700) throw std::runtime_error("boom");
    return static_cast<int>(i);
  };
  EXPECT_THROW(levysup::run_replications<int>(1000, 3, fail), std::runtime_error);
  const auto ok = levysup::run_replications<int>(1000, 3, [](std::size_t i) { return static_cast<int>(i); });
  for (std::size_t i = 0; i < ok.size(); ++i) ASSERT_EQ(ok[i], static_cast<int>(i));
}

}  // namespace
