#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "levysup/fluctuation.hpp"
#include "levysup/model_config.hpp"
#include "levysup/numerics.hpp"

namespace {

using levysup::JumpMeasure;
using levysup::ProcessSpec;

ProcessSpec model(const char* name) { return *levysup::preset(name); }

// Independent root oracle: Boost TOMS 748 on psi over a bracket away from 0.
double root_oracle(const ProcessSpec& s, double lo, double hi) {
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve([&](double x) { return levysup::psi_dual(s, x); }, lo, hi,
                                             boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

TEST(PhiZero, PositiveDriftModels) {
  const auto b = levysup::phi_zero(model("B"));
  EXPECT_NEAR(b.phi0, 0.5, 1e-12);
  EXPECT_NEAR(b.phi0, root_oracle(model("B"), 0.1, 10.0), 1e-12);
  EXPECT_LT(b.residual, 1e-13);
  EXPECT_LE(b.bracket_lo, b.phi0);
  EXPECT_GE(b.bracket_hi, b.phi0);

  const auto d = levysup::phi_zero(model("D"));
  EXPECT_NEAR(d.phi0, 1.0, 1e-12);
  EXPECT_NEAR(d.phi0, root_oracle(model("D"), 0.1, 10.0), 1e-12);
}

TEST(PhiZero, ExactlyZeroWhenDriftNonPositive) {
  for (const char* name : {"A", "C", "gammaC", "brownianY"}) EXPECT_EQ(levysup::phi_zero(model(name)).phi0, 0.0) << name;
}

TEST(HittingProbability, Examples) {
  EXPECT_NEAR(levysup::hitting_probability(model("B"), -2.0), std::exp(-1.0), 1e-12);
  EXPECT_EQ(levysup::hitting_probability(model("A"), -5.0), 1.0);
  EXPECT_NEAR(levysup::hitting_probability(model("B"), -1e-9), 1.0, 1e-9);
  EXPECT_THROW(levysup::hitting_probability(model("B"), 0.5), std::domain_error);
}

TEST(CrossingLaw, ZAttributionProbabilities) {
  EXPECT_NEAR(levysup::crossing_law(model("A")).p_cross_by_z(), 0.5, 1e-12);
  EXPECT_NEAR(levysup::crossing_law(model("B")).p_cross_by_z(), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(levysup::crossing_law(model("D")).p_cross_by_z(), 1.0, 1e-12);
  EXPECT_NEAR(levysup::crossing_law(model("C")).p_cross_by_z(), 0.5, 1e-12);
}

TEST(CrossingLaw, ConditionalOvershootIsUnitExponential) {
  for (const char* name : {"A", "B", "D"}) {
    const auto law = levysup::crossing_law(model(name));
    for (double x : {0.0, 0.3, 1.0, 4.0, 12.0}) {
      EXPECT_NEAR(law.conditional_overshoot_tail(x), std::exp(-x), 1e-10) << name << " x=" << x;
      EXPECT_NEAR(law.conditional_cdf()(x), -std::expm1(-x), 1e-6) << name << " x=" << x;
    }
  }
}

TEST(CrossingLaw, DensityIntegratesToAttributionProbability) {
  boost::math::quadrature::exp_sinh<double> q;
  for (const char* name : {"A", "B", "D"}) {
    const auto law = levysup::crossing_law(model(name), false);
    EXPECT_NEAR(q.integrate([&](double x) { return law.overshoot_density(x); }), law.p_cross_by_z(), 1e-9) << name;
  }
}

TEST(CrossingLaw, TableIsMonotoneWithFineIncrements) {
  const JumpMeasure parts[] = {JumpMeasure::exponential(0.2, 0.5), JumpMeasure::atom(1.5, 0.2)};
  const ProcessSpec s(1.0, JumpMeasure::sum(parts), JumpMeasure::exponential(1.0, 1.0));
  const auto law = levysup::crossing_law(s);
  const auto& v = law.conditional_cdf().values();
  for (std::size_t i = 1; i < v.size(); ++i) {
    ASSERT_GE(v[i], v[i - 1]);
    ASSERT_LE(v[i] - v[i - 1], 1e-4 + 1e-12);
  }
}

TEST(CrossingLaw, RejectsBrownianPart) { EXPECT_THROW(levysup::crossing_law(model("brownianY")), std::domain_error); }

TEST(ConditionalOvershoot, IntegratedTailDensity) {
  const auto f = levysup::conditional_overshoot(JumpMeasure::exponential(0.3, 2.0));
  for (double x : {0.1, 1.0, 3.0}) EXPECT_NEAR(f(x), 2.0 * std::exp(-2.0 * x), 1e-14);
}

TEST(GeometricSumLt, MatchesExpModelLaw) {
  // rho = 0.5, Exp(1) summands: the law of sup Y for Model A's Y
  auto f = [](double lam) { return 1.0 / (1.0 + lam); };
  for (double lam : {0.5, 1.0, 2.0, 5.0}) {
    const double direct = 0.5 + 0.5 * 0.5 / (0.5 + lam);
    EXPECT_NEAR(levysup::geometric_sum_lt(0.5, f, lam), direct, 1e-15);
  }
  EXPECT_THROW(levysup::geometric_sum_lt(1.0, f, 1.0), std::domain_error);
  EXPECT_THROW(levysup::geometric_sum_lt(0.0, f, 1.0), std::domain_error);
}

TEST(SupLaplaceTransform, ModelAY) {
  const auto y = model("A").without_c();
  EXPECT_NEAR(levysup::sup_laplace_transform(y, 1.0), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(levysup::sup_laplace_transform(model("A"), 1.0), std::domain_error);
  EXPECT_THROW(levysup::sup_laplace_transform(model("D"), 1.0), std::domain_error);
  EXPECT_THROW(levysup::sup_laplace_transform(y, 0.0), std::domain_error);
}

TEST(SupLaplaceTransform, BrownianWithDriftIsExponential) {
  for (double lam : {0.5, 1.0, 4.0})
    EXPECT_NEAR(levysup::sup_laplace_transform(model("brownianY"), lam), 1.0 / (1.0 + lam), 1e-15);
}

TEST(SupLaplaceTransform, AgreesWithExpModelCdfByQuadrature) {
  boost::math::quadrature::exp_sinh<double> q;
  for (auto [rate, theta] : {std::pair{0.5, 1.0}, std::pair{0.3, 2.0}, std::pair{1.5, 2.0}}) {
    const ProcessSpec y(1.0, JumpMeasure::exponential(rate, theta));
    const double atom = levysup::exp_model_sup_cdf(1.0, rate, theta, 0.0);
    for (double lam : {0.5, 1.0, 2.0, 5.0}) {
      // E e^{-lam S} = F(0) + integral_0^inf lam e^{-lam x} (F(x) - F(0)) dx
      const double cont = q.integrate([&](double x) {
        return lam * std::exp(-lam * x) * (levysup::exp_model_sup_cdf(1.0, rate, theta, x) - atom);
      });
      EXPECT_NEAR(atom + cont, levysup::sup_laplace_transform(y, lam), 1e-6 * (atom + cont));
    }
  }
}

TEST(ExpModelSupCdf, AtomAndErrors) {
  EXPECT_NEAR(levysup::exp_model_sup_cdf(1.0, 0.5, 1.0, 0.0), 0.5, 1e-16);
  EXPECT_NEAR(levysup::exp_model_sup_cdf(1.0, 0.5, 1.0, 2.0), 1.0 - 0.5 * std::exp(-1.0), 1e-15);
  EXPECT_THROW(levysup::exp_model_sup_cdf(1.0, 2.0, 1.0, 1.0), std::domain_error);
}

// c Phi = phi_Z(Phi), i.e. c = integral e^{-Phi x} nu_Z(x, inf) dx, for Y with mu_Z > c.
TEST(Identities, DriftFromRootForPositiveDriftY) {
  boost::math::quadrature::exp_sinh<double> q;
  for (auto [rate, theta] : {std::pair{2.0, 1.0}, std::pair{3.0, 2.0}}) {
    const ProcessSpec y(1.0, JumpMeasure::exponential(rate, theta));
    const double phi = levysup::phi_zero(y).phi0;
    ASSERT_GT(phi, 0.0);
    const double integral = q.integrate([&](double x) { return std::exp(-phi * x) * y.z().tail(x); });
    EXPECT_NEAR(integral, y.drift(), 1e-10);
    EXPECT_NEAR(levysup::crossing_law(y).p_cross_by_z(), 1.0, 1e-10);
  }
}

// For mu_Z < c < mu_Z + mu_C the atom of sup_{t<sigma} X strictly exceeds the atom of sup Y,
// and the gap grows as mu_C grows.
TEST(Identities, CounterexampleAtomInequality) {
  double previous = 0.0;
  for (double rate_c : {0.6, 1.0, 5.0, 50.0}) {
    const ProcessSpec x(1.0, JumpMeasure::exponential(0.5, 1.0), JumpMeasure::exponential(rate_c, 1.0));
    const auto law = levysup::crossing_law(x, false);
    const double gap = (1.0 - law.p_cross_by_z()) - (1.0 - 0.5);
    EXPECT_GT(gap, 0.0);
    EXPECT_GT(gap, previous);
    previous = gap;
  }
  const auto b = levysup::crossing_law(model("B"), false);
  EXPECT_NEAR(1.0 - b.p_cross_by_z(), 2.0 / 3.0, 1e-12);
}

}  // namespace
