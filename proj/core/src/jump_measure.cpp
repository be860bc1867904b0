#include "levysup/jump_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "levysup/numerics.hpp"

namespace levysup {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("jump measure: ") + what + " must be positive and finite");
}

double tail_of(const JumpComponent& c, double x) {
  const double y = std::max(x, c.cutoff);
  return std::visit(
      Overloaded{
          [&](const ExponentialJumps& e) { return e.rate * std::exp(-e.theta * y); },
          [&](const GammaJumps& g) { return g.alpha * exponential_integral_e1(g.beta * y); },
          [&](const StableLikeJumps& s) {
            return y < s.upper ? s.scale / s.index * (std::pow(y, -s.index) - std::pow(s.upper, -s.index)) : 0.0;
          },
          [&](const PointMass& a) { return y < a.location ? a.mass : 0.0; },
      },
      c.family);
}

double mass_of(const JumpComponent& c) {
  const bool infinite = std::holds_alternative<GammaJumps>(c.family) || std::holds_alternative<StableLikeJumps>(c.family);
  if (c.cutoff == 0.0) {
    if (infinite) return kInf;
    if (const auto* e = std::get_if<ExponentialJumps>(&c.family)) return e->rate;
    return std::get<PointMass>(c.family).mass;
  }
  return tail_of(c, c.cutoff);
}

double mean_of(const JumpComponent& c) {
  const double eps = c.cutoff;
  return std::visit(
      Overloaded{
          [&](const ExponentialJumps& e) { return e.rate * std::exp(-e.theta * eps) * (eps + 1.0 / e.theta); },
          [&](const GammaJumps& g) { return g.alpha / g.beta * std::exp(-g.beta * eps); },
          [&](const StableLikeJumps& s) {
            const double p = 1.0 - s.index;
            return s.scale / p * (std::pow(s.upper, p) - std::pow(eps, p));
          },
          [&](const PointMass& a) { return a.location > eps ? a.mass * a.location : 0.0; },
      },
      c.family);
}

double second_moment_of(const JumpComponent& c) {
  const double eps = c.cutoff;
  return std::visit(
      Overloaded{
          [&](const ExponentialJumps& e) {
            const double t = e.theta;
            return e.rate * std::exp(-t * eps) * (eps * eps + 2.0 * eps / t + 2.0 / (t * t));
          },
          [&](const GammaJumps& g) { return g.alpha * std::exp(-g.beta * eps) * (eps / g.beta + 1.0 / (g.beta * g.beta)); },
          [&](const StableLikeJumps& s) {
            const double p = 2.0 - s.index;
            return s.scale / p * (std::pow(s.upper, p) - std::pow(eps, p));
          },
          [&](const PointMass& a) { return a.location > eps ? a.mass * a.location * a.location : 0.0; },
      },
      c.family);
}

double stable_exponent(const StableLikeJumps& s, double eps, double lam) {
  if (lam == 0.0) return 0.0;
  // x = u^p removes the x^{-s} singularity at the origin
  const double p = 1.0 / (1.0 - s.index);
  const double ps = p * s.index;
  auto integrand = [&](double u) {
    if (u <= 0.0) return s.scale * lam * p;
    const double x = std::pow(u, p);
    return s.scale * p * -std::expm1(-lam * x) * std::pow(u, -ps - 1.0);
  };
  return numerics::integrate(integrand, std::pow(eps, 1.0 - s.index), std::pow(s.upper, 1.0 - s.index),
                             {.rel = 1e-12, .abs = 1e-15})
      .value;
}

double exponent_of(const JumpComponent& c, double lam) {
  const double eps = c.cutoff;
  return std::visit(
      Overloaded{
          [&](const ExponentialJumps& e) {
            if (eps == 0.0) return e.rate * lam / (e.theta + lam);
            return e.rate * std::exp(-e.theta * eps) -
                   e.rate * e.theta / (e.theta + lam) * std::exp(-(e.theta + lam) * eps);
          },
          [&](const GammaJumps& g) {
            if (eps == 0.0) return g.alpha * std::log1p(lam / g.beta);
            return g.alpha * (exponential_integral_e1(g.beta * eps) - exponential_integral_e1((g.beta + lam) * eps));
          },
          [&](const StableLikeJumps& s) { return stable_exponent(s, eps, lam); },
          [&](const PointMass& a) { return a.location > eps ? -a.mass * std::expm1(-lam * a.location) : 0.0; },
      },
      c.family);
}

double gamma_jump(const GammaJumps& g, double eps, RandomStream& rng) {
  const double m = std::max(eps, 1.0 / g.beta);
  const double inner = eps < m ? g.alpha * (exponential_integral_e1(g.beta * eps) - exponential_integral_e1(g.beta * m)) : 0.0;
  const double outer = g.alpha * exponential_integral_e1(g.beta * m);
  const bool pick_inner = rng.uniform() * (inner + outer) < inner;
  for (;;) {
    if (pick_inner) {
      // log-uniform proposal on (eps, m], accept with e^{-beta (x - eps)}
      const double x = eps * std::pow(m / eps, rng.uniform_open_left());
      if (rng.uniform() < std::exp(-g.beta * (x - eps))) return x;
    } else {
      // m + Exp(beta) proposal, accept with m / x
      const double x = m + rng.exponential(g.beta);
      if (rng.uniform() * x < m) return x;
    }
  }
}

double jump_of(const JumpComponent& c, RandomStream& rng) {
  const double eps = c.cutoff;
  return std::visit(
      Overloaded{
          [&](const ExponentialJumps& e) { return eps + rng.exponential(e.theta); },
          [&](const GammaJumps& g) { return gamma_jump(g, eps, rng); },
          [&](const StableLikeJumps& s) {
            const double lo = std::pow(eps, -s.index), hi = std::pow(s.upper, -s.index);
            return std::pow(hi + rng.uniform_open_left() * (lo - hi), -1.0 / s.index);
          },
          [&](const PointMass& a) { return a.location; },
      },
      c.family);
}

// Draw from y nu(dy) / mean on (eps, inf).
double size_biased_jump(const JumpComponent& c, RandomStream& rng) {
  const double eps = c.cutoff;
  return std::visit(
      Overloaded{
          [&](const ExponentialJumps& e) {
            // density proportional to (eps + w) e^{-theta w}
            const double w_exp = eps * e.theta;
            double w = rng.exponential(e.theta);
            if (rng.uniform() * (w_exp + 1.0) >= w_exp) w += rng.exponential(e.theta);
            return eps + w;
          },
          [&](const GammaJumps& g) { return eps + rng.exponential(g.beta); },
          [&](const StableLikeJumps& s) {
            const double p = 1.0 - s.index;
            const double lo = std::pow(eps, p), hi = std::pow(s.upper, p);
            return std::pow(lo + rng.uniform() * (hi - lo), 1.0 / p);
          },
          [&](const PointMass& a) { return a.location; },
      },
      c.family);
}

bool is_empty_component(const JumpComponent& c) {
  return std::visit(Overloaded{
                        [&](const StableLikeJumps& s) { return c.cutoff >= s.upper; },
                        [&](const PointMass& a) { return c.cutoff >= a.location; },
                        [](const auto&) { return false; },
                    },
                    c.family);
}

std::vector<double> cumulative(const std::vector<JumpComponent>& parts, double (*f)(const JumpComponent&)) {
  std::vector<double> out;
  double acc = 0.0;
  for (const auto& p : parts) out.push_back(acc += f(p));
  return out;
}

std::size_t pick(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

double exponential_integral_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("E1: argument must be positive");
  if (x > 700.0) return 0.0;
  return -std::expint(-x);
}

JumpMeasure::JumpMeasure(std::vector<JumpComponent> parts) {
  std::erase_if(parts, is_empty_component);
  parts_ = std::move(parts);
  mean_cdf_ = cumulative(parts_, mean_of);
  mean_ = mean_cdf_.empty() ? 0.0 : mean_cdf_.back();
  mass_cdf_ = cumulative(parts_, mass_of);
  mass_ = mass_cdf_.empty() ? 0.0 : mass_cdf_.back();
  if (!std::isfinite(mean_)) throw std::invalid_argument("jump measure: mean must be finite");
}

JumpMeasure JumpMeasure::exponential(double rate, double theta) {
  require_positive(rate, "rate");
  require_positive(theta, "theta");
  return JumpMeasure({{ExponentialJumps{rate, theta}, 0.0}});
}

JumpMeasure JumpMeasure::gamma(double alpha, double beta) {
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  return JumpMeasure({{GammaJumps{alpha, beta}, 0.0}});
}

JumpMeasure JumpMeasure::stable_like(double scale, double index, double upper) {
  require_positive(scale, "scale");
  require_positive(upper, "upper");
  if (!(index > 0.0 && index < 1.0)) throw std::invalid_argument("jump measure: stable index must lie in (0,1) for a finite mean");
  return JumpMeasure({{StableLikeJumps{scale, index, upper}, 0.0}});
}

JumpMeasure JumpMeasure::atom(double location, double mass) {
  require_positive(location, "atom location");
  require_positive(mass, "atom mass");
  return JumpMeasure({{PointMass{location, mass}, 0.0}});
}

JumpMeasure JumpMeasure::sum(std::span<const JumpMeasure> parts) {
  std::vector<JumpComponent> all;
  for (const auto& m : parts) all.insert(all.end(), m.parts_.begin(), m.parts_.end());
  return JumpMeasure(std::move(all));
}

double JumpMeasure::tail(double x) const {
  if (!(x > 0.0)) throw std::domain_error("tail: x must be positive");
  double t = 0.0;
  for (const auto& p : parts_) t += tail_of(p, x);
  return t;
}

double JumpMeasure::total_mass() const { return mass_; }

bool JumpMeasure::finite_activity() const { return std::isfinite(mass_); }

double JumpMeasure::second_moment() const {
  double s = 0.0;
  for (const auto& p : parts_) s += second_moment_of(p);
  return s;
}

double JumpMeasure::exponential_moment_limit() const {
  double r = kInf;
  for (const auto& p : parts_) {
    if (const auto* e = std::get_if<ExponentialJumps>(&p.family)) r = std::min(r, e->theta);
    if (const auto* g = std::get_if<GammaJumps>(&p.family)) r = std::min(r, g->beta);
  }
  return r;
}

double JumpMeasure::laplace_exponent(double lam) const {
  if (lam < 0.0 && !(-lam < exponential_moment_limit()))
    throw std::domain_error("laplace_exponent: exponential moment does not exist");
  double s = 0.0;
  for (const auto& p : parts_) s += exponent_of(p, lam);
  return s;
}

JumpMeasure JumpMeasure::restricted_above(double eps) const {
  if (eps < 0.0) throw std::domain_error("restricted_above: eps must be nonnegative");
  auto parts = parts_;
  for (auto& p : parts) p.cutoff = std::max(p.cutoff, eps);
  return JumpMeasure(std::move(parts));
}

double JumpMeasure::sample_jump(RandomStream& rng) const {
  if (!finite_activity() || mass_ <= 0.0) throw std::domain_error("sample_jump: measure must have finite positive mass");
  return jump_of(parts_[pick(mass_cdf_, rng.uniform())], rng);
}

double JumpMeasure::sample_integrated_tail(RandomStream& rng) const {
  if (!(mean_ > 0.0)) throw std::domain_error("sample_integrated_tail: zero measure");
  const auto& part = parts_[pick(mean_cdf_, rng.uniform())];
  return rng.uniform_open_left() * size_biased_jump(part, rng);
}

std::vector<double> JumpMeasure::kinks() const {
  std::vector<double> k;
  for (const auto& p : parts_) {
    if (p.cutoff > 0.0) k.push_back(p.cutoff);
    if (const auto* a = std::get_if<PointMass>(&p.family)) k.push_back(a->location);
    if (const auto* s = std::get_if<StableLikeJumps>(&p.family)) k.push_back(s->upper);
  }
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

std::string JumpMeasure::describe() const {
  if (parts_.empty()) return "zero";
  std::string out;
  char buf[160];
  for (const auto& p : parts_) {
    if (!out.empty()) out += " + ";
    std::visit(Overloaded{
                   [&](const ExponentialJumps& e) { std::snprintf(buf, sizeof buf, "exp(rate=%.17g,theta=%.17g)", e.rate, e.theta); },
                   [&](const GammaJumps& g) { std::snprintf(buf, sizeof buf, "gamma(alpha=%.17g,beta=%.17g)", g.alpha, g.beta); },
                   [&](const StableLikeJumps& s) {
                     std::snprintf(buf, sizeof buf, "stable(scale=%.17g,index=%.17g,upper=%.17g)", s.scale, s.index, s.upper);
                   },
                   [&](const PointMass& a) { std::snprintf(buf, sizeof buf, "atom(location=%.17g,mass=%.17g)", a.location, a.mass); },
               },
               p.family);
    out += buf;
    if (p.cutoff > 0.0) {
      std::snprintf(buf, sizeof buf, "|>%.17g", p.cutoff);
      out += buf;
    }
  }
  return out;
}

double tail_mass(const JumpMeasure& m, double x) { return m.tail(x); }
double mean_jump_rate(const JumpMeasure& m) { return m.mean(); }
double subordinator_exponent(const JumpMeasure& m, double lam) {
  if (lam < 0.0) throw std::domain_error("subordinator_exponent: lam must be nonnegative");
  return m.laplace_exponent(lam);
}

}  // namespace levysup
