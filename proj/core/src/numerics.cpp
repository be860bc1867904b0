#include "levysup/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace levysup::numerics {
namespace {

// Kronrod nodes on [0, 1]; odd indices are the embedded Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double fc = f(mid);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrod[j] * pair;
    if (j % 2 == 1) gauss += kGauss[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

Integral integrate(const std::function<double(double)>& f, double a, double b, Tolerance tol,
                   std::span<const double> breakpoints) {
  if (a == b) return {};
  if (!(a < b)) throw std::invalid_argument("integrate: need a < b");

  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Piece> pieces;
  double total = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Piece p = gauss_kronrod(f, cuts[i], cuts[i + 1]);
    total += p.value;
    error += p.error;
    pieces.push(p);
  }

  int count = static_cast<int>(pieces.size());
  while (error > std::max(tol.abs, tol.rel * std::abs(total))) {
    if (!std::isfinite(total) || !std::isfinite(error))
      throw NumericError("integrate: non-finite integrand or divergent integral");
    if (count >= tol.max_intervals)
      throw NumericError("integrate: tolerance not reached (error estimate " + std::to_string(error) +
                         " for value " + std::to_string(total) + ")");
    Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval exhausted at double resolution; accept what we have
      error -= worst.error;
      worst.error = 0.0;
      pieces.push(worst);
      if (pieces.top().error == 0.0) break;
      continue;
    }
    const Piece left = gauss_kronrod(f, worst.a, mid);
    const Piece right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    pieces.push(left);
    pieces.push(right);
    ++count;
  }
  if (!std::isfinite(total)) throw NumericError("integrate: non-finite result");

  // re-sum to shed accumulated cancellation from the running updates
  double exact_total = 0.0, exact_error = 0.0;
  while (!pieces.empty()) {
    exact_total += pieces.top().value;
    exact_error += pieces.top().error;
    pieces.pop();
  }
  return {exact_total, exact_error, count};
}

Integral integrate_to_infinity(const std::function<double(double)>& f, double x, Tolerance tol,
                               std::span<const double> breakpoints) {
  std::vector<double> mapped;
  for (double p : breakpoints)
    if (p > x) mapped.push_back(std::exp(x - p));
  auto g = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double v = f(x - std::log(s));
    return v == 0.0 ? 0.0 : v / s;
  };
  return integrate(g, 0.0, 1.0, tol, mapped);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, int steps) {
  double flo = f(lo);
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace levysup::numerics
