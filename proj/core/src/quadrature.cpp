#include "fracou/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracou::quadrature {
namespace {

struct Rule {
  std::array<double, 8> x{};   // Kronrod abscissas, x[0] = 0
  std::array<double, 8> wk{};  // Kronrod weights
  std::array<double, 8> wg{};  // Gauss weights on the even-indexed abscissas, 0 elsewhere
};

const Rule& rule() {
  static const Rule r = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    Rule out;
    const auto& kx = gauss_kronrod<double, 15>::abscissa();
    const auto& kw = gauss_kronrod<double, 15>::weights();
    const auto& gw = gauss<double, 7>::weights();
    for (std::size_t i = 0; i < 8; ++i) {
      out.x[i] = kx[i];
      out.wk[i] = kw[i];
      out.wg[i] = (i % 2 == 0) ? gw[i / 2] : 0.0;
    }
    return out;
  }();
  return r;
}

struct Interval {
  double a;
  double b;
  double value;
  double error;       // discretization estimate
  double inner;       // integrated sample error
};

struct ByError {
  bool operator()(const Interval& l, const Interval& r) const { return l.error < r.error; }
};

Interval apply_rule(const Integrand& f, double a, double b) {
  const Rule& r = rule();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> fx{};
  std::array<double, 15> ex{};
  {
    const Sample s = f(center);
    fx[0] = s.value;
    ex[0] = s.error;
  }
  for (std::size_t i = 1; i < 8; ++i) {
    const Sample lo = f(center - half * r.x[i]);
    const Sample hi = f(center + half * r.x[i]);
    fx[2 * i - 1] = lo.value;
    fx[2 * i] = hi.value;
    ex[2 * i - 1] = lo.error;
    ex[2 * i] = hi.error;
  }
  double kronrod = r.wk[0] * fx[0];
  double gauss = r.wg[0] * fx[0];
  double inner = r.wk[0] * std::abs(ex[0]);
  for (std::size_t i = 1; i < 8; ++i) {
    const double pair = fx[2 * i - 1] + fx[2 * i];
    kronrod += r.wk[i] * pair;
    gauss += r.wg[i] * pair;
    inner += r.wk[i] * (std::abs(ex[2 * i - 1]) + std::abs(ex[2 * i]));
  }
  const double mean = 0.5 * kronrod;
  double asc = r.wk[0] * std::abs(fx[0] - mean);
  for (std::size_t i = 1; i < 8; ++i) {
    asc += r.wk[i] * (std::abs(fx[2 * i - 1] - mean) + std::abs(fx[2 * i] - mean));
  }
  double err = std::abs(kronrod - gauss) * half;
  asc *= half;
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod * half);
  err = std::max(err, roundoff);
  return Interval{a, b, kronrod * half, err, inner * half};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                 const Options& options) {
  Result result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > std::min(a, b) && p < std::max(a, b)) cuts.push_back(p);
  }
  cuts.push_back(b);
  if (a < b) {
    std::sort(cuts.begin() + 1, cuts.end() - 1);
  } else {
    std::sort(cuts.begin() + 1, cuts.end() - 1, std::greater<>());
  }
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Interval, std::vector<Interval>, ByError> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Interval iv = apply_rule(f, cuts[i], cuts[i + 1]);
    result.evaluations += 15;
    total += iv.value;
    total_err += iv.error;
    heap.push(iv);
  }

  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
  while (total_err > target() && heap.size() < options.max_intervals) {
    const Interval worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) break;  // interval exhausted in floating point
    heap.pop();
    const Interval left = apply_rule(f, worst.a, mid);
    const Interval right = apply_rule(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the final partition to shed accumulated cancellation.
  double value = 0.0;
  double err = 0.0;
  double inner = 0.0;
  result.intervals = heap.size();
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    inner += heap.top().inner;
    heap.pop();
  }
  result.value = value;
  result.converged = err + inner <= std::max(options.abs_tol, options.rel_tol * std::abs(value));
  result.error = err + inner;
  return result;
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& options) {
  const Integrand wrapped = [&f](double x) { return Sample{f(x), 0.0}; };
  return integrate(wrapped, a, b, {}, options);
}

}  // namespace fracou::quadrature
