#include "gidp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "gidp/errors.hpp"

namespace gidp {

namespace {

// QUADPACK qk21 abscissae and weights; odd-index nodes carry the embedded
// 10-point Gauss rule.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return Panel{a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureConfig& config) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("quadrature", "integration limits must be finite");
  }
  if (a == b) return {};
  const double pts[2] = {std::min(a, b), std::max(a, b)};
  QuadratureResult r = integrate(f, std::span<const double>(pts, 2), config);
  if (b < a) r.value = -r.value;
  return r;
}

QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureConfig& config) {
  if (breakpoints.size() < 2) {
    throw DomainError("quadrature", "at least two breakpoints are required");
  }
  for (const double x : breakpoints) {
    if (!std::isfinite(x)) throw DomainError("quadrature", "breakpoints must be finite");
  }
  if (!(config.abs_tol > 0.0) || !(config.rel_tol > 0.0) || config.max_panels < 1) {
    throw DomainError("quadrature", "quadrature tolerances and budget must be positive");
  }
  std::priority_queue<Panel> heap;
  // Panels narrower than this relative to their location are not split
  // further; their error is accepted as roundoff.
  std::vector<Panel> frozen;
  double total = 0.0;
  double error = 0.0;
  int panels = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) {
      if (breakpoints[i + 1] == breakpoints[i]) continue;
      throw DomainError("quadrature", "breakpoints must be sorted");
    }
    Panel p = gauss_kronrod_21(f, breakpoints[i], breakpoints[i + 1]);
    ++panels;
    total += p.value;
    error += p.error;
    heap.push(p);
  }
  auto tolerance = [&] { return std::max(config.abs_tol, config.rel_tol * std::abs(total)); };
  while (error > tolerance() && !heap.empty()) {
    if (!std::isfinite(total) || !std::isfinite(error)) break;
    if (panels + 2 > config.max_panels) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max({std::abs(worst.a), std::abs(worst.b), 1e-300});
    if (worst.b - worst.a < 64.0 * 2.220446049250313e-16 * scale) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = gauss_kronrod_21(f, worst.a, mid);
    Panel right = gauss_kronrod_21(f, mid, worst.b);
    panels += 2;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the panel list to shed accumulated cancellation error.
  double value = 0.0;
  double err = 0.0;
  for (const auto& p : frozen) {
    value += p.value;
    err += p.error;
  }
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(value) || !std::isfinite(err)) {
    throw ConvergenceError("quadrature", "integrand produced a non-finite value", err);
  }
  if (err > std::max(config.abs_tol, config.rel_tol * std::abs(value))) {
    std::ostringstream msg;
    msg << "adaptive quadrature did not reach tolerance within " << config.max_panels
        << " panels (residual estimate " << err << ")";
    throw ConvergenceError("quadrature", msg.str(), err);
  }
  return QuadratureResult{value, err, panels};
}

}  // namespace gidp
