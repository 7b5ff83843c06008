#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "trigzeros/common.hpp"

namespace trigzeros {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  long evaluations = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK dqk15 constants).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& error) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_mid = f(mid);
  double k_sum = kKronrodWeights[7] * f_mid;
  double g_sum = kGaussWeights[3] * f_mid;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(mid - dx);
    const double f2 = f(mid + dx);
    k_sum += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 1) g_sum += kGaussWeights[j / 2] * (f1 + f2);
  }
  value = k_sum * half;
  error = std::abs((k_sum - g_sum) * half);
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration to an absolute tolerance.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                              int max_panels = 4000) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<detail::Panel> heap;
  detail::Panel p{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, p.value, p.error);
  out.evaluations = 15;
  heap.push(p);
  double total = p.value, total_err = p.error;
  int panels = 1;
  while (total_err > abs_tol && panels < max_panels) {
    detail::Panel worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    detail::Panel left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    out.evaluations += 30;
    total += left.value + right.value;
    total_err += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  out.value = total;
  out.error = total_err;
  out.converged = total_err <= abs_tol;
  return out;
}

// Composite Gauss-Kronrod over fixed panel edges; the caller picks edges that
// resolve any oscillation (one panel per half-period is ample for smooth
// integrands).
template <class F>
QuadResult integrate_panels(const F& f, const std::vector<double>& edges) {
  QuadResult out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double v, e;
    detail::gk15(f, edges[i], edges[i + 1], v, e);
    out.value += v;
    out.error += e;
    out.evaluations += 15;
  }
  return out;
}

// Iterated 2D adaptive quadrature on a rectangle. Slow but independent of any
// closed form; used as a test oracle.
template <class F2>
QuadResult integrate_2d(const F2& f, double ax, double bx, double ay, double by,
                        double abs_tol) {
  QuadResult out;
  long evals = 0;
  auto outer = [&](double x) {
    auto inner = [&](double y) { return f(x, y); };
    QuadResult row = integrate_adaptive(inner, ay, by, abs_tol / (8.0 * (bx - ax)));
    evals += row.evaluations;
    return row.value;
  };
  QuadResult res = integrate_adaptive(outer, ax, bx, abs_tol / 4.0);
  res.evaluations = evals;
  return res;
}

}  // namespace trigzeros
