#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace spinhall {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // accumulated local error estimates
  long evaluations = 0;
  bool converged = true;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
// Column layout: node, Gauss weight, Kronrod weight.
inline constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529}};

template <class F>
double gk15(const F& f, double a, double b, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double y0 = f(mid);
  double g7 = kGK15[0][1] * y0;
  double k15 = kGK15[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15[i][0];
    const double yi = f(mid + dx) + f(mid - dx);
    g7 += kGK15[i][1] * yi;
    k15 += kGK15[i][2] * yi;
  }
  g7 *= half;
  k15 *= half;
  err = std::pow(200.0 * std::abs(g7 - k15), 1.5);
  return k15;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] by interval bisection.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                              double rel_tol = 1e-12, int max_intervals = 4000) {
  QuadResult total;
  std::vector<std::pair<double, double>> stack{{a, b}};
  int used = 1;
  while (!stack.empty()) {
    const auto [ai, bi] = stack.back();
    stack.pop_back();
    double err = 0.0;
    const double s = detail::gk15(f, ai, bi, err);
    total.evaluations += 15;
    const double local_budget =
        abs_tol * (bi - ai) / (b - a) + rel_tol * std::abs(s);
    if (err <= local_budget || used >= max_intervals) {
      total.value += s;
      total.error += err;
      if (err > local_budget) total.converged = false;
      continue;
    }
    const double mid = 0.5 * (ai + bi);
    stack.push_back({ai, mid});
    stack.push_back({mid, bi});
    used += 2;
  }
  return total;
}

}  // namespace spinhall
