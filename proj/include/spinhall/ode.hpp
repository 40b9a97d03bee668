#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace spinhall {

struct OdeStats {
  int steps = 0;
  int rejected = 0;
  double max_local_error = 0.0;
  bool tolerance_met = true;
};

/// Dormand-Prince 5(4) with PI step-size control. Calls `observer(t, y)` after
/// every accepted step (and once at t0).
template <int N>
OdeStats integrate_dopri5(
    const std::function<Eigen::Matrix<double, N, 1>(double, const Eigen::Matrix<double, N, 1>&)>& f,
    Eigen::Matrix<double, N, 1> y, double t0, double t1, double tol,
    const std::function<void(double, const Eigen::Matrix<double, N, 1>&)>& observer) {
  using Vec = Eigen::Matrix<double, N, 1>;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeStats stats;
  double t = t0;
  const double span = t1 - t0;
  double h = span / 100.0;
  const double hmin = std::abs(span) * 1e-14;
  observer(t, y);
  Vec k1 = f(t, y);

  while ((span > 0 && t < t1) || (span < 0 && t > t1)) {
    if ((span > 0 && t + h > t1) || (span < 0 && t + h < t1)) h = t1 - t;
    const Vec k2 = f(t + c2 * h, y + h * (a21 * k1));
    const Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 =
        f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = f(t + h, ynew);
    const Vec errv =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc = tol + tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
      err = std::max(err, std::abs(errv(i)) / sc);
    }

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      ++stats.steps;
      stats.max_local_error = std::max(stats.max_local_error, err * tol);
      observer(t, y);
    } else {
      ++stats.rejected;
    }
    const double fac = std::clamp(0.9 * std::pow(err > 0 ? err : 1e-10, -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < hmin) {
      stats.tolerance_met = false;
      break;
    }
  }
  return stats;
}

}  // namespace spinhall
