#include "spinhall/semiclassics.hpp"

#include "spinhall/ode.hpp"

#include <cmath>

namespace spinhall {

namespace {

void check_square(const Mat& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n)
    throw DimensionMismatch(std::string("form_components: ") + what);
}

}  // namespace

SymplecticData form_components(const MatrixProvider& h0,
                               const ConnectionProvider& conn_x,
                               const ConnectionProvider& conn_p,
                               const ModelParams& params, const Vec2& p,
                               double step) {
  params.validate();
  const Mat h = h0(p);
  const Eigen::Index n = h.rows();
  check_square(h, n, "H0 must be square");

  const std::array<Mat, 2> zero2 = {Mat::Zero(n, n), Mat::Zero(n, n)};
  const std::array<Mat, 2> a_x = conn_x ? conn_x(p) : zero2;
  const std::array<Mat, 2> a_p = conn_p ? conn_p(p) : zero2;
  for (int i = 0; i < 2; ++i) {
    check_square(a_x[i], n, "x-space connection dimension mismatch");
    check_square(a_p[i], n, "p-space connection dimension mismatch");
  }

  SymplecticData d;
  // External magnetic part; the a_a(x) curl would add here, but the shipped
  // models carry no position-space connection.
  d.F_xy = -params.charge * params.b_field * Mat::Identity(n, n);

  // M^a_b = d(a_b)/dp_a - dA^a/dx_b - i[A^a, a_b]. The momentum-space A is
  // x-independent here, so only the a_b terms can contribute; they vanish
  // when no position-space connection is supplied.
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      if (!conn_x) {
        d.M[a][b] = Mat::Zero(n, n);
        continue;
      }
      Vec2 dp = Vec2::Zero();
      dp(a) = step;
      const Mat da_dp = (conn_x(p + dp)[b] - conn_x(p - dp)[b]) / (2.0 * step);
      d.M[a][b] = da_dp - kI * commutator(a_p[a], a_x[b]);
    }

  // G^{xy} = dA^y/dp_x - dA^x/dp_y - i[A^x, A^y]
  if (conn_p) {
    Vec2 dx(step, 0.0), dy(0.0, step);
    const Mat dAy_dx = (conn_p(p + dx)[1] - conn_p(p - dx)[1]) / (2.0 * step);
    const Mat dAx_dy = (conn_p(p + dy)[0] - conn_p(p - dy)[0]) / (2.0 * step);
    d.G_xy = dAy_dx - dAx_dy - kI / params.hbar * commutator(a_p[0], a_p[1]);
  } else {
    d.G_xy = Mat::Zero(n, n);
  }

  for (int i = 0; i < 2; ++i) {
    Vec2 dp = Vec2::Zero();
    dp(i) = step;
    const Mat dh = (h0(p + dp) - h0(p - dp)) / (2.0 * step);
    d.e_drive[i] = params.charge * params.e_field(i) * Mat::Identity(n, n) -
                   kI * commutator(h, a_x[i]);
    d.f_drive[i] = -dh - kI * commutator(h, a_p[i]);
  }
  return d;
}

Mat pfaffian_measure(const SymplecticData& data) {
  const Eigen::Index n = data.G_xy.rows();
  Mat w = Mat::Identity(n, n);
  w += data.M[0][0] + data.M[1][1];
  w += 0.5 * anticommutator(data.F_xy, data.G_xy);
  return w;
}

KinematicSolution weighted_velocities(const SymplecticData& data) {
  KinematicSolution out;
  out.measure = pfaffian_measure(data);

  const Mat trM = data.M[0][0] + data.M[1][1];
  // G^{ij} and F_ij as antisymmetric index pairs built from the xy component.
  auto eps = [](int i, int j) { return i == j ? 0.0 : (i == 0 && j == 1 ? 1.0 : -1.0); };

  for (int i = 0; i < 2; ++i) {
    Mat v = -data.f_drive[i] + anticommutator(trM, data.f_drive[i]);
    Mat f = data.e_drive[i] - anticommutator(trM, data.e_drive[i]);
    for (int j = 0; j < 2; ++j) {
      v -= anticommutator(data.M[i][j], data.f_drive[j]);
      f += anticommutator(data.M[j][i], data.e_drive[j]);
      if (j != i) {
        v += 0.5 * eps(i, j) * anticommutator(data.G_xy, data.e_drive[j]);
        f -= 0.5 * eps(i, j) * anticommutator(data.F_xy, data.f_drive[j]);
      }
    }
    out.weighted_velocity[i] = v;
    out.weighted_force[i] = f;
  }
  return out;
}

AnomalousKinematics anomalous_specialize(const ModelParams& params, double g_xy,
                                         const Vec2& h_grad) {
  const double b = params.b_field;
  const double e = params.charge;
  AnomalousKinematics k;
  k.sqrt_w = 1.0 + b * g_xy;
  k.xdot_w.x() = h_grad.x() + e * params.e_field.y() * g_xy;
  k.xdot_w.y() = h_grad.y() - e * params.e_field.x() * g_xy;
  k.pdot_w.x() = e * params.e_field.x() + h_grad.y() * b;
  k.pdot_w.y() = e * params.e_field.y() - h_grad.x() * b;
  return k;
}

double band_energy(const ModelParams& params, const BandSpec& band, double p) {
  if (band.model == Model::KM_SO)
    return std::hypot(params.delta_so, params.v_f * p);
  // Spin-adapted basis: both diagonal entries equal (E1 + E2)/2.
  const auto e = analytic_spectrum(params, Vec2(p, 0.0)).energies;
  return 0.5 * (e(0) + e(1));
}

namespace {

// Radial derivative of band_energy.
double band_energy_slope(const ModelParams& params, const BandSpec& band, double p) {
  const double v2p = params.v_f * params.v_f * p;
  if (band.model == Model::KM_SO)
    return v2p / std::hypot(params.delta_so, params.v_f * p);
  const double s1 = std::hypot(params.delta_so - params.lambda_r, params.v_f * p);
  const double s2 = std::hypot(params.delta_so + params.lambda_r, params.v_f * p);
  return 0.5 * (v2p / s1 + v2p / s2);
}

}  // namespace

double band_curvature(const ModelParams& params, const BandSpec& band, double p) {
  const double sign = band.spin == Spin::Up ? 1.0 : -1.0;
  if (band.model == Model::KM_SO) {
    const double E = std::hypot(params.delta_so, params.v_f * p);
    return sign * (-params.hbar * params.v_f * params.v_f * params.delta_so /
                   (2.0 * E * E * E));
  }
  return sign * (2.0 * params.hbar / p) * dp_n1n2(params, p);
}

Trajectory integrate_trajectory(const ModelParams& params, const BandSpec& band,
                                const Vec2& x0, const Vec2& p0, double t_end,
                                double tol) {
  params.validate();
  if (band.basis == Basis::Phi)
    throw BasisNotSpinDiagonal(
        "integrate_trajectory: trajectories are band-diagonal in a definite-spin basis");
  if (band.model == Model::KM_SO && params.lambda_r != 0.0)
    throw UnsupportedCombination("integrate_trajectory: KM_SO requires lambda_r = 0");

  Trajectory traj;
  traj.band = band;
  const double e = params.charge;
  const double fxy = -e * params.b_field;

  auto rhs = [&](double, const Eigen::Vector4d& y) -> Eigen::Vector4d {
    const Vec2 p(y(2), y(3));
    const double pn = std::max(p.norm(), kMomentumOriginGuard);
    const double g = band_curvature(params, band, pn);
    const double w = 1.0 + fxy * g;
    if (std::abs(w) <= 1e-8)
      throw MeasureSingular("integrate_trajectory: |w~| <= 1e-8 along the path");
    const Vec2 grad = band_energy_slope(params, band, pn) * p / pn;
    Eigen::Vector4d dy;
    dy(0) = (grad.x() + e * params.e_field.y() * g) / w;
    dy(1) = (grad.y() - e * params.e_field.x() * g) / w;
    dy(2) = (e * params.e_field.x() - fxy * grad.y()) / w;
    dy(3) = (e * params.e_field.y() + fxy * grad.x()) / w;
    return dy;
  };

  Eigen::Vector4d y0;
  y0 << x0.x(), x0.y(), p0.x(), p0.y();
  const auto stats = integrate_dopri5<4>(
      rhs, y0, 0.0, t_end, tol, [&](double t, const Eigen::Vector4d& y) {
        traj.samples.push_back({t, Vec2(y(0), y(1)), Vec2(y(2), y(3))});
        if (band.model == Model::KM_Rashba) {
          const auto en = analytic_spectrum(params, Vec2(y(2), y(3))).energies;
          traj.max_dropped_offdiagonal =
              std::max(traj.max_dropped_offdiagonal, 0.5 * std::abs(en(0) - en(1)));
        }
      });
  if (!stats.tolerance_met)
    throw ToleranceNotMet("integrate_trajectory: step size underflow");
  traj.steps = stats.steps;
  traj.max_local_error = stats.max_local_error;
  return traj;
}

}  // namespace spinhall
