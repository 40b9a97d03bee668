#include "spinhall/checks.hpp"

#include "spinhall/basis.hpp"
#include "spinhall/berry.hpp"
#include "spinhall/io.hpp"
#include "spinhall/parallel.hpp"
#include "spinhall/semiclassics.hpp"
#include "spinhall/transport.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

namespace spinhall::checks {

namespace {

using Check = std::pair<std::string, std::function<double()> >;  // returns defect

ModelParams base_params(double d, double l) {
  ModelParams p;
  p.delta_so = d;
  p.lambda_r = l;
  return p;
}

double grid_hermiticity() {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto pr = base_params(std::abs(uni(rng)) * 0.3, std::abs(uni(rng)) * 0.05);
    const Vec2 p(uni(rng), uni(rng));
    const Mat h = build_hamiltonian(pr, p, Valley::Full).entries;
    worst = std::max(worst, hermiticity_defect(h));
  }
  return worst;
}

double spectrum_consistency() {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0.0;
  std::mutex mu;
  for (int s = 0; s < 5; ++s) {
    const double d = 0.2 + 0.8 * uni(rng);
    const double l = 0.45 * d * uni(rng);
    const auto pr = base_params(d, l);
    parallel_for(101, [&](std::size_t ix) {
      double local = 0.0;
      for (int iy = 0; iy < 101; ++iy) {
        const Vec2 p(-3.0 + 6.0 * ix / 100.0, -3.0 + 6.0 * iy / 100.0);
        const Mat h = build_hamiltonian(pr, p, Valley::K).entries;
        Eigen::SelfAdjointEigenSolver<Mat4> es{Mat4(h)};
        Eigen::Vector4d a = analytic_spectrum(pr, p).energies;
        std::sort(a.data(), a.data() + 4);
        local = std::max(local, (es.eigenvalues() - a).cwiseAbs().maxCoeff());
      }
      std::lock_guard<std::mutex> g(mu);
      worst = std::max(worst, local);
    });
  }
  return worst;
}

double isospectrality() {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto pr = base_params(0.1 + std::abs(uni(rng)) * 0.2, std::abs(uni(rng)) * 0.02);
    const Vec2 p(uni(rng), uni(rng));
    Eigen::SelfAdjointEigenSolver<Mat4> ek{Mat4(build_hamiltonian(pr, p, Valley::K).entries)};
    Eigen::SelfAdjointEigenSolver<Mat4> ekp{Mat4(build_hamiltonian(pr, p, Valley::Kp).entries)};
    worst = std::max(worst, (ek.eigenvalues() - ekp.eigenvalues()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double sum_rules() {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> uni(0.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto pr = base_params(uni(rng), 0.4 * uni(rng));
    const Vec2 p(uni(rng) - 1.5, uni(rng) - 1.5);
    const auto e = analytic_spectrum(pr, p).energies;
    worst = std::max(worst, std::abs(e(0) + e(2) - 2.0 * pr.lambda_r));
    worst = std::max(worst, std::abs(e(1) + e(3) + 2.0 * pr.lambda_r));
  }
  return worst;
}

double fw_offdiagonal() {
  const auto pr = base_params(0.5, 0.0);
  double worst = 0.0;
  for (int ix = 0; ix < 21; ++ix)
    for (int iy = 0; iy < 21; ++iy) {
      const Vec2 p(-3.0 + 0.3 * ix, -3.0 + 0.3 * iy);
      const Mat8 u = fw_transform(pr, p);
      const Mat h = build_hamiltonian(pr, p, Valley::Full).entries;
      Mat d = u * h * u.adjoint();
      d.diagonal().setZero();
      worst = std::max(worst, max_abs(d));
    }
  return worst;
}

double rotation_involution() {
  const Mat4 r = basis_rotation();
  return std::max(max_abs(r * r - Mat4::Identity()), max_abs(r - r.adjoint()));
}

double sector_projectors() {
  const auto pr = base_params(0.5, 0.1);
  double worst = 0.0;
  for (double ang : {0.3, 1.1, 2.9}) {
    const Vec2 p(0.8 * std::cos(ang), 0.8 * std::sin(ang));
    const auto phi = analytic_eigenstates(pr, p, Valley::K);
    const auto psi = spin_eigenbasis(phi);
    const Mat pp = phi.positive_matrix();
    const Mat ps = psi.positive_matrix();
    worst = std::max(worst, max_abs(pp * pp.adjoint() - ps * ps.adjoint()));
  }
  return worst;
}

double rotated_hamiltonian_block() {
  const auto pr = base_params(0.5, 0.1);
  const Vec2 p(0.3, 0.4);
  const auto e = analytic_spectrum(pr, p).energies;
  const auto phi = analytic_eigenstates(pr, p, Valley::K);
  const auto psi = spin_eigenbasis(phi);
  const Mat h = build_hamiltonian(pr, p, Valley::K).entries;
  const Mat pos = psi.positive_matrix();
  const Mat hpsi = pos.adjoint() * h * pos;
  Mat2 want;
  want << 0.5 * (e(0) + e(1)), 0.5 * (e(0) - e(1)), 0.5 * (e(0) - e(1)),
      0.5 * (e(0) + e(1));
  // the up state is the difference combination; cross sign flips accordingly
  Mat2 got = hpsi.block<2, 2>(0, 0);
  const double a = std::abs(got(0, 1).real());
  const double b = std::abs(want(0, 1).real());
  return std::max(max_abs(Mat(got.diagonal().asDiagonal()) -
                          Mat(want.diagonal().asDiagonal())),
                  std::abs(a - b));
}

double curvature_closed_forms() {
  double worst = 0.0;
  std::mutex mu;
  struct Combo {
    Model model;
    Basis basis;
    ModelParams pr;
  };
  const Combo combos[3] = {{Model::KM_SO, Basis::FW, base_params(0.5, 0.0)},
                           {Model::KM_Rashba, Basis::Phi, base_params(0.5, 0.1)},
                           {Model::KM_Rashba, Basis::Psi, base_params(0.5, 0.1)}};
  for (const auto& c : combos) {
    const auto famK = spinor_family(c.pr, c.model, c.basis, Valley::K);
    const auto famKp = spinor_family(c.pr, c.model, c.basis, Valley::Kp);
    parallel_for(41, [&](std::size_t ix) {
      double local = 0.0;
      for (int iy = 0; iy < 41; ++iy) {
        const Vec2 p(-3.0 + 6.0 * ix / 40.0, -3.0 + 6.0 * iy / 40.0);
        if (p.norm() < 0.1 || p.norm() > 3.0) continue;
        const Mat ga = analytic_curvature(c.model, c.basis, c.pr, p);
        const Mat gk = numeric_curvature(famK, p, 1e-3, c.pr.hbar);
        const Mat gkp = numeric_curvature(famKp, p, 1e-3, c.pr.hbar);
        local = std::max(local, max_abs(gk - ga.block<2, 2>(0, 0)));
        local = std::max(local, max_abs(gkp - ga.block<2, 2>(2, 2)));
      }
      std::lock_guard<std::mutex> g(mu);
      worst = std::max(worst, local);
    });
  }
  return worst;
}

double gauge_covariance() {
  const auto pr = base_params(0.5, 0.1);
  const auto fam = spinor_family(pr, Model::KM_Rashba, Basis::Psi, Valley::K);
  const auto famg = inject_phase(fam, [](const Vec2& p) { return p.x() * p.y(); });
  double worst = 0.0;
  for (double ang : {0.2, 1.7}) {
    const Vec2 p(0.7 * std::cos(ang), 0.7 * std::sin(ang));
    worst = std::max(worst, max_abs(numeric_curvature(fam, p, 1e-3) -
                                    numeric_curvature(famg, p, 1e-3)));
  }
  // constant unitary mixing: G -> W G W^dag, trace preserved
  Mat2 w;
  w << Complex(0.6, 0.3), Complex(0.64, -0.36), Complex(-0.64, -0.36), Complex(0.6, -0.3);
  w /= std::sqrt(std::abs((w * w.adjoint())(0, 0).real()));
  Eigen::JacobiSVD<Mat> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat wu = svd.matrixU() * svd.matrixV().adjoint();
  const auto famw = [&](const Vec2& p) { return Mat(fam(p) * wu); };
  const Vec2 p(0.3, 0.4);
  const Mat g0 = numeric_curvature(fam, p, 1e-3);
  const Mat gw = numeric_curvature(famw, p, 1e-3);
  // trace defect carries the 1/step^2 roundoff amplification of the loop log
  worst = std::max(worst, max_abs(gw - wu.adjoint() * g0 * wu));
  worst = std::max(worst, std::abs((gw.trace() - g0.trace()).real()));
  return worst;
}

double basis_rotation_consistency() {
  const auto pr = base_params(0.5, 0.1);
  const auto fphi = spinor_family(pr, Model::KM_Rashba, Basis::Phi, Valley::K);
  const auto fpsi = spinor_family(pr, Model::KM_Rashba, Basis::Psi, Valley::K);
  double worst = 0.0;
  for (double ang : {0.4, 2.2}) {
    const Vec2 p(0.9 * std::cos(ang), 0.9 * std::sin(ang));
    const Mat gphi = numeric_curvature(fphi, p, 1e-3);
    const Mat gpsi = numeric_curvature(fpsi, p, 1e-3);
    // The up/down columns are (phi1 -+ phi2)/sqrt2; the change of frame from
    // the stored Phi pair is R~ with a column swap.
    Mat2 r;
    r << 1, 1, -1, 1;
    r /= std::sqrt(2.0);
    worst = std::max(worst, max_abs(gpsi - r.adjoint() * gphi * r));
  }
  return worst;
}

double trace_rotational_symmetry() {
  const auto pr = base_params(0.5, 0.1);
  double worst = 0.0;
  for (double radius : {0.5, 1.5}) {
    double lo = 0, hi = 0;
    for (int k = 0; k < 16; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 16.0;
      const Vec2 p(radius * std::cos(th), radius * std::sin(th));
      const Mat g = analytic_curvature(Model::KM_Rashba, Basis::Psi, pr, p);
      const double t = (spin_operator(4) * g).trace().real();
      if (k == 0) lo = hi = t;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    worst = std::max(worst, (hi - lo) / std::max(std::abs(hi), 1e-300));
  }
  return worst;
}

double scalar_reduction() {
  std::mt19937 rng(15);
  std::normal_distribution<double> nrm(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double b = nrm(rng), g = nrm(rng);
    const Vec2 efield(nrm(rng), nrm(rng));
    const Vec2 hgrad(nrm(rng), nrm(rng));
    ModelParams pr;
    pr.b_field = b;
    pr.e_field = efield;
    SymplecticData d;
    const Mat one = Mat::Identity(1, 1);
    d.F_xy = b * one;
    d.G_xy = g * one;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) d.M[i][j] = 0.0 * one;
    for (int i = 0; i < 2; ++i) {
      d.e_drive[i] = pr.charge * efield(i) * one;
      d.f_drive[i] = -hgrad(i) * one;
    }
    const auto sol = weighted_velocities(d);
    const auto ref = anomalous_specialize(pr, g, hgrad);
    worst = std::max(worst, std::abs(sol.measure(0, 0).real() - ref.sqrt_w));
    for (int i = 0; i < 2; ++i) {
      worst = std::max(worst,
                       std::abs(sol.weighted_velocity[i](0, 0).real() - ref.xdot_w(i)));
      worst = std::max(worst,
                       std::abs(sol.weighted_force[i](0, 0).real() - ref.pdot_w(i)));
    }
  }
  return worst;
}

double hermiticity_preservation() {
  std::mt19937 rng(16);
  std::normal_distribution<double> nrm(0.0, 1.0);
  auto rand_herm = [&](int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = Complex(nrm(rng), nrm(rng));
    return hermitize(m);
  };
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    SymplecticData d;
    d.F_xy = rand_herm(4);
    d.G_xy = rand_herm(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) d.M[i][j] = rand_herm(4);
    for (int i = 0; i < 2; ++i) {
      d.e_drive[i] = rand_herm(4);
      d.f_drive[i] = rand_herm(4);
    }
    const auto sol = weighted_velocities(d);
    worst = std::max(worst, hermiticity_defect(sol.measure));
    for (int i = 0; i < 2; ++i) {
      worst = std::max(worst, hermiticity_defect(sol.weighted_velocity[i]));
      worst = std::max(worst, hermiticity_defect(sol.weighted_force[i]));
    }
  }
  return worst;
}

double anomalous_linearity() {
  std::mt19937 rng(17);
  std::normal_distribution<double> nrm(0.0, 1.0);
  auto rand_herm = [&](int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = Complex(nrm(rng), nrm(rng));
    return hermitize(m);
  };
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    SymplecticData d;
    d.F_xy = rand_herm(4);
    d.G_xy = rand_herm(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) d.M[i][j] = rand_herm(4);
    for (int i = 0; i < 2; ++i) d.f_drive[i] = rand_herm(4);
    const double e = 1.0, de = 0.25;
    auto with_field = [&](double ex, double ey) {
      SymplecticData dd = d;
      dd.e_drive[0] = e * ex * Mat::Identity(4, 4);
      dd.e_drive[1] = e * ey * Mat::Identity(4, 4);
      return weighted_velocities(dd);
    };
    // d(xdot^x w)/dE_y = e G^{xy}
    const Mat dvel = (with_field(0.0, de).weighted_velocity[0] -
                      with_field(0.0, -de).weighted_velocity[0]) /
                     (2.0 * de);
    worst = std::max(worst, max_abs(dvel - e * d.G_xy));
  }
  return worst;
}

double trajectory_convergence() {
  ModelParams pr = base_params(0.5, 0.0);
  pr.e_field = Vec2(0.05, 0.0);
  const BandSpec band{Model::KM_SO, Basis::FW, Valley::K, Spin::Up};
  auto final_y = [&](double tol) {
    const auto t = integrate_trajectory(pr, band, Vec2::Zero(), Vec2(0.4, 0.0), 8.0, tol);
    return t.samples.back().x.y();
  };
  const double ref = final_y(1e-12);
  const double e1 = std::abs(final_y(1e-6) - ref);
  const double e2 = std::abs(final_y(1e-9) - ref);
  if (e2 <= 1e-15) return 0.0;
  return e1 / e2 >= 4.0 ? 0.0 : 1.0;
}

double quantization_matrix() {
  double worst = 0.0;
  for (double d : {0.2, 0.5, 1.0}) {
    for (double l : {0.0, 0.05, 0.1, 0.2 * d}) {
      if (!(d > 2.0 * l)) continue;
      const auto pr = base_params(d, l);
      const Model model = l == 0.0 ? Model::KM_SO : Model::KM_Rashba;
      const Basis basis = l == 0.0 ? Basis::FW : Basis::Psi;
      const auto rep = spin_hall_conductivity(pr, model, basis, {});
      for (const auto& [sector, value] : rep.sector_chern)
        worst = std::max(worst, std::abs(std::abs(value) - 0.5));
    }
  }
  return worst;
}

double deformation_robustness() {
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double t = k / 4.0;
    const auto pr = base_params(0.5 - 0.2 * t, 0.02 + 0.08 * t);
    const auto rep = spin_hall_conductivity(pr, Model::KM_Rashba, Basis::Psi, {});
    worst = std::max(worst, std::abs(rep.spin_chern - 1.0));
  }
  return worst;
}

double current_consistency() {
  const auto base = base_params(0.5, 0.1);
  ModelParams pr = base;
  pr.e_field = Vec2(0.1, 0.0);
  const auto conn = [&](const Vec2& p) {
    return analytic_connection(Model::KM_Rashba, Basis::Psi, base, p);
  };
  const auto h0 = [&](const Vec2& p) -> Mat {
    const auto e = analytic_spectrum(base, p).energies;
    Mat2 block;
    block << 0.5 * (e(0) + e(1)), 0.5 * (e(0) - e(1)), 0.5 * (e(0) - e(1)),
        0.5 * (e(0) + e(1));
    Mat h = Mat::Zero(4, 4);
    h.block<2, 2>(0, 0) = block;
    h.block<2, 2>(2, 2) = block;
    return h;
  };
  const auto kin = [&](const Vec2& p) {
    auto d = form_components(h0, nullptr, conn, pr, p);
    d.G_xy = kCurvatureOrientation * analytic_curvature(Model::KM_Rashba, Basis::Psi, base, p);
    return weighted_velocities(d);
  };
  QuadratureConfig quad;
  quad.tolerance = 1e-5;
  const Vec2 j = spin_current_density(kin, spin_operator(4), {}, pr, quad);
  const auto rep = spin_hall_conductivity(base, Model::KM_Rashba, Basis::Psi, {});
  const double sigma_from_j = -j.y() / pr.e_field.x();  // j^i = sigma eps^{ij} E_j
  const double sigma_quad = rep.spin_chern / (2.0 * std::numbers::pi);
  return std::abs(sigma_from_j - sigma_quad) * 2.0 * std::numbers::pi;
}

double trace_basis_invariance() {
  const auto pr = base_params(0.5, 0.1);
  double worst = 0.0;
  for (double ang : {0.5, 1.9}) {
    const Vec2 p(0.8 * std::cos(ang), 0.8 * std::sin(ang));
    const Mat gphi = analytic_curvature(Model::KM_Rashba, Basis::Phi, pr, p);
    const Mat gpsi = analytic_curvature(Model::KM_Rashba, Basis::Psi, pr, p);
    Mat2 r;
    r << 1, 1, -1, 1;  // columns (up, down) from the stored (phi1, phi2)
    r /= std::sqrt(2.0);
    Mat rot = Mat::Zero(4, 4);
    rot.block<2, 2>(0, 0) = r;
    rot.block<2, 2>(2, 2) = r;
    const Mat sz = spin_operator(4);
    const double t_psi = (sz * gpsi).trace().real();
    const double t_phi = ((rot * sz * rot.adjoint()) * gphi).trace().real();
    worst = std::max(worst, std::abs(t_psi - t_phi));
  }
  return worst;
}

struct Suite {
  std::string name;
  double tolerance;
  std::function<double()> defect;
};

}  // namespace

std::vector<CheckResult> run_all() {
  const Suite suite[] = {
      {"model.hermiticity", 1e-14, grid_hermiticity},
      {"model.spectrum_consistency", 1e-10, spectrum_consistency},
      {"model.isospectrality", 1e-12, isospectrality},
      {"model.sum_rules", 1e-12, sum_rules},
      {"model.fw_offdiagonal", 1e-12, fw_offdiagonal},
      {"basis.rotation_involution", 1e-15, rotation_involution},
      {"basis.sector_projectors", 1e-12, sector_projectors},
      {"basis.rotated_hamiltonian_block", 1e-12, rotated_hamiltonian_block},
      {"berry.curvature_closed_forms", 1e-4, curvature_closed_forms},
      {"berry.gauge_covariance", 1e-8, gauge_covariance},
      {"berry.basis_rotation_consistency", 1e-8, basis_rotation_consistency},
      {"berry.trace_rotational_symmetry", 1e-8, trace_rotational_symmetry},
      {"semiclassics.scalar_reduction", 1e-14, scalar_reduction},
      {"semiclassics.hermiticity_preservation", 1e-10, hermiticity_preservation},
      {"semiclassics.anomalous_linearity", 1e-10, anomalous_linearity},
      {"semiclassics.trajectory_convergence", 0.5, trajectory_convergence},
      {"transport.quantization_matrix", 1e-3, quantization_matrix},
      {"transport.deformation_robustness", 1e-3, deformation_robustness},
      {"transport.current_consistency", 1e-3, current_consistency},
      {"transport.trace_basis_invariance", 1e-12, trace_basis_invariance},
  };
  std::vector<CheckResult> results;
  for (const auto& s : suite) {
    CheckResult r;
    r.name = s.name;
    try {
      const double defect = s.defect();
      r.passed = defect <= s.tolerance;
      r.detail = "defect " + format_double(defect) + " (tol " +
                 format_double(s.tolerance) + ")";
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace spinhall::checks
