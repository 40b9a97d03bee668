// Acceptance suite: end-to-end checks of the toolkit's quantitative claims.
// Each criterion prints one pass/fail line; the binary exits nonzero if any
// criterion fails.

#include "spinhall/basis.hpp"
#include "spinhall/berry.hpp"
#include "spinhall/parallel.hpp"
#include "spinhall/quadrature.hpp"
#include "spinhall/semiclassics.hpp"
#include "spinhall/transport.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace spinhall;

namespace {

ModelParams params(double d, double l) {
  ModelParams p;
  p.delta_so = d;
  p.lambda_r = l;
  return p;
}

struct Criterion {
  std::string name;
  double time_limit_s;  // 0 = untimed
  std::function<bool(std::string&)> run;
};

// 1. Spin Chern number in the Rashba regime.
bool crit_spin_chern_rashba(std::string& detail) {
  bool ok = true;
  std::ostringstream os;
  for (double l : {0.05, 0.1}) {
    const auto rep = spin_hall_conductivity(params(0.5, l), Model::KM_Rashba, Basis::Psi, {});
    ok = ok && std::abs(rep.spin_chern - 1.0) < 1e-3;
    os << "C_s(lambda=" << l << ") = " << rep.spin_chern << "  ";
  }
  detail = os.str();
  return ok;
}

// 2. Spin Hall conductivity in both regimes.
bool crit_sigma_sh(std::string& detail) {
  const auto so = spin_hall_conductivity(params(0.5, 0.0), Model::KM_SO, Basis::FW, {});
  const auto ra = spin_hall_conductivity(params(0.5, 0.1), Model::KM_Rashba, Basis::Psi, {});
  std::ostringstream os;
  os << "sigma_sh/(e/2pi): km-so = " << so.sigma_sh << ", km-rashba = " << ra.sigma_sh;
  detail = os.str();
  return std::abs(so.sigma_sh - 1.0) < 1e-3 && std::abs(ra.sigma_sh - 1.0) < 1e-3;
}

// 3. Sector half-quantization across the coupling matrix.
bool crit_sector_quantization(std::string& detail) {
  double worst = 0.0;
  int points = 0;
  for (double d : {0.2, 0.5, 1.0}) {
    std::vector<double> ls = {0.0, 0.05, 0.1, 0.2 * d};
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    for (double l : ls) {
      if (!(d > 2.0 * l)) continue;
      ++points;
      const Model model = l == 0.0 ? Model::KM_SO : Model::KM_Rashba;
      const Basis basis = l == 0.0 ? Basis::FW : Basis::Psi;
      const auto rep = spin_hall_conductivity(params(d, l), model, basis, {});
      for (const auto& [sector, value] : rep.sector_chern)
        worst = std::max(worst, std::abs(std::abs(value) - 0.5));
    }
  }
  std::ostringstream os;
  os << points << " parameter points, max ||N|-1/2| = " << worst;
  detail = os.str();
  return worst < 1e-3;
}

// 4. Closed-form curvatures against the Wilson-loop numerics.
bool crit_curvature_closed_form(std::string& detail) {
  struct Combo {
    Model model;
    Basis basis;
    ModelParams pr;
  };
  const Combo combos[3] = {{Model::KM_SO, Basis::FW, params(0.5, 0.0)},
                           {Model::KM_Rashba, Basis::Phi, params(0.5, 0.1)},
                           {Model::KM_Rashba, Basis::Psi, params(0.5, 0.1)}};
  double worst = 0.0;
  std::mutex mu;
  for (const auto& c : combos) {
    const auto famK = spinor_family(c.pr, c.model, c.basis, Valley::K);
    const auto famKp = spinor_family(c.pr, c.model, c.basis, Valley::Kp);
    parallel_for(41, [&](std::size_t ix) {
      double local = 0.0;
      for (int iy = 0; iy < 41; ++iy) {
        const Vec2 p(-3.0 + 6.0 * ix / 40.0, -3.0 + 6.0 * iy / 40.0);
        if (p.norm() < 0.1 || p.norm() > 3.0) continue;
        const Mat ga = analytic_curvature(c.model, c.basis, c.pr, p);
        local = std::max(local, max_abs(numeric_curvature(famK, p, 1e-3) -
                                        ga.block<2, 2>(0, 0)));
        local = std::max(local, max_abs(numeric_curvature(famKp, p, 1e-3) -
                                        ga.block<2, 2>(2, 2)));
      }
      std::lock_guard<std::mutex> g(mu);
      worst = std::max(worst, local);
    });
  }
  std::ostringstream os;
  os << "max |G_numeric - G_analytic| = " << worst << " over 41x41, three forms";
  detail = os.str();
  return worst < 1e-4;
}

// 5. Vanishing spin trace in the energy eigenbasis.
bool crit_phi_trace(std::string& detail) {
  const auto pr = params(0.5, 0.1);
  const Mat sz = spin_operator(4);
  double worst = 0.0;
  for (int ix = 0; ix < 41; ++ix)
    for (int iy = 0; iy < 41; ++iy) {
      const Vec2 p(-3.0 + 6.0 * ix / 40.0, -3.0 + 6.0 * iy / 40.0);
      if (p.norm() < 0.1) continue;
      const Mat g = analytic_curvature(Model::KM_Rashba, Basis::Phi, pr, p);
      worst = std::max(worst, std::abs((sz * g).trace()));
    }
  std::ostringstream os;
  os << "max |Tr[S_z G_Phi]| = " << worst;
  detail = os.str();
  return worst < 1e-12;
}

// 6. Matrix Pfaffian reduces to the scalar measure.
bool crit_pfaffian_scalar(std::string& detail) {
  std::mt19937 rng(31);
  std::normal_distribution<double> nrm;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double b = nrm(rng), g = nrm(rng);
    SymplecticData d;
    const Mat one = Mat::Identity(1, 1);
    d.F_xy = b * one;
    d.G_xy = g * one;
    for (auto& row : d.M)
      for (auto& m : row) m = 0.0 * one;
    d.e_drive = {0.0 * one, 0.0 * one};
    d.f_drive = {0.0 * one, 0.0 * one};
    worst = std::max(worst,
                     std::abs(pfaffian_measure(d)(0, 0).real() - (1.0 + b * g)));
  }
  std::ostringstream os;
  os << "max |w~ - (1 + B G)| = " << worst << " over 100 tuples";
  detail = os.str();
  return worst < 1e-14;
}

// 7. Closed-form eigenstates across the grid, plus energy sum rules.
bool crit_eigen_residuals(std::string& detail) {
  const auto pr = params(0.5, 0.1);
  double worst_res = 0.0, worst_sum = 0.0;
  std::mutex mu;
  parallel_for(101, [&](std::size_t ix) {
    double res = 0.0, sum = 0.0;
    for (int iy = 0; iy < 101; ++iy) {
      const Vec2 p(-3.0 + 6.0 * ix / 100.0, -3.0 + 6.0 * iy / 100.0);
      if (p.norm() <= kMomentumOriginGuard) continue;  // gauge-singular origin
      const auto e = analytic_spectrum(pr, p).energies;
      sum = std::max(sum, std::abs(e(0) + e(2) - 2.0 * pr.lambda_r));
      sum = std::max(sum, std::abs(e(1) + e(3) + 2.0 * pr.lambda_r));
      for (Valley v : {Valley::K, Valley::Kp}) {
        const Mat h = build_hamiltonian(pr, p, v).entries;
        const auto set = analytic_eigenstates(pr, p, v);
        for (const auto& s : set.spinors)
          res = std::max(res, (h * s.state - s.energy * s.state).norm());
      }
    }
    std::lock_guard<std::mutex> g(mu);
    worst_res = std::max(worst_res, res);
    worst_sum = std::max(worst_sum, sum);
  });
  std::ostringstream os;
  os << "max residual = " << worst_res << ", max sum-rule defect = " << worst_sum;
  detail = os.str();
  return worst_res < 1e-10 && worst_sum < 1e-12;
}

// 8. Foldy-Wouthuysen diagonalization residual.
bool crit_fw_diagonalization(std::string& detail) {
  const auto pr = params(0.5, 0.0);
  double worst = 0.0;
  std::mutex mu;
  parallel_for(101, [&](std::size_t ix) {
    double local = 0.0;
    for (int iy = 0; iy < 101; ++iy) {
      const Vec2 p(-3.0 + 6.0 * ix / 100.0, -3.0 + 6.0 * iy / 100.0);
      const Mat8 u = fw_transform(pr, p);
      Mat d = u * build_hamiltonian(pr, p, Valley::Full).entries * u.adjoint();
      d.diagonal().setZero();
      local = std::max(local, max_abs(d));
    }
    std::lock_guard<std::mutex> g(mu);
    worst = std::max(worst, local);
  });
  std::ostringstream os;
  os << "max off-diagonal residual = " << worst;
  detail = os.str();
  return worst < 1e-12;
}

// 9. Numeric Chern number is gauge invariant.
bool crit_gauge_invariance(std::string& detail) {
  const auto pr = params(0.5, 0.1);
  auto up_family = [&](bool injected) {
    SpinorFamily fam = spinor_family(pr, Model::KM_Rashba, Basis::Psi, Valley::K);
    auto one_band = [fam](const Vec2& p) { return Mat(fam(p).col(0)); };
    if (!injected) return SpinorFamily(one_band);
    return inject_phase(one_band, [](const Vec2& p) { return p.x() * p.y(); });
  };
  QuadratureConfig quad;
  quad.p_max = 30.0;          // identical truncation on both runs
  quad.ring_check_tol = 1e-3;  // plaquette anisotropy of the numeric provider
  auto chern_of = [&](bool injected) {
    const auto fam = up_family(injected);
    const auto curv = [fam](const Vec2& p) {
      return numeric_curvature(fam, p, 1e-3)(0, 0).real();
    };
    return chern_number(curv, {Valley::K, Spin::Up}, quad).value;
  };
  const double n0 = chern_of(false);
  const double n1 = chern_of(true);
  std::ostringstream os;
  os << "N = " << n0 << ", N_gauged = " << n1 << ", |diff| = " << std::abs(n1 - n0);
  detail = os.str();
  return std::abs(n1 - n0) < 1e-6;
}

// 10. The weighted velocity is linear in the field with slope e G.
bool crit_anomalous_linearity(std::string& detail) {
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  std::normal_distribution<double> nrm;
  const auto pr = params(0.5, 0.1);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Vec2 p(uni(rng), uni(rng));
    if (p.norm() < 0.1) p = Vec2(0.5, -0.3);
    SymplecticData d;
    const Mat g = analytic_curvature(Model::KM_Rashba, Basis::Psi, pr, p);
    d.G_xy = g;
    d.F_xy = nrm(rng) * Mat::Identity(4, 4);
    for (auto& row : d.M)
      for (auto& m : row) m = Mat::Zero(4, 4);
    const auto conn = analytic_connection(Model::KM_Rashba, Basis::Psi, pr, p);
    const auto e = analytic_spectrum(pr, p).energies;
    for (int i = 0; i < 2; ++i)
      d.f_drive[i] = -0.5 * (e(0) + e(1)) * Mat::Identity(4, 4) -
                     kI * commutator(0.5 * (e(0) + e(1)) * Mat::Identity(4, 4), conn[i]);
    const double de = 0.31;
    auto vel = [&](int i, double ex, double ey) {
      SymplecticData dd = d;
      dd.e_drive[0] = ex * Mat::Identity(4, 4);
      dd.e_drive[1] = ey * Mat::Identity(4, 4);
      return weighted_velocities(dd).weighted_velocity[i];
    };
    // d(xdot^x w)/dE_y = +G, d(xdot^y w)/dE_x = -G
    worst = std::max(worst, max_abs((vel(0, 0, de) - vel(0, 0, -de)) / (2 * de) - g));
    worst = std::max(worst, max_abs((vel(1, de, 0) - vel(1, -de, 0)) / (2 * de) + g));
  }
  std::ostringstream os;
  os << "max |d(xdot w)/dE - e G| = " << worst << " at 20 random momenta";
  detail = os.str();
  return worst < 1e-10;
}

// 11. Sign bookkeeping across the two regimes.
bool crit_sign_consistency(std::string& detail) {
  const auto rep = sign_consistency_report(params(0.5, 0.1));
  const auto nearly = spin_hall_conductivity(params(0.5, 1e-3), Model::KM_Rashba,
                                             Basis::Psi, {});
  std::ostringstream os;
  os << "lim G_psi_up = " << rep.g_psi_up_limit << ", G_fw_up = " << rep.g_fw_up
     << ", relative sign (measured labels) = " << rep.relative_sign
     << ", (swapped labels) = " << rep.relative_sign_swapped_labels
     << "; C_s: km-so = " << rep.cs_km_so << ", km-rashba = " << rep.cs_km_rashba
     << ", lambda->0 = " << nearly.spin_chern;
  detail = os.str();
  return std::abs(rep.cs_km_so - 1.0) < 1e-3 &&
         std::abs(rep.cs_km_rashba - 1.0) < 1e-3 &&
         std::abs(nearly.spin_chern - rep.cs_km_so) < 1e-3;
}

// 12. Trajectory physics.
bool crit_trajectories(std::string& detail) {
  auto pr = params(0.5, 0.0);
  const BandSpec up{Model::KM_SO, Basis::FW, Valley::K, Spin::Up};
  const BandSpec dn{Model::KM_SO, Basis::FW, Valley::K, Spin::Down};

  const auto free = integrate_trajectory(pr, up, Vec2::Zero(), Vec2(0.4, 0.1), 10.0, 1e-10);
  const double dp = (free.samples.back().p - Vec2(0.4, 0.1)).norm();

  pr.e_field = Vec2(0.1, 0.0);
  const auto tu = integrate_trajectory(pr, up, Vec2::Zero(), Vec2(0.3, 0.0), 5.0, 1e-10);
  const auto td = integrate_trajectory(pr, dn, Vec2::Zero(), Vec2(0.3, 0.0), 5.0, 1e-10);
  const double asym = std::abs(tu.samples.back().x.y() + td.samples.back().x.y());

  std::ostringstream os;
  os << "force-free |dp| = " << dp << ", up+down transverse drift sum = " << asym
     << " (drifts " << tu.samples.back().x.y() << " / " << td.samples.back().x.y() << ")";
  detail = os.str();
  return dp < 1e-10 && asym < 1e-8;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1  spin Chern number, Rashba case (C_s = 1 within 1e-3)", 5.0, crit_spin_chern_rashba},
      {"2  spin Hall conductivity (sigma = e/2pi in both regimes)", 5.0, crit_sigma_sh},
      {"3  sector half-quantization across the coupling matrix", 30.0, crit_sector_quantization},
      {"4  curvature closed forms vs numerics (1e-4 pointwise)", 60.0, crit_curvature_closed_form},
      {"5  Tr[S_z G_Phi] = 0 in the energy eigenbasis", 0.0, crit_phi_trace},
      {"6  matrix Pfaffian reduces to 1 + B G (1e-14)", 0.0, crit_pfaffian_scalar},
      {"7  eigenstate residuals and energy sum rules on the grid", 0.0, crit_eigen_residuals},
      {"8  Foldy-Wouthuysen diagonalization residual (1e-12)", 0.0, crit_fw_diagonalization},
      {"9  numeric Chern number gauge invariance (1e-6)", 0.0, crit_gauge_invariance},
      {"10 anomalous velocity linear in the field, slope e G (1e-10)", 0.0, crit_anomalous_linearity},
      {"11 sign-consistency report and C_s continuity", 0.0, crit_sign_consistency},
      {"12 trajectory physics: spin symmetry and momentum conservation", 0.0, crit_trajectories},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      ok = false;
      detail += " [exceeded " + std::to_string(c.time_limit_s) + " s limit]";
    }
    std::printf("[%s] criterion %s  (%.2fs)  %s\n", ok ? "PASS" : "FAIL",
                c.name.c_str(), secs, detail.c_str());
    if (!ok) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
