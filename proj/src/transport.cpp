#include "spinhall/transport.hpp"

#include "spinhall/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace spinhall {

namespace {

constexpr double kGapGuard = 1e-6;

void check_gap(const ModelParams& params) {
  if (std::abs(params.delta_so - 2.0 * params.lambda_r) < kGapGuard)
    throw GapClosing("transport: |delta_so - 2 lambda_r| < 1e-6, gap closes");
}

// Relative spread of the provider over rings; the radial quadrature assumes
// the curvature depends on |p| only.
void check_rotational_symmetry(const std::function<double(const Vec2&)>& curv,
                               double p_lo, double p_hi, double tol) {
  for (double r : {p_lo, std::sqrt(p_lo * p_hi), p_hi}) {
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 8.0 + 0.1;
      const double g = curv(Vec2(r * std::cos(th), r * std::sin(th)));
      if (k == 0) lo = hi = g;
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    if ((hi - lo) / scale > tol)
      throw NotRotationallySymmetric(
          "chern_number: ring spread " + std::to_string((hi - lo) / scale) +
          " at |p| = " + std::to_string(r));
  }
}

double auto_p_max(const QuadratureConfig& quad,
                  const std::function<double(const Vec2&)>& curv, double hbar,
                  double start) {
  const double tail_budget = 0.5 * quad.tolerance;
  double p = std::max(start, 10.0 * quad.p_min);
  for (int iter = 0; iter < 60; ++iter) {
    const double bound = std::abs(curv(Vec2(p, 0.0))) * p * p / hbar;
    if (bound <= tail_budget) return p;
    p *= 2.0;
    if (p > 1e9)
      throw TailBoundExceedsTolerance(
          "chern_number: curvature tail does not fit the tolerance budget");
  }
  throw TailBoundExceedsTolerance("chern_number: tail bound iteration diverged");
}

}  // namespace

ChernResult chern_number(const std::function<double(const Vec2&)>& curvature,
                         const SectorLabel& sector, const QuadratureConfig& quad,
                         double hbar) {
  (void)sector;
  if (!(quad.p_min > 0.0))
    throw std::invalid_argument("chern_number: p_min must be > 0");

  ChernResult out;
  out.p_max_used = quad.p_max > quad.p_min
                       ? quad.p_max
                       : auto_p_max(quad, curvature, hbar, 50.0);
  if (out.p_max_used <= quad.p_min)
    throw std::invalid_argument("chern_number: p_max must exceed p_min");

  check_rotational_symmetry(curvature, std::max(quad.p_min * 10.0, 1e-3),
                            out.p_max_used, quad.ring_check_tol);

  const auto radial = [&](double p) { return p * curvature(Vec2(p, 0.0)); };
  const auto q = integrate_adaptive(radial, quad.p_min, out.p_max_used,
                                    0.5 * quad.tolerance * hbar, 1e-12,
                                    quad.max_intervals);
  out.value = q.value / hbar;
  out.quadrature_error = q.error / hbar;
  out.tail_bound =
      std::abs(curvature(Vec2(out.p_max_used, 0.0))) * out.p_max_used *
      out.p_max_used / hbar;
  return out;
}

double spin_chern(const std::map<SectorLabel, double>& sector_chern) {
  for (const auto& s : kAllSectors)
    if (!sector_chern.count(s))
      throw MissingSector("spin_chern: missing sector " + s.name());
  const double n_up = sector_chern.at({Valley::K, Spin::Up}) +
                      sector_chern.at({Valley::Kp, Spin::Up});
  const double n_down = sector_chern.at({Valley::K, Spin::Down}) +
                        sector_chern.at({Valley::Kp, Spin::Down});
  return 0.5 * (n_up - n_down);
}

std::function<double(const Vec2&)> sector_curvature(const ModelParams& params,
                                                    Model model, Basis basis,
                                                    const SectorLabel& sector) {
  params.validate();
  if (basis == Basis::Phi)
    throw BasisNotSpinDiagonal(
        "the energy eigenbasis carries a purely off-diagonal curvature: "
        "Tr[S_z G_Phi^{xy}] = 0, so a diagonal distribution yields no spin "
        "Hall response; use a spin-diagonal basis");
  if (model == Model::KM_SO && basis != Basis::FW && basis != Basis::Psi)
    throw UnsupportedCombination("sector_curvature: unsupported basis for KM_SO");
  if (model == Model::KM_Rashba && basis == Basis::FW)
    throw UnsupportedCombination(
        "sector_curvature: no closed Foldy-Wouthuysen form at lambda_r != 0");

  // Closed forms are valley-uniform; the spin sign selects the diagonal entry.
  const double sign = sector.spin == Spin::Up ? 1.0 : -1.0;
  ModelParams pr = params;
  if (model == Model::KM_SO) {
    return [pr, sign](const Vec2& p) {
      const double E = std::hypot(pr.delta_so, pr.v_f * p.norm());
      return sign * (-pr.hbar * pr.v_f * pr.v_f * pr.delta_so / (2.0 * E * E * E));
    };
  }
  return [pr, sign](const Vec2& p) {
    const double pn = p.norm();
    return sign * (2.0 * pr.hbar / pn) * dp_n1n2(pr, pn);
  };
}

TopologyReport spin_hall_conductivity(const ModelParams& params, Model model,
                                      Basis basis, const Distribution& dist,
                                      QuadratureConfig quad) {
  params.validate();
  check_gap(params);
  if (model == Model::KM_SO && params.lambda_r != 0.0)
    throw UnsupportedCombination("spin_hall_conductivity: KM_SO requires lambda_r = 0");

  TopologyReport rep;
  for (const auto& sector : kAllSectors) {
    auto curv = sector_curvature(params, model, basis, sector);
    QuadratureConfig q = quad;
    if (dist.kind == Distribution::Kind::FermiZeroT) {
      // Restrict to band energies below E_F; the positive band dispersion is
      // monotone in |p|.
      BandSpec band{model, basis, sector.valley, sector.spin};
      if (band_energy(params, band, quad.p_min) >= dist.fermi_energy) {
        rep.raw_sector_chern[sector] = 0.0;
        rep.sector_chern[sector] = 0.0;
        continue;
      }
      double lo = quad.p_min, hi = std::max(1.0, 10.0 * (quad.p_max > 0 ? quad.p_max : 1.0));
      while (band_energy(params, band, hi) < dist.fermi_energy && hi < 1e12) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (band_energy(params, band, mid) < dist.fermi_energy ? lo : hi) = mid;
      }
      q.p_max = lo;
    }
    const auto res = chern_number(curv, sector, q, params.hbar);
    rep.raw_sector_chern[sector] = res.value;
    rep.sector_chern[sector] = kCurvatureOrientation * res.value;
    rep.quadrature_error += res.quadrature_error + res.tail_bound;
  }
  rep.chern_up = rep.sector_chern.at({Valley::K, Spin::Up}) +
                 rep.sector_chern.at({Valley::Kp, Spin::Up});
  rep.chern_down = rep.sector_chern.at({Valley::K, Spin::Down}) +
                   rep.sector_chern.at({Valley::Kp, Spin::Down});
  rep.spin_chern = spin_chern(rep.sector_chern);
  rep.spin_chern_K = 0.5 * (rep.sector_chern.at({Valley::K, Spin::Up}) -
                            rep.sector_chern.at({Valley::K, Spin::Down}));
  rep.spin_chern_Kp = 0.5 * (rep.sector_chern.at({Valley::Kp, Spin::Up}) -
                             rep.sector_chern.at({Valley::Kp, Spin::Down}));
  rep.convention.raw_spin_chern = spin_chern(rep.raw_sector_chern);
  rep.sigma_sh = rep.spin_chern;  // sigma_SH = (e/2pi) C_s, reported in e/2pi
  return rep;
}

double anomalous_hall_conductivity(const OneBandModel& band, const Distribution& dist,
                                   QuadratureConfig quad, double hbar) {
  if (!band.curvature) throw std::invalid_argument("anomalous_hall_conductivity: no curvature");
  QuadratureConfig q = quad;
  if (dist.kind == Distribution::Kind::FermiZeroT) {
    if (!band.energy)
      throw std::invalid_argument("anomalous_hall_conductivity: Fermi cut needs a dispersion");
    if (band.energy(q.p_min) >= dist.fermi_energy) return 0.0;  // empty band
    double lo = q.p_min, hi = 1.0;
    while (band.energy(hi) < dist.fermi_energy && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (band.energy(mid) < dist.fermi_energy ? lo : hi) = mid;
    }
    q.p_max = lo;
  }
  const auto res = chern_number(band.curvature, {Valley::K, Spin::Up}, q, hbar);
  return res.value;
}

Vec2 spin_current_density(const std::function<KinematicSolution(const Vec2&)>& kin,
                          const Mat& s_z, const Distribution& dist,
                          const ModelParams& params, QuadratureConfig quad) {
  const double offdiag = max_abs(s_z - Mat(s_z.diagonal().asDiagonal()));
  if (offdiag > 1e-12)
    throw BasisNotSpinDiagonal(
        "spin_current_density: S_z is not diagonal in this basis "
        "(the energy eigenbasis gives Tr[S_z G_Phi] = 0 against any diagonal "
        "distribution); rotate to the spin-adapted basis first");
  if (dist.kind == Distribution::Kind::FermiZeroT)
    throw std::invalid_argument(
        "spin_current_density: only the unity distribution over positive "
        "bands is implemented");

  const int n_theta = 64;
  const double two_pi_hbar = 2.0 * std::numbers::pi * params.hbar;
  const double prefactor = 0.5 * params.hbar / (two_pi_hbar * two_pi_hbar);

  const auto radial = [&](int a, double p) {
    double acc = 0.0;
    for (int k = 0; k < n_theta; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n_theta;
      const Vec2 q(p * std::cos(th), p * std::sin(th));
      const auto sol = kin(q);
      acc += (s_z * sol.weighted_velocity[a]).trace().real();
    }
    return p * acc * (2.0 * std::numbers::pi / n_theta);
  };

  // The 1/p^2 decay of the anomalous part makes the truncated tail scale as
  // |radial(P)| P; grow P until it fits the budget.
  double p_max = quad.p_max > quad.p_min ? quad.p_max : 50.0;
  if (quad.p_max <= quad.p_min) {
    for (int it = 0; it < 40; ++it) {
      const double tail = prefactor * p_max *
                          std::max(std::abs(radial(0, p_max)), std::abs(radial(1, p_max)));
      if (tail <= 0.25 * quad.tolerance) break;
      p_max *= 2.0;
      if (p_max > 1e9)
        throw TailBoundExceedsTolerance("spin_current_density: tail does not decay");
    }
  }

  Vec2 current = Vec2::Zero();
  for (int a = 0; a < 2; ++a) {
    const auto r = integrate_adaptive([&](double p) { return radial(a, p); },
                                      quad.p_min, p_max,
                                      0.5 * quad.tolerance / prefactor, 1e-10,
                                      quad.max_intervals);
    current(a) = prefactor * r.value;
  }
  return current;
}

SignConsistencyReport sign_consistency_report(const ModelParams& params,
                                              double probe_p) {
  SignConsistencyReport rep;
  ModelParams tiny = params;
  tiny.lambda_r = 1e-7;
  const double g_lim = -2.0 * tiny.hbar / probe_p * dp_n1n2(tiny, probe_p);
  const double E = std::hypot(params.delta_so, params.v_f * probe_p);
  const double g_fw =
      -params.hbar * params.v_f * params.v_f * params.delta_so / (2.0 * E * E * E);

  // Measured labels: the up-labeled band carries -g; under the swapped
  // (literature) labels the same entry is read as spin-up.
  rep.g_psi_up_limit = -g_lim;
  rep.g_fw_up = g_fw;
  rep.relative_sign = rep.g_psi_up_limit * rep.g_fw_up > 0 ? 1.0 : -1.0;
  rep.relative_sign_swapped_labels = -rep.relative_sign;

  ModelParams so = params;
  so.lambda_r = 0.0;
  rep.cs_km_so =
      spin_hall_conductivity(so, Model::KM_SO, Basis::FW, {}).spin_chern;
  ModelParams ra = params;
  if (ra.lambda_r <= 0.0) ra.lambda_r = 0.05 * std::max(ra.delta_so, 1e-2);
  rep.cs_km_rashba =
      spin_hall_conductivity(ra, Model::KM_Rashba, Basis::Psi, {}).spin_chern;
  return rep;
}

}  // namespace spinhall
