#pragma once

#include "spinhall/semiclassics.hpp"

#include <map>
#include <string>

namespace spinhall {

struct SectorLabel {
  Valley valley = Valley::K;
  Spin spin = Spin::Up;

  std::string name() const {
    return (spin == Spin::Up ? std::string("up_") : std::string("down_")) +
           (valley == Valley::K ? "K" : "Kp");
  }
  friend bool operator<(const SectorLabel& a, const SectorLabel& b) {
    if (a.valley != b.valley) return a.valley < b.valley;
    return a.spin < b.spin;
  }
  friend bool operator==(const SectorLabel& a, const SectorLabel& b) {
    return a.valley == b.valley && a.spin == b.spin;
  }
};

inline const SectorLabel kAllSectors[4] = {{Valley::K, Spin::Up},
                                           {Valley::K, Spin::Down},
                                           {Valley::Kp, Spin::Up},
                                           {Valley::Kp, Spin::Down}};

struct Distribution {
  enum class Kind { Unity, FermiZeroT };
  Kind kind = Kind::Unity;
  double fermi_energy = 0.0;
};

struct QuadratureConfig {
  double p_min = kMomentumOriginGuard;
  double p_max = 0.0;       // 0 = auto: grown until the tail bound fits
  double tolerance = 1e-4;  // total budget, split between quadrature and tail
  double ring_check_tol = 1e-6;
  int max_intervals = 4000;
};

struct ChernResult {
  double value = 0.0;
  double quadrature_error = 0.0;
  double tail_bound = 0.0;
  double p_max_used = 0.0;
};

/// Orientation convention. The raw curvature of the spin-up sector integrates
/// to -1/2 per valley with eps^{xy} = +1 and the stored state phases; the
/// reported topological numbers are multiplied by this factor so that the
/// spin Chern number is +1 for delta_so > 0 (the sign convention adopted for
/// all reported conductivities). Raw values are recorded alongside.
inline constexpr double kCurvatureOrientation = -1.0;

struct ConventionRecord {
  double orientation = kCurvatureOrientation;
  std::string epsilon = "eps^{xy} = +1";
  double raw_spin_chern = 0.0;
  std::string note =
      "sector curvatures multiplied by `orientation` before quadrature so "
      "that C_s = +1 in the gapped regime; raw values recorded";
};

struct TopologyReport {
  std::map<SectorLabel, double> sector_chern;      // oriented
  std::map<SectorLabel, double> raw_sector_chern;  // as integrated
  double chern_up = 0.0;
  double chern_down = 0.0;
  double spin_chern = 0.0;
  double spin_chern_K = 0.0;   // per-valley contributions; they sum to C_s
  double spin_chern_Kp = 0.0;
  double sigma_sh = 0.0;                 // units e/(2 pi)
  std::optional<double> sigma_ah;        // units e^2/(2 pi hbar), when computed
  double quadrature_error = 0.0;
  ConventionRecord convention;
};

/// Radial Chern quadrature of a scalar curvature provider:
///   N = (1/(2 pi hbar)) * 2 pi * Int p G(p) dp
/// over [p_min, p_max]. Rotational symmetry of the provider is asserted on
/// sample rings; the truncation tail is bounded from the |p|^-3 curvature
/// decay via |Int_{P}^inf p G dp| <= |G(P)| P^2 and p_max is grown until the
/// bound fits inside the tolerance budget.
ChernResult chern_number(const std::function<double(const Vec2&)>& curvature,
                         const SectorLabel& sector, const QuadratureConfig& quad,
                         double hbar = 1.0);

/// C_s = 1/2 (N_up - N_down), summed over valleys. All four sectors required.
double spin_chern(const std::map<SectorLabel, double>& sector_chern);

/// Closed-form curvature of one (valley, spin) sector, unoriented. The basis
/// must be spin-diagonal: Phi is rejected with the trace diagnostic.
std::function<double(const Vec2&)> sector_curvature(const ModelParams& params,
                                                    Model model, Basis basis,
                                                    const SectorLabel& sector);

/// Full topological report: per-sector Chern numbers, spin Chern number and
/// sigma_SH = (e/2pi) C_s (reported in units of e/2pi).
TopologyReport spin_hall_conductivity(const ModelParams& params, Model model,
                                      Basis basis, const Distribution& dist,
                                      QuadratureConfig quad = {});

struct OneBandModel {
  std::function<double(const Vec2&)> curvature;
  std::function<double(double)> energy;  // radial dispersion, for Fermi cuts
};

/// sigma_AH in units e^2/(2 pi hbar); equals the band Chern number under the
/// unity distribution.
double anomalous_hall_conductivity(const OneBandModel& band, const Distribution& dist,
                                   QuadratureConfig quad = {}, double hbar = 1.0);

/// j_z^a = (hbar/2) Int d^2p/(2 pi hbar)^2 Tr[S_z xdot^a w~ f].
/// The kinematics provider returns the weighted velocities at p; S_z must be
/// diagonal in the provider's basis.
Vec2 spin_current_density(const std::function<KinematicSolution(const Vec2&)>& kin,
                          const Mat& s_z, const Distribution& dist,
                          const ModelParams& params, QuadratureConfig quad = {});

/// Record of the curvature sign bookkeeping across the two model regimes:
/// the lambda_r -> 0 limit of the Rashba-case spin-up curvature against the
/// lambda_r = 0 closed form, with both the measured-label and the
/// swapped-label readings, plus the resulting spin Chern numbers.
struct SignConsistencyReport {
  double g_psi_up_limit = 0.0;   // lim_{lambda->0} G_psi(up) at the probe point
  double g_fw_up = 0.0;          // lambda = 0 closed form at the probe point
  double relative_sign = 0.0;    // sign(g_psi_up_limit / g_fw_up)
  double relative_sign_swapped_labels = 0.0;
  double cs_km_so = 0.0;       // oriented spin Chern, lambda = 0
  double cs_km_rashba = 0.0;   // oriented spin Chern, lambda > 0
  double orientation = kCurvatureOrientation;
};

SignConsistencyReport sign_consistency_report(const ModelParams& params,
                                              double probe_p = 0.5);

}  // namespace spinhall
