#pragma once

#include "spinhall/berry.hpp"

#include <array>
#include <functional>
#include <vector>

namespace spinhall {

/// Components of the matrix-valued symplectic two-form at one phase-space
/// point, plus the drive terms entering the equations of motion:
///   F_xy : mixed external-magnetic + position-space Berry curvature
///   M^a_b: mixed position/momentum two-form (zero when a_a = 0 and A^a is
///          x-independent)
///   G_xy : momentum-space Berry curvature including the commutator term
///   e_a  = e E_a 1 - i [H0, a_a]
///   f^a  = -dH0/dp_a - i [H0, A^a]
struct SymplecticData {
  Mat F_xy;
  Mat G_xy;
  std::array<std::array<Mat, 2>, 2> M;  // M[a][b] = M^a_b
  std::array<Mat, 2> e_drive;
  std::array<Mat, 2> f_drive;
};

using MatrixProvider = std::function<Mat(const Vec2&)>;
using ConnectionProvider = std::function<std::array<Mat, 2>(const Vec2&)>;

/// Assemble the symplectic data at momentum p. H0 and the connections are
/// providers so the derivative terms can be formed (central differences with
/// the given step). conn_x may be empty: the shipped models have no
/// position-space Berry connection, in which case F reduces to the external
/// part F_xy = -e B and M vanishes.
SymplecticData form_components(const MatrixProvider& h0,
                               const ConnectionProvider& conn_x,
                               const ConnectionProvider& conn_p,
                               const ModelParams& params, const Vec2& p,
                               double step = 1e-6);

/// Matrix-valued Pfaffian of the symplectic form,
///   w~ = 1 + M^i_i + (1/2){F_xy, G^{xy}}.
/// Reduces to sqrt(w) = 1 + B G^{xy} for scalar data with F_xy = B.
Mat pfaffian_measure(const SymplecticData& data);

struct KinematicSolution {
  Mat measure;                           // w~_{1/2}
  std::array<Mat, 2> weighted_velocity;  // xdot^i w~ (product, not divided)
  std::array<Mat, 2> weighted_force;     // w~ pdot_i
};

/// Solutions of the matrix-valued equations of motion:
///   xdot^i w~ = -f^i - {M^i_j, f^j} + {M^j_j, f^i} + (1/2){G^{ij}, e_j}
///   w~ pdot_i =  e_i + {M^j_i, e_j} - {M^j_j, e_i} - (1/2){F_ij, f^j}
/// Products are returned as-is; currents consume xdot^i w~ directly.
KinematicSolution weighted_velocities(const SymplecticData& data);

struct AnomalousKinematics {
  double sqrt_w = 1.0;
  Vec2 xdot_w = Vec2::Zero();  // sqrt(w) xdot
  Vec2 pdot_w = Vec2::Zero();  // sqrt(w) pdot
};

/// Abelian single-band specialization:
///   sqrt(w)        = 1 + B G^{xy}
///   sqrt(w) xdot^i = dH/dp_i + e eps^{ij} E_j G^{xy}
///   sqrt(w) pdot_i = e E_i + eps_ij dH/dp_j B
AnomalousKinematics anomalous_specialize(const ModelParams& params, double g_xy,
                                         const Vec2& h_grad);

struct BandSpec {
  Model model = Model::KM_SO;
  Basis basis = Basis::FW;
  Valley valley = Valley::K;
  Spin spin = Spin::Up;
};

struct Trajectory {
  BandSpec band;
  struct Sample {
    double t;
    Vec2 x;
    Vec2 p;
  };
  std::vector<Sample> samples;
  int steps = 0;
  double max_local_error = 0.0;
  // Norm of the inter-band block dropped by the band-diagonal approximation,
  // maximized along the path (zero when the spin-adapted Hamiltonian block is
  // diagonal, i.e. for lambda_r = 0).
  double max_dropped_offdiagonal = 0.0;
};

/// Integrate the band-diagonal equations of motion for one definite-spin
/// positive-energy band with adaptive 4th/5th-order stepping:
///   xdot = (dE/dp + e eps^{ij} E_j G_band) / w,   w = 1 + F_xy G_band,
///   pdot_i = (e E_i - F_xy eps... force terms) / w,  F_xy = -e B.
Trajectory integrate_trajectory(const ModelParams& params, const BandSpec& band,
                                const Vec2& x0, const Vec2& p0, double t_end,
                                double tol);

/// Dispersion of the band used by the trajectory integrator (diagonal entry of
/// the spin-adapted Hamiltonian block) and its curvature.
double band_energy(const ModelParams& params, const BandSpec& band, double p);
double band_curvature(const ModelParams& params, const BandSpec& band, double p);

}  // namespace spinhall
