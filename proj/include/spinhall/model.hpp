#pragma once

#include "spinhall/params.hpp"

#include <string>
#include <vector>

namespace spinhall {

// Index ordering convention used throughout: valley (tau) is the outermost
// index, then sublattice (sigma), then spin (s). A single-valley block is a
// 4x4 matrix over (A up, A dn, B up, B dn); the full Hamiltonian is 8x8 and
// block-diagonal over the valleys.

struct HamiltonianMatrix {
  int dim = 4;
  Mat entries;
  Valley valley = Valley::K;
};

struct SpectrumResult {
  Eigen::Vector4d energies;  // (E1, E2, E3, E4), E1 >= E2 > 0 > E3 >= E4 in regime
  double gap = 0.0;          // min positive - max negative at this momentum
};

struct SpinorEntry {
  int index = 0;            // 1..8 for the Phi family, 0..3 within a FW valley block
  std::string label;
  double energy = 0.0;
  double spin_expectation = 0.0;  // <chi|S_z|chi>
  Vec4c state;
};

struct SpinorSet {
  Basis basis = Basis::Phi;
  Valley valley = Valley::K;
  Vec2 momentum = Vec2::Zero();
  std::vector<SpinorEntry> spinors;

  // Spinors as matrix columns, in stored order.
  Mat matrix() const;
  // Columns restricted to positive-energy entries, in stored order.
  Mat positive_matrix() const;
};

/// Kane-Mele continuum Hamiltonian near the Dirac points:
///   H = v_F sigma_x tau_z p_x + v_F sigma_y p_y
///     + Delta_SO sigma_z tau_z s_z + lambda_R (sigma_x tau_z s_y - sigma_y s_x)
/// Returns the requested valley block (4x4) or the full 8x8 matrix.
HamiltonianMatrix build_hamiltonian(const ModelParams& params, const Vec2& p,
                                    Valley valley);

/// Closed-form energies E1..E4 (valley independent):
///   E1 =  l + sqrt((D-l)^2 + v^2 p^2),  E3 =  2l - E1,
///   E2 = -l + sqrt((D+l)^2 + v^2 p^2),  E4 = -2l - E2,   l = lambda_R.
SpectrumResult analytic_spectrum(const ModelParams& params, const Vec2& p);

/// Closed-form energy eigenstates of the valley Hamiltonians, normalized with
///   N_a(p) = v_F p / sqrt(2 (v_F^2 p^2 + (E_a - Delta_SO)^2)).
/// Labels Phi1..Phi4 (K) and Phi5..Phi8 (K'). Gauge-singular at p = 0.
SpinorSet analytic_eigenstates(const ModelParams& params, const Vec2& p,
                               Valley valley,
                               double p_min = kMomentumOriginGuard);

/// Foldy-Wouthuysen unitary for lambda_R = 0,
///   U = (sigma_z tau_z s_z H + E) / sqrt(2 E (E + Delta_SO)),
/// which maps H to E sigma_z tau_z s_z. 8x8, block-diagonal over valleys.
Mat8 fw_transform(const ModelParams& params, const Vec2& p);

/// Columns of U^dagger restricted to one valley block, labeled by
/// (sublattice, spin) with energies +-E. Requires lambda_R = 0; well defined
/// at p = 0 where U is the identity.
SpinorSet fw_eigenstates(const ModelParams& params, const Vec2& p, Valley valley);

/// S_z in the representation s_z = diag(1, -1): dim 2 -> s_z,
/// dim 4 -> 1_sigma x s_z (valley block), dim 8 -> 1_tau x 1_sigma x s_z.
Mat spin_operator(int dim);

// Abbreviations used by the closed forms. n1n2 is the product N1(p) N2(p) of
// the positive-state normalizations; its radial derivative enters the
// curvature. Both validated against finite differences in the tests.
double n1n2(const ModelParams& params, double p);
double dp_n1n2(const ModelParams& params, double p);

}  // namespace spinhall
