#pragma once

#include "spinhall/basis.hpp"

#include <array>
#include <functional>

namespace spinhall {

/// Momentum-indexed spinor family: columns of the returned matrix are the
/// ordered states of the family at p. Must be a pure function of p.
using SpinorFamily = std::function<Mat(const Vec2&)>;

/// Matrix-valued Berry data at one momentum point.
struct BerryData {
  Vec2 momentum = Vec2::Zero();
  std::array<Mat, 2> connection;  // (A^x, A^y), Hermitian
  Mat curvature;                  // G^{xy}; G^{yx} = -G^{xy}
  Basis basis = Basis::FW;
  Valley valley = Valley::Full;
};

/// Build the spinor family for a (model, basis, valley) combination.
/// positive_only restricts to the positive-energy pair, ordered (up, down)
/// for the spin-adapted bases and (1, 2) for the energy basis.
SpinorFamily spinor_family(const ModelParams& params, Model model, Basis basis,
                           Valley valley, bool positive_only = true);

/// Multiply every column of a family by exp(i theta(p)). Used to probe gauge
/// covariance of the numerical routines.
SpinorFamily inject_phase(SpinorFamily family,
                          std::function<double(const Vec2&)> theta);

struct ConnectionResult {
  std::array<Mat, 2> a;                 // hbar * i u^dag du, Hermitian part
  double antihermitian_residual = 0.0;  // diagnostic before symmetrization
};

/// Central-difference connection A^i[a,b] = hbar * i u^(a)dag d_i u^(b).
/// Neighbor spinors whose overlap phase with the center exceeds an O(1)
/// threshold are re-phased first; this removes arbitrary eigensolver phases
/// without disturbing smooth closed-form sections (their overlap phases are
/// O(step)). Throws StepTooLarge when the anti-Hermitian residual exceeds
/// residual_tol.
ConnectionResult numeric_connection(const SpinorFamily& states, const Vec2& p,
                                    double step, double hbar = 1.0,
                                    double residual_tol = 1e-4);

/// Non-Abelian plaquette Wilson loop around p: links are the unitarized
/// overlap matrices between neighboring multiplets, and
///   G^{xy} = (i hbar / area) log(L1 L2 L3 L4),
/// Hermitized. Gauge covariant including degenerate multiplets, second-order
/// accurate in the step.
Mat numeric_curvature(const SpinorFamily& states, const Vec2& p, double step,
                      double hbar = 1.0);

/// Closed-form connections on the positive-energy subspace, 4x4 over both
/// valleys with row order (K,1), (K,2), (K',1), (K',2) where (1,2) = (up,down)
/// for the spin-adapted bases:
///   (KM_SO, FW):      A^i = hbar v^2/(2E(E+D)) eps^{ij} p_j diag(1,-1,1,-1)
///   (KM_Rashba, Phi): A^i = hbar eps^{ij} p_j/p^2 [[-1, 2N1N2], [2N1N2, -1]] per valley
///   (KM_Rashba, Psi): A^i = hbar eps^{ij} p_j/p^2 diag(-1-2N1N2, -1+2N1N2) per valley
std::array<Mat, 2> analytic_connection(Model model, Basis basis,
                                       const ModelParams& params, const Vec2& p);

/// Closed-form curvatures matching analytic_connection:
///   (KM_SO, FW):      G = -hbar v^2 D/(2E^3) diag(1,-1,1,-1)
///   (KM_Rashba, Phi): G = [[0, g], [g, 0]] per valley
///   (KM_Rashba, Psi): G = diag(-g, +g) per valley,  g = -(2 hbar/p) d_p(N1N2)
/// The pure-vortex part of the connections is curvature-free away from p = 0
/// and does not appear here.
Mat analytic_curvature(Model model, Basis basis, const ModelParams& params,
                       const Vec2& p);

/// Analytic connection and curvature bundled at one momentum point.
BerryData analytic_berry_data(Model model, Basis basis, const ModelParams& params,
                              const Vec2& p);

}  // namespace spinhall
