#pragma once

#include "spinhall/model.hpp"

namespace spinhall {

/// 2x2 block rotation R~ = (1/sqrt 2) [[1, 1], [1, -1]] mixing the two states
/// of an energy pair into spin eigenstates of the projected S_z.
Mat2 pair_rotation();

/// R = diag(R~, R~) acting on a 4-state energy eigenbasis.
Mat4 basis_rotation();

/// The rotation together with its source/target tags. R is Hermitian and
/// involutive: applying it twice returns the energy eigenbasis.
struct BasisRotation {
  Mat4 matrix = basis_rotation();
  Basis source = Basis::Phi;
  Basis target = Basis::Psi;
};

/// Build the spin-adapted basis from an energy eigenbasis: within each energy
/// pair the combinations (Phi_a -+ Phi_b)/sqrt(2) diagonalize the projected
/// spin P S_z P exactly. Entries are labeled by the measured sign of
/// <Psi|S_z|Psi>; the magnitude |<S_z>| < 1 when the Rashba coupling is on
/// (S_z is then not conserved, only its projection is diagonalized).
/// Output order: (up+, down+, up-, down-).
SpinorSet spin_eigenbasis(const SpinorSet& phi);

/// Conjugation O -> U O U^dagger with unitarity and shape checks.
Mat transform_observable(const Mat& u, const Mat& o, double unitary_tol = 1e-10);

}  // namespace spinhall
