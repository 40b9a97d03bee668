#include "spinhall/basis.hpp"

#include <cmath>

namespace spinhall {

Mat2 pair_rotation() {
  Mat2 r;
  const double s = 1.0 / std::sqrt(2.0);
  r << s, s, s, -s;
  return r;
}

Mat4 basis_rotation() {
  Mat4 r = Mat4::Zero();
  r.block<2, 2>(0, 0) = pair_rotation();
  r.block<2, 2>(2, 2) = pair_rotation();
  return r;
}

SpinorSet spin_eigenbasis(const SpinorSet& phi) {
  if (phi.basis != Basis::Phi)
    throw std::invalid_argument("spin_eigenbasis: input must be an energy eigenbasis");
  if (phi.spinors.size() != 4)
    throw std::invalid_argument("spin_eigenbasis: expected four spinors");

  const Mat sz = spin_operator(4);
  SpinorSet out;
  out.basis = Basis::Psi;
  out.valley = phi.valley;
  out.momentum = phi.momentum;

  // Energy pairs (1,2) and (3,4) in stored order.
  for (int pair = 0; pair < 2; ++pair) {
    const auto& a = phi.spinors[2 * pair];
    const auto& b = phi.spinors[2 * pair + 1];
    const double s = 1.0 / std::sqrt(2.0);
    Vec4c diff = s * (a.state - b.state);
    Vec4c sum = s * (a.state + b.state);

    // The difference combination carries <S_z> > 0 for this model family;
    // verify instead of assuming.
    auto expct = [&](const Vec4c& v) {
      return (v.adjoint() * sz * v)(0, 0).real();
    };
    Vec4c up = diff, dn = sum;
    if (expct(up) < expct(dn)) std::swap(up, dn);

    // The pair must diagonalize the projected spin: S_z sandwiched in the
    // pair's span has no (up, dn) cross term.
    const Complex cross = (up.adjoint() * sz * dn)(0, 0);
    if (std::abs(cross) > 1e-8)
      throw NotSpinDiagonalizable(
          "spin_eigenbasis: projected S_z not diagonal in the rotated pair, "
          "|cross| = " + std::to_string(std::abs(cross)));

    const double emean = 0.5 * (a.energy + b.energy);
    for (int k = 0; k < 2; ++k) {
      SpinorEntry e;
      e.index = 2 * pair + k + 1;
      e.state = (k == 0) ? up : dn;
      e.energy = emean;  // diagonal entry of the rotated Hamiltonian block
      e.spin_expectation = expct(e.state);
      e.label = std::string("Psi_") + (k == 0 ? "up" : "down") +
                (pair == 0 ? "+" : "-");
      out.spinors.push_back(std::move(e));
    }
  }
  return out;
}

Mat transform_observable(const Mat& u, const Mat& o, double unitary_tol) {
  if (u.rows() != u.cols() || o.rows() != o.cols() || u.rows() != o.rows())
    throw DimensionMismatch("transform_observable: U and O must be square and equal-sized");
  const double defect = max_abs(u * u.adjoint() - Mat::Identity(u.rows(), u.cols()));
  if (defect > unitary_tol)
    throw NotUnitary("transform_observable: ||U U^dag - 1||_max = " + std::to_string(defect));
  return u * o * u.adjoint();
}

}  // namespace spinhall
