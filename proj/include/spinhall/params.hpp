#pragma once

#include "spinhall/common.hpp"

#include <optional>
#include <string>

namespace spinhall {

enum class Valley { K, Kp, Full };
enum class Spin { Up, Down };
enum class Basis { Phi, Psi, FW };
enum class Model { KM_SO, KM_Rashba };

/// Couplings and external fields of a Kane-Mele-type continuum Dirac model.
/// Natural units by default: hbar = e = v_F = 1.
struct ModelParams {
  double v_f = 1.0;       // Fermi velocity
  double delta_so = 0.0;  // intrinsic spin-orbit gap
  double lambda_r = 0.0;  // Rashba coupling
  double hbar = 1.0;
  double charge = 1.0;  // electron charge e > 0
  Vec2 e_field = Vec2::Zero();
  double b_field = 0.0;  // out-of-plane magnetic field
  std::optional<double> fermi_energy;

  // Working condition for the gapped spin Hall phase. The weaker
  // delta_so > lambda_r also appears in the literature; both are reported.
  bool spin_hall_regime() const { return delta_so > 2.0 * lambda_r; }
  bool weak_regime() const { return delta_so > lambda_r; }

  void validate() const {
    if (!(v_f > 0.0)) throw std::invalid_argument("v_f must be > 0");
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be > 0");
    if (!(charge > 0.0)) throw std::invalid_argument("charge must be > 0");
    if (delta_so < 0.0) throw std::invalid_argument("delta_so must be >= 0");
    if (lambda_r < 0.0) throw std::invalid_argument("lambda_r must be >= 0");
  }
};

inline std::string to_string(Valley v) {
  switch (v) {
    case Valley::K: return "K";
    case Valley::Kp: return "K'";
    default: return "full";
  }
}

inline std::string to_string(Spin s) { return s == Spin::Up ? "up" : "down"; }

inline std::string to_string(Basis b) {
  switch (b) {
    case Basis::Phi: return "phi";
    case Basis::Psi: return "psi";
    default: return "fw";
  }
}

inline std::string to_string(Model m) {
  return m == Model::KM_SO ? "km-so" : "km-rashba";
}

}  // namespace spinhall
