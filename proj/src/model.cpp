#include "spinhall/model.hpp"

#include <cmath>

namespace spinhall {

namespace {

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0, -kI, kI, 0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

// Valley block of the Kane-Mele Hamiltonian in (sigma x s) ordering,
// tau = +1 for K and -1 for K'.
Mat4 valley_hamiltonian(const ModelParams& pr, const Vec2& p, double tau) {
  const Mat2 I = Mat2::Identity();
  Mat4 h = Mat4::Zero();
  auto kron = [](const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
  };
  h += pr.v_f * p.x() * tau * kron(pauli_x(), I);
  h += pr.v_f * p.y() * kron(pauli_y(), I);
  h += pr.delta_so * tau * kron(pauli_z(), pauli_z());
  h += pr.lambda_r * (tau * kron(pauli_x(), pauli_y()) - kron(pauli_y(), pauli_x()));
  return h;
}

}  // namespace

Mat SpinorSet::matrix() const {
  Mat m(4, static_cast<Eigen::Index>(spinors.size()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) = spinors[c].state;
  return m;
}

Mat SpinorSet::positive_matrix() const {
  std::vector<const SpinorEntry*> pos;
  for (const auto& s : spinors)
    if (s.energy > 0.0) pos.push_back(&s);
  Mat m(4, static_cast<Eigen::Index>(pos.size()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) = pos[c]->state;
  return m;
}

HamiltonianMatrix build_hamiltonian(const ModelParams& params, const Vec2& p,
                                    Valley valley) {
  params.validate();
  HamiltonianMatrix out;
  out.valley = valley;
  if (valley == Valley::Full) {
    out.dim = 8;
    Mat h = Mat::Zero(8, 8);
    h.block<4, 4>(0, 0) = valley_hamiltonian(params, p, +1.0);
    h.block<4, 4>(4, 4) = valley_hamiltonian(params, p, -1.0);
    out.entries = h;
  } else {
    out.dim = 4;
    out.entries = valley_hamiltonian(params, p, valley == Valley::K ? +1.0 : -1.0);
  }
  return out;
}

SpectrumResult analytic_spectrum(const ModelParams& params, const Vec2& p) {
  const double l = params.lambda_r;
  const double vp = params.v_f * p.norm();
  const double s1 = std::hypot(params.delta_so - l, vp);
  const double s2 = std::hypot(params.delta_so + l, vp);
  SpectrumResult r;
  r.energies << l + s1, -l + s2, l - s1, -l - s2;
  r.gap = r.energies(1) - r.energies(2);
  return r;
}

SpinorSet analytic_eigenstates(const ModelParams& params, const Vec2& p,
                               Valley valley, double p_min) {
  params.validate();
  if (valley == Valley::Full)
    throw std::invalid_argument("analytic_eigenstates: pick a single valley");
  const double pn = p.norm();
  if (pn <= p_min)
    throw MomentumAtOrigin("analytic_eigenstates: 1/(p_x + i p_y) singular at p = 0");

  const Complex pp(p.x(), p.y());
  const Complex pm(p.x(), -p.y());
  const Complex vortex = pm / pp;
  const auto E = analytic_spectrum(params, p).energies;

  SpinorSet set;
  set.basis = Basis::Phi;
  set.valley = valley;
  set.momentum = p;

  const Mat sz = spin_operator(4);
  for (int a = 0; a < 4; ++a) {
    const double na =
        params.v_f * pn /
        std::sqrt(2.0 * (params.v_f * params.v_f * pn * pn +
                         (E(a) - params.delta_so) * (E(a) - params.delta_so)));
    const Complex b = (E(a) - params.delta_so) / (params.v_f * pp);
    // The component pattern alternates with the branch: states 1,3 carry -i,
    // states 2,4 carry +i on the vortex and sublattice-B-up entries.
    const Complex sgn = (a % 2 == 0) ? -kI : kI;
    Vec4c chi;
    if (valley == Valley::K) {
      chi << sgn * vortex, b, sgn * b, Complex(1.0, 0.0);
    } else {
      chi << sgn * b, Complex(1.0, 0.0), -sgn * vortex, -b;
    }
    SpinorEntry e;
    e.index = (valley == Valley::K ? 1 : 5) + a;
    e.label = "Phi" + std::to_string(e.index);
    e.energy = E(a);
    e.state = na * chi;
    e.spin_expectation = (e.state.adjoint() * sz * e.state)(0, 0).real();
    set.spinors.push_back(std::move(e));
  }
  return set;
}

Mat8 fw_transform(const ModelParams& params, const Vec2& p) {
  params.validate();
  if (params.lambda_r != 0.0)
    throw RequiresZeroRashba("fw_transform: closed form requires lambda_r = 0");
  const double E = std::hypot(params.delta_so, params.v_f * p.norm());
  if (!(E + params.delta_so > 0.0))
    throw std::invalid_argument("fw_transform: requires E + delta_so > 0");

  const Mat h = build_hamiltonian(params, p, Valley::Full).entries;
  Mat8 sig = Mat8::Zero();
  // sigma_z tau_z s_z in (tau, sigma, s) ordering
  const double d[8] = {+1, -1, -1, +1, -1, +1, +1, -1};
  for (int i = 0; i < 8; ++i) sig(i, i) = d[i];
  Mat8 u = (sig * h + E * Mat8::Identity()) / std::sqrt(2.0 * E * (E + params.delta_so));
  return u;
}

SpinorSet fw_eigenstates(const ModelParams& params, const Vec2& p, Valley valley) {
  if (valley == Valley::Full)
    throw std::invalid_argument("fw_eigenstates: pick a single valley");
  const Mat8 u = fw_transform(params, p);
  const double E = std::hypot(params.delta_so, params.v_f * p.norm());
  const int off = valley == Valley::K ? 0 : 4;
  // Diagonal of sigma_z tau_z s_z decides the energy sign of each column.
  const double d[8] = {+1, -1, -1, +1, -1, +1, +1, -1};
  const char* sub[4] = {"A", "A", "B", "B"};

  SpinorSet set;
  set.basis = Basis::FW;
  set.valley = valley;
  set.momentum = p;
  for (int c = 0; c < 4; ++c) {
    SpinorEntry e;
    e.index = c;
    e.energy = d[off + c] * E;
    e.spin_expectation = (c % 2 == 0) ? +1.0 : -1.0;
    e.label = std::string("FW_") + to_string(valley) + "_" + sub[c] + "_" +
              (c % 2 == 0 ? "up" : "down");
    e.state = u.adjoint().block<4, 1>(off, off + c);
    set.spinors.push_back(std::move(e));
  }
  return set;
}

Mat spin_operator(int dim) {
  if (dim != 2 && dim != 4 && dim != 8)
    throw UnsupportedDimension("spin_operator: dim must be 2, 4 or 8");
  Mat s = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) s(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
  return s;
}

double n1n2(const ModelParams& params, double p) {
  const double a = params.delta_so - params.lambda_r;
  const double b = params.delta_so + params.lambda_r;
  const double vp = params.v_f * p;
  const double s1 = std::hypot(a, vp);
  const double s2 = std::hypot(b, vp);
  return 0.25 * std::sqrt((1.0 + a / s1) * (1.0 + b / s2));
}

double dp_n1n2(const ModelParams& params, double p) {
  const double a = params.delta_so - params.lambda_r;
  const double b = params.delta_so + params.lambda_r;
  const double v2p = params.v_f * params.v_f * p;
  const double s1 = std::hypot(a, params.v_f * p);
  const double s2 = std::hypot(b, params.v_f * p);
  const double f = (1.0 + a / s1) * (1.0 + b / s2);
  if (f <= 0.0) return 0.0;
  return -(v2p / 8.0) *
         ((a / (s1 * s1 * s1)) * (1.0 + b / s2) + (b / (s2 * s2 * s2)) * (1.0 + a / s1)) /
         std::sqrt(f);
}

}  // namespace spinhall
