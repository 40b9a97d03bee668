#include "spinhall/berry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace spinhall {

namespace {

constexpr double kAlignThreshold = 0.1;  // rad; smooth sections stay far below

void check_combination(Model model, Basis basis, const ModelParams& params) {
  if (model == Model::KM_SO && basis == Basis::FW) {
    if (params.lambda_r != 0.0)
      throw UnsupportedCombination("KM_SO forms require lambda_r = 0");
    return;
  }
  if (model == Model::KM_Rashba && (basis == Basis::Phi || basis == Basis::Psi))
    return;
  throw UnsupportedCombination("no closed form for (" + to_string(model) + ", " +
                               to_string(basis) + ")");
}

void check_momentum(const Vec2& p) {
  if (p.norm() <= kMomentumOriginGuard)
    throw MomentumAtOrigin("closed forms are gauge-singular at p = 0");
}

// Column-align `neighbor` to `center` when the overlap phase is large.
// Smooth sections carry O(step) phases and are left untouched.
Mat align_columns(const Mat& center, Mat neighbor) {
  for (Eigen::Index c = 0; c < neighbor.cols(); ++c) {
    const Complex ov = center.col(c).dot(neighbor.col(c));
    if (std::abs(ov) < 1e-12) continue;
    const double phase = std::arg(ov);
    if (std::abs(phase) > kAlignThreshold)
      neighbor.col(c) *= std::exp(Complex(0.0, -phase));
  }
  return neighbor;
}

Mat unitarize(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// log of a unitary matrix via its spectral decomposition.
Mat unitary_log(const Mat& u) {
  Eigen::ComplexEigenSolver<Mat> es(u);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("numeric_curvature: eigendecomposition failed");
  Mat lam = Mat::Zero(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    lam(i, i) = Complex(0.0, std::arg(es.eigenvalues()(i)));
  return es.eigenvectors() * lam * es.eigenvectors().inverse();
}

}  // namespace

SpinorFamily spinor_family(const ModelParams& params, Model model, Basis basis,
                           Valley valley, bool positive_only) {
  if (valley == Valley::Full)
    throw std::invalid_argument("spinor_family: pick a single valley");
  if (model == Model::KM_SO && params.lambda_r != 0.0)
    throw UnsupportedCombination("spinor_family: KM_SO requires lambda_r = 0");

  ModelParams pr = params;
  return [pr, basis, valley, positive_only](const Vec2& p) -> Mat {
    SpinorSet set;
    switch (basis) {
      case Basis::FW: set = fw_eigenstates(pr, p, valley); break;
      case Basis::Phi: set = analytic_eigenstates(pr, p, valley); break;
      case Basis::Psi: set = spin_eigenbasis(analytic_eigenstates(pr, p, valley)); break;
    }
    if (!positive_only) return set.matrix();
    // Positive-energy pair; spin-adapted bases are ordered (up, down).
    std::vector<const SpinorEntry*> pos;
    for (const auto& s : set.spinors)
      if (s.energy > 0.0) pos.push_back(&s);
    if (basis != Basis::Phi)
      std::stable_sort(pos.begin(), pos.end(), [](const auto* a, const auto* b) {
        return a->spin_expectation > b->spin_expectation;
      });
    Mat m(4, static_cast<Eigen::Index>(pos.size()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) = pos[c]->state;
    return m;
  };
}

SpinorFamily inject_phase(SpinorFamily family,
                          std::function<double(const Vec2&)> theta) {
  return [family = std::move(family), theta = std::move(theta)](const Vec2& p) {
    Mat m = family(p);
    m *= std::exp(Complex(0.0, theta(p)));
    return m;
  };
}

ConnectionResult numeric_connection(const SpinorFamily& states, const Vec2& p,
                                    double step, double hbar, double residual_tol) {
  if (!(step > 0.0)) throw std::invalid_argument("numeric_connection: step must be > 0");
  if (p.norm() <= kMomentumOriginGuard)
    throw MomentumAtOrigin("numeric_connection: p = 0");

  const Mat u0 = states(p);
  ConnectionResult out;
  out.antihermitian_residual = 0.0;
  for (int i = 0; i < 2; ++i) {
    Vec2 dp = Vec2::Zero();
    dp(i) = step;
    const Mat up = align_columns(u0, states(p + dp));
    const Mat um = align_columns(u0, states(p - dp));
    const Mat du = (up - um) / (2.0 * step);
    const Mat a = hbar * kI * (u0.adjoint() * du);
    out.antihermitian_residual =
        std::max(out.antihermitian_residual, 0.5 * max_abs(a - a.adjoint()));
    out.a[i] = hermitize(a);
  }
  if (out.antihermitian_residual > residual_tol)
    throw StepTooLarge("numeric_connection: anti-Hermitian residual " +
                       std::to_string(out.antihermitian_residual));
  return out;
}

Mat numeric_curvature(const SpinorFamily& states, const Vec2& p, double step,
                      double hbar) {
  if (!(step > 0.0)) throw std::invalid_argument("numeric_curvature: step must be > 0");
  if (p.norm() <= kMomentumOriginGuard)
    throw MomentumAtOrigin("numeric_curvature: p = 0");

  const double h = 0.5 * step;
  const Vec2 corners[4] = {p + Vec2(-h, -h), p + Vec2(h, -h), p + Vec2(h, h),
                           p + Vec2(-h, h)};
  Mat frames[4];
  for (int k = 0; k < 4; ++k) frames[k] = states(corners[k]);

  Mat loop = Mat::Identity(frames[0].cols(), frames[0].cols());
  for (int k = 0; k < 4; ++k) {
    const Mat link = frames[k].adjoint() * frames[(k + 1) % 4];
    loop = loop * unitarize(link);
  }
  const Mat g = hbar * kI * unitary_log(loop) / (step * step);
  return hermitize(g);
}

std::array<Mat, 2> analytic_connection(Model model, Basis basis,
                                       const ModelParams& params, const Vec2& p) {
  params.validate();
  check_combination(model, basis, params);
  check_momentum(p);
  const double hb = params.hbar;
  const double pn = p.norm();
  const double eps_pj[2] = {p.y(), -p.x()};  // eps^{ij} p_j with eps^{xy} = +1

  std::array<Mat, 2> a;
  if (model == Model::KM_SO) {
    const double E = std::hypot(params.delta_so, params.v_f * pn);
    const double c = hb * params.v_f * params.v_f / (2.0 * E * (E + params.delta_so));
    const Mat s4 = spin_operator(4);
    for (int i = 0; i < 2; ++i) a[i] = c * eps_pj[i] * s4;
    return a;
  }

  const double nn = n1n2(params, pn);
  Mat2 block;
  if (basis == Basis::Phi) {
    block << -1.0, 2.0 * nn, 2.0 * nn, -1.0;
  } else {
    block << -1.0 - 2.0 * nn, 0.0, 0.0, -1.0 + 2.0 * nn;
  }
  for (int i = 0; i < 2; ++i) {
    Mat m = Mat::Zero(4, 4);
    m.block<2, 2>(0, 0) = block;
    m.block<2, 2>(2, 2) = block;
    a[i] = hb * eps_pj[i] / (pn * pn) * m;
  }
  return a;
}

Mat analytic_curvature(Model model, Basis basis, const ModelParams& params,
                       const Vec2& p) {
  params.validate();
  check_combination(model, basis, params);
  check_momentum(p);
  const double hb = params.hbar;
  const double pn = p.norm();

  if (model == Model::KM_SO) {
    const double E = std::hypot(params.delta_so, params.v_f * pn);
    const double g = -hb * params.v_f * params.v_f * params.delta_so / (2.0 * E * E * E);
    return g * spin_operator(4);
  }

  const double g = -2.0 * hb / pn * dp_n1n2(params, pn);
  Mat2 block;
  if (basis == Basis::Phi) {
    block << 0.0, g, g, 0.0;
  } else {
    block << -g, 0.0, 0.0, g;
  }
  Mat m = Mat::Zero(4, 4);
  m.block<2, 2>(0, 0) = block;
  m.block<2, 2>(2, 2) = block;
  return m;
}

BerryData analytic_berry_data(Model model, Basis basis, const ModelParams& params,
                              const Vec2& p) {
  BerryData d;
  d.momentum = p;
  d.connection = analytic_connection(model, basis, params, p);
  d.curvature = analytic_curvature(model, basis, params, p);
  d.basis = basis;
  d.valley = Valley::Full;
  return d;
}

}  // namespace spinhall
