#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace spinhall {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Mat8 = Eigen::Matrix<std::complex<double>, 8, 8>;
using Vec2 = Eigen::Vector2d;
using Vec4c = Eigen::Vector4cd;

inline constexpr Complex kI{0.0, 1.0};

// Closed-form eigenstates contain 1/(p_x + i p_y); momenta below this radius
// are treated as the gauge-singular origin.
inline constexpr double kMomentumOriginGuard = 1e-8;

struct MomentumAtOrigin : std::runtime_error {
  explicit MomentumAtOrigin(const std::string& what) : std::runtime_error(what) {}
};
struct RequiresZeroRashba : std::runtime_error {
  explicit RequiresZeroRashba(const std::string& what) : std::runtime_error(what) {}
};
struct UnsupportedDimension : std::invalid_argument {
  explicit UnsupportedDimension(const std::string& what) : std::invalid_argument(what) {}
};
struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};
struct NotUnitary : std::invalid_argument {
  explicit NotUnitary(const std::string& what) : std::invalid_argument(what) {}
};
struct NotSpinDiagonalizable : std::runtime_error {
  explicit NotSpinDiagonalizable(const std::string& what) : std::runtime_error(what) {}
};
struct StepTooLarge : std::runtime_error {
  explicit StepTooLarge(const std::string& what) : std::runtime_error(what) {}
};
struct UnsupportedCombination : std::invalid_argument {
  explicit UnsupportedCombination(const std::string& what) : std::invalid_argument(what) {}
};
struct MeasureSingular : std::runtime_error {
  explicit MeasureSingular(const std::string& what) : std::runtime_error(what) {}
};
struct ToleranceNotMet : std::runtime_error {
  explicit ToleranceNotMet(const std::string& what) : std::runtime_error(what) {}
};
struct NotRotationallySymmetric : std::runtime_error {
  explicit NotRotationallySymmetric(const std::string& what) : std::runtime_error(what) {}
};
struct TailBoundExceedsTolerance : std::runtime_error {
  explicit TailBoundExceedsTolerance(const std::string& what) : std::runtime_error(what) {}
};
struct MissingSector : std::invalid_argument {
  explicit MissingSector(const std::string& what) : std::invalid_argument(what) {}
};
struct BasisNotSpinDiagonal : std::runtime_error {
  explicit BasisNotSpinDiagonal(const std::string& what) : std::runtime_error(what) {}
};
struct GapClosing : std::runtime_error {
  explicit GapClosing(const std::string& what) : std::runtime_error(what) {}
};
struct MalformedConfig : std::runtime_error {
  explicit MalformedConfig(const std::string& what) : std::runtime_error(what) {}
};
struct RegimeViolation : std::runtime_error {
  explicit RegimeViolation(const std::string& what) : std::runtime_error(what) {}
};

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Mat& m) { return max_abs(m - m.adjoint()); }

inline Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

inline Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

}  // namespace spinhall
