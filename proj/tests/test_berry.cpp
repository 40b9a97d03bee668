#include "spinhall/berry.hpp"

#include <doctest.h>

#include <cmath>

using namespace spinhall;

namespace {

ModelParams params(double d, double l) {
  ModelParams p;
  p.delta_so = d;
  p.lambda_r = l;
  return p;
}

}  // namespace

TEST_SUITE("berry") {

TEST_CASE("fw connection matches the closed form") {
  const auto pr = params(0.5, 0.0);
  const Vec2 p(0.3, 0.4);
  const auto fam = spinor_family(pr, Model::KM_SO, Basis::FW, Valley::K);
  const auto res = numeric_connection(fam, p, 1e-4);
  // A^x = 0.23431 s_z on the (up, down) positive pair
  const double ax = 0.234314575050762;
  CHECK(res.a[0](0, 0).real() == doctest::Approx(ax).epsilon(1e-6));
  CHECK(res.a[0](1, 1).real() == doctest::Approx(-ax).epsilon(1e-6));
  CHECK(res.a[1](0, 0).real() == doctest::Approx(-0.3 * ax / 0.4).epsilon(1e-6));
  CHECK(std::abs(res.a[0](0, 1)) < 1e-8);
  CHECK(res.antihermitian_residual < 1e-6);

  const auto cf = analytic_connection(Model::KM_SO, Basis::FW, pr, p);
  CHECK(max_abs(res.a[0] - cf[0].block<2, 2>(0, 0)) < 1e-6);
  CHECK(max_abs(res.a[1] - cf[1].block<2, 2>(0, 0)) < 1e-6);
}

TEST_CASE("constant family has zero connection") {
  const auto fam = [](const Vec2&) {
    Mat m = Mat::Zero(4, 2);
    m(0, 0) = 1.0;
    m(3, 1) = 1.0;
    return m;
  };
  const auto res = numeric_connection(fam, Vec2(0.3, 0.4), 1e-4);
  CHECK(max_abs(res.a[0]) < 1e-12);
  CHECK(max_abs(res.a[1]) < 1e-12);
}

TEST_CASE("smooth gauge change shifts the diagonal connection by -grad theta") {
  const auto pr = params(0.5, 0.1);
  const Vec2 p(0.3, 0.4);
  const auto fam = spinor_family(pr, Model::KM_Rashba, Basis::Psi, Valley::K);
  const auto famg = inject_phase(fam, [](const Vec2& q) { return q.x() * q.y(); });
  const auto a0 = numeric_connection(fam, p, 1e-5);
  const auto a1 = numeric_connection(famg, p, 1e-5);
  // theta = px py: shifts are (-py, -px)
  CHECK((a1.a[0](0, 0) - a0.a[0](0, 0)).real() == doctest::Approx(-p.y()).epsilon(1e-7));
  CHECK((a1.a[1](0, 0) - a0.a[1](0, 0)).real() == doctest::Approx(-p.x()).epsilon(1e-7));
  // curvature is unchanged
  const Mat g0 = numeric_curvature(fam, p, 1e-3);
  const Mat g1 = numeric_curvature(famg, p, 1e-3);
  CHECK(max_abs(g0 - g1) < 1e-8);
}

TEST_CASE("per-band phase redefinitions conjugate the curvature") {
  const auto pr = params(0.5, 0.1);
  const Vec2 p(0.6, -0.3);
  const auto fam = spinor_family(pr, Model::KM_Rashba, Basis::Phi, Valley::K);
  const auto famg = [&](const Vec2& q) {
    Mat m = fam(q);
    m.col(0) *= std::exp(Complex(0.0, q.x() * q.y()));
    m.col(1) *= std::exp(Complex(0.0, 0.5 * q.squaredNorm()));
    return m;
  };
  const Mat g0 = numeric_curvature(fam, p, 1e-3);
  const Mat g1 = numeric_curvature(famg, p, 1e-3);
  // diagonal entries, off-diagonal magnitude and trace are phase-blind
  CHECK(std::abs(g0(0, 0) - g1(0, 0)) < 1e-8);
  CHECK(std::abs(g0(1, 1) - g1(1, 1)) < 1e-8);
  CHECK(std::abs(std::abs(g0(0, 1)) - std::abs(g1(0, 1))) < 1e-8);
}

TEST_CASE("non-smooth families are rejected") {
  const auto pr = params(0.5, 0.1);
  // columns swap across a line: not a smooth section
  const auto good = spinor_family(pr, Model::KM_Rashba, Basis::Psi, Valley::K);
  const auto broken = [&](const Vec2& q) {
    Mat m = good(q);
    if (q.y() > 0.4) m.col(0).swap(m.col(1));
    return m;
  };
  CHECK_THROWS_AS(numeric_connection(broken, Vec2(0.3, 0.4), 1e-4), StepTooLarge);
  CHECK_THROWS_AS(numeric_connection(good, Vec2::Zero(), 1e-4), MomentumAtOrigin);
}

TEST_CASE("wilson curvature matches the closed forms at spot points") {
  struct Combo {
    Model model;
    Basis basis;
    ModelParams pr;
  };
  const Combo combos[3] = {{Model::KM_SO, Basis::FW, params(0.5, 0.0)},
                           {Model::KM_Rashba, Basis::Phi, params(0.5, 0.1)},
                           {Model::KM_Rashba, Basis::Psi, params(0.5, 0.1)}};
  for (const auto& c : combos) {
    for (Valley v : {Valley::K, Valley::Kp}) {
      const auto fam = spinor_family(c.pr, c.model, c.basis, v);
      for (const Vec2& p : {Vec2(0.3, 0.4), Vec2(-1.1, 0.7), Vec2(0.05, -0.2)}) {
        const Mat gn = numeric_curvature(fam, p, 1e-3);
        const Mat ga = analytic_curvature(c.model, c.basis, c.pr, p);
        const int off = v == Valley::K ? 0 : 2;
        CHECK(max_abs(gn - ga.block<2, 2>(off, off)) < 1e-4);
      }
    }
  }
}

TEST_CASE("fw spin-up curvature value and second-order convergence") {
  const auto pr = params(0.5, 0.0);
  const Vec2 p(0.3, 0.4);  // |p| = 0.5
  const auto fam = spinor_family(pr, Model::KM_SO, Basis::FW, Valley::K);
  const double want = -0.7071067811865474;  // -v^2 Delta / (2 E^3)
  const double g1 = numeric_curvature(fam, p, 1e-3)(0, 0).real();
  CHECK(std::abs(g1 - want) / std::abs(want) < 1e-4);

  // halving the plaquette shrinks the error by about four
  const double e1 = std::abs(numeric_curvature(fam, p, 2e-2)(0, 0).real() - want);
  const double e2 = std::abs(numeric_curvature(fam, p, 1e-2)(0, 0).real() - want);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("energy-basis curvature is purely off-diagonal") {
  const auto pr = params(0.5, 0.1);
  const auto fam = spinor_family(pr, Model::KM_Rashba, Basis::Phi, Valley::K);
  for (const Vec2& p : {Vec2(0.3, 0.4), Vec2(1.0, -0.6)}) {
    const Mat g = numeric_curvature(fam, p, 1e-3);
    CHECK(std::abs(g(0, 0)) < 1e-8);
    CHECK(std::abs(g(1, 1)) < 1e-8);
    CHECK(std::abs(g(0, 1)) > 1e-3);  // the physics lives off the diagonal
  }
}

TEST_CASE("analytic connection closed forms") {
  const auto pr = params(0.5, 0.1);
  const Vec2 p(0.3, 0.4);
  const double p2 = p.squaredNorm();

  SUBCASE("energy basis: vortex diagonal independent of couplings") {
    const auto a = analytic_connection(Model::KM_Rashba, Basis::Phi, pr, p);
    CHECK(a[0](0, 0).real() == doctest::Approx(-p.y() / p2).epsilon(1e-14));
    CHECK(a[1](0, 0).real() == doctest::Approx(p.x() / p2).epsilon(1e-14));
    CHECK(a[0](0, 1).real() ==
          doctest::Approx(2.0 * n1n2(pr, p.norm()) * p.y() / p2).epsilon(1e-14));
  }
  SUBCASE("spin basis: diagonal with split vortex weights") {
    const auto a = analytic_connection(Model::KM_Rashba, Basis::Psi, pr, p);
    CHECK(std::abs(a[0](0, 1)) == 0.0);
    const double nn = n1n2(pr, p.norm());
    CHECK(a[0](0, 0).real() ==
          doctest::Approx((-1.0 - 2.0 * nn) * p.y() / p2).epsilon(1e-14));
    CHECK(a[0](1, 1).real() ==
          doctest::Approx((-1.0 + 2.0 * nn) * p.y() / p2).epsilon(1e-14));
  }
  SUBCASE("unsupported combinations are rejected") {
    CHECK_THROWS_AS(analytic_connection(Model::KM_SO, Basis::Phi, params(0.5, 0.0), p),
                    UnsupportedCombination);
    CHECK_THROWS_AS(analytic_connection(Model::KM_Rashba, Basis::FW, pr, p),
                    UnsupportedCombination);
    CHECK_THROWS_AS(analytic_connection(Model::KM_Rashba, Basis::Phi, pr, Vec2::Zero()),
                    MomentumAtOrigin);
  }
}

TEST_CASE("analytic curvature closed forms and spin trace") {
  const Vec2 p(0.3, 0.4);

  SUBCASE("fw value at |p| = 1/2") {
    const Mat g = analytic_curvature(Model::KM_SO, Basis::FW, params(0.5, 0.0), p);
    CHECK(g(0, 0).real() == doctest::Approx(-0.7071067811865474).epsilon(1e-14));
    CHECK(g(1, 1).real() == doctest::Approx(0.7071067811865474).epsilon(1e-14));
    CHECK(g(2, 2).real() == doctest::Approx(-0.7071067811865474).epsilon(1e-14));
  }
  SUBCASE("energy-basis trace against diagonal spin vanishes identically") {
    const auto pr = params(0.5, 0.1);
    for (double r : {0.2, 0.8, 2.5}) {
      const Vec2 q(r * 0.6, r * 0.8);
      const Mat g = analytic_curvature(Model::KM_Rashba, Basis::Phi, pr, q);
      CHECK(std::abs((spin_operator(4) * g).trace()) < 1e-15);
    }
  }
  SUBCASE("spin-basis curvature is the conjugated energy-basis curvature") {
    const auto pr = params(0.5, 0.1);
    const Mat gphi = analytic_curvature(Model::KM_Rashba, Basis::Phi, pr, p);
    const Mat gpsi = analytic_curvature(Model::KM_Rashba, Basis::Psi, pr, p);
    Mat c = Mat::Zero(2, 2);
    c << 1, 1, -1, 1;
    c /= std::sqrt(2.0);
    CHECK(max_abs(Mat(c.adjoint() * gphi.block<2, 2>(0, 0) * c) -
                  gpsi.block<2, 2>(0, 0)) < 1e-12);
  }
  SUBCASE("rashba spin-up curvature approaches the fw form as lambda -> 0") {
    const Mat g = analytic_curvature(Model::KM_Rashba, Basis::Psi, params(0.5, 1e-9), p);
    CHECK(g(0, 0).real() == doctest::Approx(-0.7071067811865474).epsilon(1e-7));
  }
}

TEST_CASE("curvature transforms covariantly under constant mixing") {
  const auto pr = params(0.5, 0.1);
  const Vec2 p(0.3, 0.4);
  const auto fam = spinor_family(pr, Model::KM_Rashba, Basis::Psi, Valley::K);
  Mat w(2, 2);  // a fixed unitary
  const double th = 0.7;
  w << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const auto famw = [&](const Vec2& q) { return Mat(fam(q) * w); };
  const Mat g0 = numeric_curvature(fam, p, 1e-3);
  const Mat gw = numeric_curvature(famw, p, 1e-3);
  // the loop logarithm amplifies roundoff by 1/step^2, so ~1e-10 is the floor
  CHECK(max_abs(gw - w.adjoint() * g0 * w) < 1e-9);
  CHECK(std::abs((gw.trace() - g0.trace())) < 1e-9);
  // exact trace invariance holds for the closed forms
  const Mat ga = analytic_curvature(pr.lambda_r == 0.0 ? Model::KM_SO : Model::KM_Rashba,
                                    Basis::Psi, pr, p);
  CHECK(std::abs((Mat(w.adjoint() * ga.block<2, 2>(0, 0) * w).trace() -
                  ga.block<2, 2>(0, 0).trace())) < 1e-15);
}

}  // TEST_SUITE
