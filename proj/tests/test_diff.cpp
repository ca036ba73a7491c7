#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "photonpos/diff.hpp"
#include "photonpos/dual.hpp"

using namespace photonpos;

TEST_CASE("central differences are exact on quadratics") {
  auto field = [](const Vec3& k) {
    return CVec3(Complex(k[0] * k[0] + 2.0 * k[1] * k[2], k[1]),
                 Complex(3.0 * k[2] * k[2], 0.0),
                 Complex(k[0] * k[1], -k[2]));
  };
  const Vec3 k(1.2, -0.7, 2.1);
  const DiffEngine d = DiffEngine::central(1e-5);
  // Hand gradients.
  const CVec3 d0(Complex(2.0 * k[0], 0.0), 0.0, Complex(k[1], 0.0));
  const CVec3 d1(Complex(2.0 * k[2], 1.0), 0.0, Complex(k[0], 0.0));
  const CVec3 d2(Complex(2.0 * k[1], 0.0), Complex(6.0 * k[2], 0.0),
                 Complex(0.0, -1.0));
  CHECK((differentiate(d, field, k, 0) - d0).norm() < 1e-9);
  CHECK((differentiate(d, field, k, 1) - d1).norm() < 1e-9);
  CHECK((differentiate(d, field, k, 2) - d2).norm() < 1e-9);
}

TEST_CASE("central differences converge at second order") {
  auto field = [](const Vec3& k) { return std::sin(k[1]) * std::exp(k[0]); };
  const Vec3 k(0.3, 0.8, -0.2);
  const double exact = std::cos(k[1]) * std::exp(k[0]);
  double prev = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double h = (i == 0) ? 1e-2 : 5e-3;
    const double err =
        std::abs(central_difference_scalar(field, k, 1, h) - exact);
    if (i == 1) {
      const double ratio = prev / err;
      CHECK(ratio > 3.2);
      CHECK(ratio < 4.8);
    }
    prev = err;
  }
}

TEST_CASE("Richardson extrapolation beats plain central differences") {
  auto field = [](const Vec3& k) { return std::sin(k[1]); };
  const Vec3 k(0.0, 0.7, 0.0);
  const double exact = std::cos(k[1]);
  const double err_cd = std::abs(
      differentiate_scalar(DiffEngine::central(1e-3), field, k, 1) - exact);
  const double err_ri = std::abs(
      differentiate_scalar(DiffEngine::richardson(1e-3), field, k, 1) -
      exact);
  CHECK(err_cd > 1e-9);       // plain rule is truncation-limited
  CHECK(err_ri < err_cd / 100.0);
}

TEST_CASE("analytic engine refuses stencil differentiation") {
  auto field = [](const Vec3& k) { return k[0]; };
  CHECK_THROWS_AS(
      differentiate_scalar(DiffEngine::analytic(), field, Vec3(1, 0, 0), 0),
      StepError);
}

TEST_CASE("step scales with the evaluation point") {
  const DiffEngine d = DiffEngine::central(1e-5);
  CHECK(d.step(Vec3(0.1, 0.0, 0.0)) == doctest::Approx(1e-5));
  CHECK(d.step(Vec3(0.0, 0.0, 10.0)) == doctest::Approx(1e-4));
}

TEST_CASE("second-order duals reproduce closed-form jets of |k|") {
  // f = |k|: grad = k/r, hess = (I - k k^T / r^2) / r.
  const Vec3 k(0.9, -1.4, 0.6);
  const double r = k.norm();
  const DualR x = DualR::variable(k[0], 0);
  const DualR y = DualR::variable(k[1], 1);
  const DualR z = DualR::variable(k[2], 2);
  using std::sqrt;
  const DualR f = sqrt(x * x + y * y + z * z);
  CHECK(f.v == doctest::Approx(r).epsilon(1e-14));
  CHECK((f.g - (k / r)).norm() < 1e-14);
  const Mat3 hess =
      ((Mat3::Identity() - k * k.transpose() / (r * r)) / r).eval();
  CHECK((f.h - hess).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dual quotient rule matches hand derivatives") {
  // g = 1 / (x + y z): grad and Hessian against symbolic values.
  const Vec3 k(1.3, 0.4, -0.8);
  const DualR x = DualR::variable(k[0], 0);
  const DualR y = DualR::variable(k[1], 1);
  const DualR z = DualR::variable(k[2], 2);
  const DualR g = 1.0 / (x + y * z);
  const double w = k[0] + k[1] * k[2];
  CHECK(g.v == doctest::Approx(1.0 / w).epsilon(1e-14));
  const Vec3 dw(1.0, k[2], k[1]);
  CHECK((g.g + dw / (w * w)).norm() < 1e-13);
  Mat3 hw = Mat3::Zero();
  hw(1, 2) = hw(2, 1) = 1.0;  // Hessian of w
  const Mat3 hess =
      (2.0 / (w * w * w) * dw * dw.transpose() - hw / (w * w)).eval();
  CHECK((g.h - hess).cwiseAbs().maxCoeff() < 1e-13);
}
