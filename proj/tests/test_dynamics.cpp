#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "photonpos/dynamics.hpp"

using namespace photonpos;

namespace {

const Vec3 kCenter(0.3, -0.6, -2.5);
const GridSpec kGrid{64, 48, 56, 2.6};

WaveField3 test_packet(const Vec3& X0 = Vec3::Zero()) {
  return gaussian_packet(kCenter, 0.45, 1, FrameField::south(), X0, kGrid);
}

std::vector<Vec3> sample_points(int n, unsigned seed = 101) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back((kCenter + Vec3(u(rng), u(rng), u(rng))).eval());
  return pts;
}

}  // namespace

TEST_CASE("evolution is pointwise multiplication by the dispersion phase") {
  const WaveField3 psi = test_packet();
  const double t = 0.8, c = 2.0;
  const WaveField3 pt = evolve(psi, t, c);
  for (const Vec3& k : sample_points(20)) {
    const Complex phase = std::exp(Complex(0.0, -c * k.norm() * t));
    CHECK((pt.eval(k) - phase * psi.eval(k)).norm() < 1e-13);
  }
}

TEST_CASE("evolution satisfies the group law") {
  const WaveField3 psi = test_packet();
  const WaveField3 a = evolve(evolve(psi, 0.7), 0.4);
  const WaveField3 b = evolve(psi, 1.1);
  for (const Vec3& k : sample_points(15, 103)) {
    CHECK((a.eval(k) - b.eval(k)).norm() < 1e-13);
    CHECK((a.jac(k) - b.jac(k)).norm() < 1e-12);
  }
}

TEST_CASE("evolved derivative data matches stencil oracles") {
  const WaveField3 pt = evolve(test_packet(), 1.3);
  REQUIRE(pt.has_jac());
  REQUIRE(pt.has_hess());
  for (const Vec3& k : sample_points(8, 107))
    for (int j = 0; j < 3; ++j) {
      Vec3 kp = k, km = k;
      kp[j] += 1e-6;
      km[j] -= 1e-6;
      CHECK((pt.jac(k).col(j) - (pt.eval(kp) - pt.eval(km)) / 2e-6).norm() <
            1e-7);
      for (int l = 0; l < 3; ++l) {
        Vec3 qp = k, qm = k;
        qp[l] += 1e-5;
        qm[l] -= 1e-5;
        CHECK((pt.hess(k, j, l) -
               ((pt.jac(qp).col(j) - pt.jac(qm).col(j)) / 2e-5).eval())
                  .norm() < 1e-5);
      }
    }
}

TEST_CASE("norm and helicity are conserved under evolution") {
  const WaveField3 psi = test_packet();
  const QuadratureGrid grid(kGrid);
  const double n0 = bb_inner(psi, psi, grid).real();
  const double h0 = bb_inner(psi, helicity_apply(psi), grid).real();
  for (const double t : {0.3, 1.0, 4.0}) {
    const WaveField3 pt = evolve(psi, t);
    CHECK(std::abs(bb_inner(pt, pt, grid).real() - n0) < 1e-10);
    CHECK(std::abs(bb_inner(pt, helicity_apply(pt), grid).real() - h0) <
          1e-10);
  }
}

TEST_CASE("expectation of position reproduces the packet center") {
  const Vec3 X0(1.2, -0.4, 0.9);
  const WaveField3 psi = test_packet(X0);
  const QuadratureGrid grid(kGrid);
  const Vec3 x = expectation_position(FrameField::south(), psi, grid);
  CHECK((x - X0).norm() < 1e-6);
  // The two-component route gives the same answer.
  Trivialization tr;
  tr.south = FrameField::south();
  tr.north = FrameField::south();
  const Vec3 x2 = expectation_position(trivialize(psi, tr), grid);
  CHECK((x - x2).norm() < 1e-8);
}

TEST_CASE("wave packets travel at c along the mean direction") {
  const WaveField3 psi = test_packet(Vec3(0.5, 0.0, -0.2));
  const QuadratureGrid grid(kGrid);
  const double c = 1.7;
  const VelocityCheck vc =
      velocity_check(FrameField::south(), psi, 0.6, 1e-3, grid, c);
  CHECK(vc.residual < 1e-6);
  CHECK((vc.rhs - c * expectation_direction(psi, grid)).norm() < 1e-12);
  // The mean direction is a unit-length average of k/|k|, dominated by the
  // packet center direction.
  CHECK(vc.rhs.norm() <= c * (1.0 + 1e-12));
  CHECK(vc.rhs.dot(kCenter.normalized()) > 0.9 * c * vc.rhs.norm() / c);
}

TEST_CASE("free evolution moves the packet linearly") {
  const Vec3 X0(0.0, 0.3, -0.1);
  const WaveField3 psi = test_packet(X0);
  const QuadratureGrid grid(kGrid);
  const FrameField ff = FrameField::south();
  const Vec3 v = expectation_direction(psi, grid);
  for (const double t : {0.5, 2.0}) {
    const Vec3 x = expectation_position(ff, evolve(psi, t), grid);
    CHECK((x - (X0 + t * v)).norm() < 1e-6);
  }
}
