#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "photonpos/bundle.hpp"
#include "photonpos/operators.hpp"
#include "photonpos/wavefields.hpp"

using namespace photonpos;

namespace {

const Vec3 kCenter(-0.4, 0.7, -2.6);

WaveField3 test_packet(int helicity = 1) {
  return gaussian_packet(kCenter, 0.45, helicity, FrameField::south());
}

std::vector<Vec3> sample_points(int n, unsigned seed = 61) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back((kCenter + Vec3(u(rng), u(rng), u(rng))).eval());
  return pts;
}

Trivialization south_only() {
  Trivialization tr;
  tr.south = FrameField::south();
  tr.north = FrameField::south();
  return tr;
}

}  // namespace

TEST_CASE("trivialize/untrivialize round trip") {
  const WaveField3 psi = test_packet();
  const Trivialization tr;  // default hemisphere rule
  const Section2 f = trivialize(psi, tr);
  const WaveField3 back = untrivialize(f, tr);
  for (const Vec3& k : sample_points(30)) {
    CHECK((back.eval(k) - psi.eval(k)).norm() < 1e-12 * psi.eval(k).norm());
    // Components are preserved: |f| = |psi| pointwise.
    CHECK(f.eval(k).norm() ==
          doctest::Approx(psi.eval(k).norm()).epsilon(1e-12));
  }
}

TEST_CASE("trivializing a non-transversal field fails loudly") {
  WaveField3 bad;
  bad.eval = [](const Vec3&) { return CVec3(1.0, 0.0, 0.0); };
  bad.transversal = false;
  const Trivialization tr;
  CHECK_THROWS_AS(trivialize(bad, tr, Vec3(1.0, 0.2, -0.5)),
                  TransversalityError);
}

TEST_CASE("section Jacobian and Hessian match stencil oracles") {
  const WaveField3 psi = test_packet();
  const Section2 f = trivialize(psi, south_only());
  REQUIRE(f.has_jac());
  REQUIRE(f.has_hess());
  for (const Vec3& k : sample_points(10, 67))
    for (int j = 0; j < 3; ++j) {
      Vec3 kp = k, km = k;
      kp[j] += 1e-6;
      km[j] -= 1e-6;
      CHECK((f.jac(k).col(j) - (f.eval(kp) - f.eval(km)) / 2e-6).norm() <
            1e-7);
      for (int l = 0; l < 3; ++l) {
        Vec3 qp = k, qm = k;
        qp[l] += 1e-5;
        qm[l] -= 1e-5;
        const CVec2 fd =
            ((f.jac(qp).col(j) - f.jac(qm).col(j)) / 2e-5).eval();
        CHECK((f.hess(k, j, l) - fd).norm() < 1e-6);
      }
    }
}

TEST_CASE("two-component helicity matrices are exact") {
  CMat2 sigma2, sigma3;
  sigma2 << 0.0, -kImag, kImag, 0.0;
  sigma3 << 1.0, 0.0, 0.0, -1.0;
  CHECK((helicity_c2(Basis2::Cartesian) - sigma2).norm() == 0.0);
  CHECK((helicity_c2(Basis2::Polarization) - sigma3).norm() == 0.0);
}

TEST_CASE("helicity commutes with trivialization") {
  const WaveField3 psi = test_packet(-1);
  const Trivialization tr = south_only();
  const CMat2 s2 = helicity_c2(Basis2::Cartesian);
  for (const Vec3& k : sample_points(20, 71)) {
    const CVec2 lhs = trivialize(helicity_apply(psi), tr, k);
    const CVec2 rhs = (s2 * trivialize(psi, tr, k)).eval();
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("polarization basis change diagonalizes helicity") {
  const WaveField3 psi = test_packet();
  const Section2 f = trivialize(psi, south_only());
  const Section2 fp = polarization_change(f);
  CHECK(fp.basis == Basis2::Polarization);
  CHECK_THROWS_AS(polarization_change(fp), BasisError);
  for (const Vec3& k : sample_points(15, 73)) {
    // Positive-helicity packet lands on the first polarization component.
    const CVec2 v = fp.eval(k);
    CHECK(std::abs(v[1]) < 1e-12 * v.norm());
    // Known value: (1, i)/sqrt(2) -> (1, 0).
    const CVec2 circ(Complex(1.0, 0.0) / std::sqrt(2.0),
                     Complex(0.0, 1.0) / std::sqrt(2.0));
    Section2 c;
    c.eval = [circ](const Vec3&) { return circ; };
    const CVec2 w = polarization_change(c).eval(k);
    CHECK(std::abs(w[0] - 1.0) < 1e-14);
    CHECK(std::abs(w[1]) < 1e-14);
    // Unitarity and diagonalization.
    const CMat2 s3 = helicity_c2(Basis2::Polarization);
    const CVec2 sv = polarization_change([&] {
                       Section2 t;
                       t.eval = [&](const Vec3& q) {
                         return (helicity_c2(Basis2::Cartesian) * f.eval(q))
                             .eval();
                       };
                       return t;
                     }())
                         .eval(k);
    CHECK((sv - s3 * fp.eval(k)).norm() < 1e-12);
  }
}

TEST_CASE("two-component operator agrees between engines") {
  const WaveField3 psi = test_packet();
  const Section2 f = trivialize(psi, south_only());
  const DiffEngine an = DiffEngine::analytic();
  const DiffEngine cd = DiffEngine::central(1e-4);
  for (const Vec3& k : sample_points(10, 79))
    for (int j = 0; j < 3; ++j) {
      const CVec2 a = nw_position_apply(j, f, k, an);
      const CVec2 b = nw_position_apply(j, f, k, cd);
      CHECK((a - b).norm() < 1e-6 * f.eval(k).norm());
    }
}

TEST_CASE("stencils that straddle the origin are refused") {
  Section2 f;
  f.eval = [](const Vec3&) { return CVec2(1.0, 0.0); };
  CHECK_THROWS_AS(nw_position_apply(0, f, Vec3(1e-6, 0.0, 0.0),
                                    DiffEngine::central(1e-5)),
                  StepError);
}

TEST_CASE("three-component and two-component operators agree") {
  const WaveField3 psi = test_packet();
  const Trivialization tr = south_only();
  const DiffEngine d = DiffEngine::analytic();
  for (const Vec3& k : sample_points(20, 83))
    for (int j = 0; j < 3; ++j)
      CHECK(pullback_consistency(j, psi, k, tr, d) <
            1e-9 * psi.eval(k).norm());
}

TEST_CASE("position eigenfunctions in the 3-component picture") {
  const FrameField ff = FrameField::south();
  const Vec3 X(0.8, -0.3, 1.2);
  const DiffEngine d = DiffEngine::analytic();
  for (const int h : {1, -1}) {
    const WaveField3 psi = eigenfunction_field3(X, h, ff);
    for (const Vec3& k : sample_points(15, 89)) {
      const CVec3 v = psi.eval(k);
      CHECK((helicity(k) * v - double(h) * v).norm() < 1e-12 * v.norm());
      for (int j = 0; j < 3; ++j)
        CHECK((position_apply(ff, j, psi, k, d) - X[j] * v).norm() <
              1e-10 * v.norm());
    }
  }
}

TEST_CASE("position eigenfunctions in the 2-component picture") {
  const Vec3 X(-0.5, 0.9, 0.4);
  const DiffEngine d = DiffEngine::analytic();
  for (const Basis2 basis : {Basis2::Cartesian, Basis2::Polarization}) {
    for (const int h : {1, -1}) {
      const Section2 f = eigenfunction_c2(X, h, basis);
      CHECK(f.basis == basis);
      for (const Vec3& k : sample_points(10, 97)) {
        const CVec2 v = f.eval(k);
        CHECK((helicity_c2(basis) * v - double(h) * v).norm() <
              1e-12 * v.norm());
        for (int j = 0; j < 3; ++j)
          CHECK((nw_position_apply(j, f, k, d) - X[j] * v).norm() <
                1e-10 * v.norm());
      }
    }
  }
}
