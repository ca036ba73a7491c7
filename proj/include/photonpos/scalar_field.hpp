#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "photonpos/types.hpp"

namespace photonpos {

// Real scalar field on momentum space with analytic gradient (and, when
// available, Hessian).  Gauge functions A, B, C, F are supplied this way.
struct ScalarField {
  std::function<double(const Vec3&)> val;
  std::function<Vec3(const Vec3&)> grad;
  std::function<Mat3(const Vec3&)> hess;  // may be empty

  bool has_hess() const { return static_cast<bool>(hess); }

  static ScalarField zero() {
    return {[](const Vec3&) { return 0.0; },
            [](const Vec3&) { return Vec3::Zero().eval(); },
            [](const Vec3&) { return Mat3::Zero().eval(); }};
  }

  static ScalarField constant(double c) {
    return {[c](const Vec3&) { return c; },
            [](const Vec3&) { return Vec3::Zero().eval(); },
            [](const Vec3&) { return Mat3::Zero().eval(); }};
  }

  // b . k
  static ScalarField linear(const Vec3& b) {
    return {[b](const Vec3& k) { return b.dot(k); },
            [b](const Vec3&) { return b; },
            [](const Vec3&) { return Mat3::Zero().eval(); }};
  }

  // amp * exp(-|k - c|^2 / (2 w^2))
  static ScalarField gaussian_bump(double amp, const Vec3& c, double w) {
    const double iw2 = 1.0 / (w * w);
    auto value = [amp, c, iw2](const Vec3& k) {
      return amp * std::exp(-0.5 * iw2 * (k - c).squaredNorm());
    };
    return {value,
            [value, c, iw2](const Vec3& k) {
              return (-iw2 * value(k) * (k - c)).eval();
            },
            [value, c, iw2](const Vec3& k) {
              const Vec3 d = k - c;
              const double f = value(k);
              return (f * (iw2 * iw2 * d * d.transpose() -
                           iw2 * Mat3::Identity()))
                  .eval();
            }};
  }

  // winding * atan2(k2, k1); multivalued around the k3 axis, but its
  // gradient is single-valued off the axis.
  static ScalarField azimuthal(double winding) {
    return {[winding](const Vec3& k) {
              return winding * std::atan2(k[1], k[0]);
            },
            [winding](const Vec3& k) {
              const double rho2 = k[0] * k[0] + k[1] * k[1];
              return Vec3(-winding * k[1] / rho2, winding * k[0] / rho2, 0.0);
            },
            [winding](const Vec3& k) {
              const double rho2 = k[0] * k[0] + k[1] * k[1];
              const double rho4 = rho2 * rho2;
              Mat3 h = Mat3::Zero();
              h(0, 0) = 2.0 * winding * k[0] * k[1] / rho4;
              h(1, 1) = -h(0, 0);
              h(0, 1) = h(1, 0) =
                  winding * (k[1] * k[1] - k[0] * k[0]) / rho4;
              return h;
            }};
  }
};

inline ScalarField operator+(const ScalarField& f, const ScalarField& g) {
  ScalarField s;
  s.val = [f, g](const Vec3& k) { return f.val(k) + g.val(k); };
  s.grad = [f, g](const Vec3& k) { return (f.grad(k) + g.grad(k)).eval(); };
  if (f.has_hess() && g.has_hess())
    s.hess = [f, g](const Vec3& k) { return (f.hess(k) + g.hess(k)).eval(); };
  return s;
}

}  // namespace photonpos
