#pragma once

#include <cmath>
#include <complex>

#include "photonpos/types.hpp"

namespace photonpos {

// Second-order forward-mode scalar over R^3: carries value, gradient and
// Hessian with respect to the three wavevector components.  Used to obtain
// exact first and second derivatives of the closed-form frame fields and of
// analytic test envelopes.
template <class S>
struct Dual2 {
  using Grad = Eigen::Matrix<S, 3, 1>;
  using Hess = Eigen::Matrix<S, 3, 3>;

  S v{};
  Grad g = Grad::Zero();
  Hess h = Hess::Zero();

  Dual2() = default;
  Dual2(S value) : v(value) {}
  Dual2(S value, Grad grad, Hess hess)
      : v(value), g(std::move(grad)), h(std::move(hess)) {}

  static Dual2 variable(S value, int axis) {
    Dual2 d(value);
    d.g[axis] = S(1);
    return d;
  }

  Dual2 operator-() const { return {S(-1) * v, -g, -h}; }
};

using DualR = Dual2<double>;
using DualC = Dual2<Complex>;

template <class S>
Dual2<S> operator+(const Dual2<S>& a, const Dual2<S>& b) {
  return {a.v + b.v, a.g + b.g, a.h + b.h};
}

template <class S>
Dual2<S> operator-(const Dual2<S>& a, const Dual2<S>& b) {
  return {a.v - b.v, a.g - b.g, a.h - b.h};
}

template <class S>
Dual2<S> operator*(const Dual2<S>& a, const Dual2<S>& b) {
  return {a.v * b.v, a.g * b.v + b.g * a.v,
          a.h * b.v + b.h * a.v + a.g * b.g.transpose() +
              b.g * a.g.transpose()};
}

template <class S>
Dual2<S> operator+(const Dual2<S>& a, S c) {
  return {a.v + c, a.g, a.h};
}
template <class S>
Dual2<S> operator+(S c, const Dual2<S>& a) {
  return a + c;
}
template <class S>
Dual2<S> operator-(const Dual2<S>& a, S c) {
  return {a.v - c, a.g, a.h};
}
template <class S>
Dual2<S> operator-(S c, const Dual2<S>& a) {
  return {c - a.v, -a.g, -a.h};
}
template <class S>
Dual2<S> operator*(const Dual2<S>& a, S c) {
  return {a.v * c, a.g * c, a.h * c};
}
template <class S>
Dual2<S> operator*(S c, const Dual2<S>& a) {
  return a * c;
}

template <class S>
Dual2<S> inverse(const Dual2<S>& a) {
  const S iv = S(1) / a.v;
  const S iv2 = iv * iv;
  return {iv, -a.g * iv2,
          (S(2) * iv * a.g * a.g.transpose() - a.h) * iv2};
}

template <class S>
Dual2<S> operator/(const Dual2<S>& a, const Dual2<S>& b) {
  return a * inverse(b);
}
template <class S>
Dual2<S> operator/(S c, const Dual2<S>& b) {
  return inverse(b) * c;
}
template <class S>
Dual2<S> operator/(const Dual2<S>& a, S c) {
  return a * (S(1) / c);
}

template <class S>
Dual2<S> sqrt(const Dual2<S>& a) {
  using std::sqrt;
  const S s = sqrt(a.v);
  const S i2s = S(1) / (S(2) * s);
  return {s, a.g * i2s,
          a.h * i2s - a.g * a.g.transpose() * (i2s * i2s * i2s * S(2))};
}

template <class S>
Dual2<S> exp(const Dual2<S>& a) {
  using std::exp;
  const S e = exp(a.v);
  return {e, e * a.g, e * (a.h + a.g * a.g.transpose())};
}

inline DualC to_complex(const DualR& a) {
  DualC c;
  c.v = a.v;
  c.g = a.g.cast<Complex>();
  c.h = a.h.cast<Complex>();
  return c;
}

}  // namespace photonpos
