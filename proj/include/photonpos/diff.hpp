#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "photonpos/types.hpp"

namespace photonpos {

// Differentiation strategy for operator application.  Analytic mode relies
// on fields carrying their own Jacobians; the numeric modes evaluate a
// central-difference stencil, optionally Richardson-extrapolated.
struct DiffEngine {
  enum class Mode { Analytic, CentralDifference, Richardson };

  Mode mode = Mode::Analytic;
  double h = 1e-5;
  int levels = 2;

  static DiffEngine analytic() { return {Mode::Analytic, 0.0, 0}; }
  static DiffEngine central(double step = 1e-5) {
    return {Mode::CentralDifference, step, 1};
  }
  static DiffEngine richardson(double step = 1e-5, int levels = 2) {
    return {Mode::Richardson, step, levels};
  }

  // Step scaled to the magnitude of the evaluation point.
  double step(const Vec3& k) const { return h * std::max(1.0, k.norm()); }

  bool numeric() const { return mode != Mode::Analytic; }
};

// d(field)/dk_j by central differences at step s, O(s^2).
template <class F>
auto central_difference(F&& field, const Vec3& k, int j, double s) {
  Vec3 kp = k, km = k;
  kp[j] += s;
  km[j] -= s;
  return ((field(kp) - field(km)) / (2.0 * s)).eval();
}

template <class F>
auto central_difference_scalar(F&& field, const Vec3& k, int j, double s) {
  Vec3 kp = k, km = k;
  kp[j] += s;
  km[j] -= s;
  return (field(kp) - field(km)) / (2.0 * s);
}

// Numeric derivative of a vector-valued field according to the engine mode.
// Throws StepError when called with the Analytic engine: analytic data lives
// with the field, not with the engine.
template <class F>
auto differentiate(const DiffEngine& d, F&& field, const Vec3& k, int j) {
  if (!d.numeric())
    throw StepError("differentiate: analytic engine has no stencil");
  const double s0 = d.step(k);
  if (d.mode == DiffEngine::Mode::CentralDifference)
    return central_difference(field, k, j, s0);
  // Richardson table over step halving; error O(s^(2 levels)).
  using Value = decltype(central_difference(field, k, j, s0));
  std::vector<Value> row(static_cast<size_t>(d.levels));
  for (int m = 0; m < d.levels; ++m)
    row[m] = central_difference(field, k, j, s0 / std::pow(2.0, m));
  for (int lev = 1; lev < d.levels; ++lev) {
    const double f = std::pow(4.0, lev);
    for (int m = d.levels - 1; m >= lev; --m)
      row[m] = ((f * row[m] - row[m - 1]) / (f - 1.0)).eval();
  }
  return row[static_cast<size_t>(d.levels - 1)];
}

template <class F>
double differentiate_scalar(const DiffEngine& d, F&& field, const Vec3& k,
                            int j) {
  if (!d.numeric())
    throw StepError("differentiate: analytic engine has no stencil");
  const double s0 = d.step(k);
  if (d.mode == DiffEngine::Mode::CentralDifference)
    return central_difference_scalar(field, k, j, s0);
  std::vector<double> row(static_cast<size_t>(d.levels));
  for (int m = 0; m < d.levels; ++m)
    row[m] = central_difference_scalar(field, k, j, s0 / std::pow(2.0, m));
  for (int lev = 1; lev < d.levels; ++lev) {
    const double f = std::pow(4.0, lev);
    for (int m = d.levels - 1; m >= lev; --m)
      row[m] = (f * row[m] - row[m - 1]) / (f - 1.0);
  }
  return row[static_cast<size_t>(d.levels - 1)];
}

}  // namespace photonpos
