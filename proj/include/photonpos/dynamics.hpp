#pragma once

#include "photonpos/bundle.hpp"
#include "photonpos/operators.hpp"
#include "photonpos/types.hpp"
#include "photonpos/wavefields.hpp"

namespace photonpos {

// Free photon evolution: multiply by e^{-i c |k| t}.  Derivative data is
// updated exactly (the phase gradient is -i c t k_j / |k|).
WaveField3 evolve(const WaveField3& psi, double t, double c = 1.0);
Section2 evolve(const Section2& f, double t, double c = 1.0);

// <psi, X_j psi> / <psi, psi> under the d3k/|k| inner product.  Throws
// HermiticityError when any imaginary part exceeds imag_tol relative to the
// norm.
Vec3 expectation_position(const FrameField& ff, const WaveField3& psi,
                          const QuadratureGrid& g,
                          const DiffEngine& d = DiffEngine::analytic(),
                          double imag_tol = 1e-6);
Vec3 expectation_position(const Section2& f, const QuadratureGrid& g,
                          const DiffEngine& d = DiffEngine::analytic(),
                          double imag_tol = 1e-6);

// <psi, (k/|k|) psi> / <psi, psi>: the group-velocity direction.
Vec3 expectation_direction(const WaveField3& psi, const QuadratureGrid& g);

struct VelocityCheck {
  Vec3 lhs;  // d<X>/dt by central difference in t
  Vec3 rhs;  // c <k/|k|>
  double residual;
};

// Compares the finite-difference rate of <X>(t) against c <k/|k|>.
VelocityCheck velocity_check(const FrameField& ff, const WaveField3& psi,
                             double t, double dt, const QuadratureGrid& g,
                             double c = 1.0,
                             const DiffEngine& d = DiffEngine::analytic());

}  // namespace photonpos
