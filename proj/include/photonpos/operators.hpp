#pragma once

#include <array>
#include <utility>

#include "photonpos/diff.hpp"
#include "photonpos/frames.hpp"
#include "photonpos/scalar_field.hpp"
#include "photonpos/types.hpp"
#include "photonpos/wavefields.hpp"

namespace photonpos {

// Spin-1 matrices (S1, S2, S3); (S_j)_{lm} = -i eps_{jlm}.
const std::array<CMat3, 3>& spin_matrices();

// Helicity matrix Sigma = k.S/|k|.
CMat3 helicity(const Vec3& k);

// Sigma with analytic first and second derivatives.
MatrixField helicity_field();

// Projectors onto the +1 / -1 helicity eigenspaces: (Sigma^2 +- Sigma)/2.
std::pair<CMat3, CMat3> helicity_projectors(const Vec3& k);

// Frame-based position operator
//   X_j psi = i |k|^{1/2} E d_j(|k|^{-1/2} E^T psi).
// Analytic engine: uses the field's Jacobian and the frame derivatives; the
// result carries a Jacobian (from the field's Hessian) so one more operator
// application can stay analytic.  Numeric engines differentiate the stencil.
WaveField3 position_apply(const FrameField& ff, int j, const WaveField3& psi,
                          const DiffEngine& d);
CVec3 position_apply(const FrameField& ff, int j, const WaveField3& psi,
                     const Vec3& k, const DiffEngine& d);

// Real gauge functions parameterizing the general position operator.
struct GaugeData {
  ScalarField A = ScalarField::zero();
  ScalarField B = ScalarField::zero();
  ScalarField C = ScalarField::zero();
  ScalarField F = ScalarField::zero();
};

// General gauged position operator
//   e^{iF} X_j e^{-iF} + (d_j B) Sigma + (d_j C)(Sigma^2 - 1)
// applied as X_j psi + (d_j F) psi + (d_j B) Sigma psi + (d_j C)(Sigma^2-1) psi.
WaveField3 gauged_position_apply(const FrameField& ff, int j,
                                 const WaveField3& psi, const DiffEngine& d,
                                 const GaugeData& g);
CVec3 gauged_position_apply(const FrameField& ff, int j, const WaveField3& psi,
                            const Vec3& k, const DiffEngine& d,
                            const GaugeData& g);

// [X_j, X_l] psi at k.
CVec3 position_commutator(const FrameField& ff, int j, int l,
                          const WaveField3& psi, const Vec3& k,
                          const DiffEngine& d);

// Sigma psi as a field with derivative data.
WaveField3 helicity_apply(const WaveField3& psi);

}  // namespace photonpos
