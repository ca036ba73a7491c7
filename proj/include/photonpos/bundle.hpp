#pragma once

#include <functional>

#include "photonpos/diff.hpp"
#include "photonpos/frames.hpp"
#include "photonpos/types.hpp"
#include "photonpos/wavefields.hpp"

namespace photonpos {

enum class Basis2 { Cartesian, Polarization };

// Two-component (trivialized) photon wave function on R^3 \ {0}.
struct Section2 {
  std::function<CVec2(const Vec3&)> eval;
  std::function<CMat23(const Vec3&)> jac;  // column j = d f / dk_j
  std::function<CVec2(const Vec3&, int, int)> hess;
  Basis2 basis = Basis2::Cartesian;

  bool has_jac() const { return static_cast<bool>(jac); }
  bool has_hess() const { return static_cast<bool>(hess); }

  CVec2 operator()(const Vec3& k) const { return eval(k); }
};

// Hemisphere chart rule: south frame for k3 < 0, north frame for k3 >= 0.
// Any chart rule produces the same section components up to the in-plane
// transition rotation; this one keeps evaluations away from the strings.
struct Trivialization {
  FrameField south = FrameField::south();
  FrameField north = FrameField::north();
  double transversal_tol = 1e-10;

  Chart chart_at(const Vec3& k) const {
    return k[2] < 0.0 ? Chart::South : Chart::North;
  }
  const FrameField& field_at(const Vec3& k) const {
    return chart_at(k) == Chart::South ? south : north;
  }
};

// f^A(k) = (E_perp^T psi)(k) in the chart's frame.
CVec2 trivialize(const WaveField3& psi, const Trivialization& tr,
                 const Vec3& k);
Section2 trivialize(const WaveField3& psi, const Trivialization& tr);

// psi(k) = E_perp(k) f(k); output transversal by construction.
CVec3 untrivialize(const Section2& f, const Trivialization& tr, const Vec3& k);
WaveField3 untrivialize(const Section2& f, const Trivialization& tr);

// Newton-Wigner operator i(d_j - k_j/(2|k|^2)) on two-component sections.
Section2 nw_position_apply(int j, const Section2& f, const DiffEngine& d);
CVec2 nw_position_apply(int j, const Section2& f, const Vec3& k,
                        const DiffEngine& d);

// || trivialize(X_j psi)(k) - nw_j(trivialize(psi))(k) ||
double pullback_consistency(int j, const WaveField3& psi, const Vec3& k,
                            const Trivialization& tr, const DiffEngine& d);

// Helicity on C^2: sigma_2 in the Cartesian section basis, sigma_3 in the
// polarization basis.
CMat2 helicity_c2(Basis2 basis);

// Change from the Cartesian section basis to complex polarization vectors.
Section2 polarization_change(const Section2& f);

// Position/helicity eigenfunction as a 3-vector field on the given chart:
//   (E1 + i h E2)/sqrt(2) |k|^{1/2} e^{-i k.X}
WaveField3 eigenfunction_field3(const Vec3& X, int helicity,
                                const FrameField& ff);
// Trivialized counterpart.
Section2 eigenfunction_c2(const Vec3& X, int helicity, Basis2 basis);

}  // namespace photonpos
