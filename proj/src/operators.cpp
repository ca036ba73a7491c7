#include "photonpos/operators.hpp"

#include <cmath>

namespace photonpos {

const std::array<CMat3, 3>& spin_matrices() {
  static const std::array<CMat3, 3> S = [] {
    std::array<CMat3, 3> s;
    for (auto& m : s) m = CMat3::Zero();
    s[0](1, 2) = -kImag;
    s[0](2, 1) = kImag;
    s[1](0, 2) = kImag;
    s[1](2, 0) = -kImag;
    s[2](0, 1) = -kImag;
    s[2](1, 0) = kImag;
    return s;
  }();
  return S;
}

namespace {

CMat3 k_dot_spin(const Vec3& k) {
  const auto& S = spin_matrices();
  return (k[0] * S[0] + k[1] * S[1] + k[2] * S[2]).eval();
}

}  // namespace

CMat3 helicity(const Vec3& k) {
  const double r = k.norm();
  if (r == 0.0) throw DomainError("helicity: |k| = 0");
  return (k_dot_spin(k) / r).eval();
}

MatrixField helicity_field() {
  MatrixField f;
  f.val = [](const Vec3& k) { return helicity(k); };
  f.d = [](const Vec3& k, int j) {
    const double r = k.norm();
    const double vj = -k[j] / (r * r * r);
    return (spin_matrices()[static_cast<size_t>(j)] / r + k_dot_spin(k) * vj)
        .eval();
  };
  f.d2 = [](const Vec3& k, int j, int l) {
    const double r = k.norm();
    const double r3 = r * r * r;
    const double vj = -k[j] / r3;
    const double vl = -k[l] / r3;
    const double vjl =
        -(j == l ? 1.0 : 0.0) / r3 + 3.0 * k[j] * k[l] / (r3 * r * r);
    const auto& S = spin_matrices();
    return (S[static_cast<size_t>(j)] * vl + S[static_cast<size_t>(l)] * vj +
            k_dot_spin(k) * vjl)
        .eval();
  };
  return f;
}

std::pair<CMat3, CMat3> helicity_projectors(const Vec3& k) {
  const CMat3 sigma = helicity(k);
  const CMat3 sigma2 = sigma * sigma;
  return {((sigma2 + sigma) / 2.0).eval(), ((sigma2 - sigma) / 2.0).eval()};
}

WaveField3 helicity_apply(const WaveField3& psi) {
  WaveField3 out = matrix_apply(helicity_field(), psi);
  out.transversal = true;  // range of Sigma is transversal
  return out;
}

namespace {

void require_jac(const WaveField3& psi) {
  if (!psi.has_jac())
    throw InvariantError(
        "position operator: analytic engine needs a field Jacobian");
}

}  // namespace

WaveField3 position_apply(const FrameField& ff, int j, const WaveField3& psi,
                          const DiffEngine& d) {
  WaveField3 out;
  out.transversal = psi.transversal;

  if (!d.numeric()) {
    require_jac(psi);
    out.eval = [ff, j, psi](const Vec3& k) {
      const double r2 = k.squaredNorm();
      const Mat3 E = ff.E(k);
      const Mat3 dEj = ff.dE(k, j);
      const CVec3 v = psi.eval(k);
      return (kImag *
              (psi.jac(k).col(j) - (k[j] / (2.0 * r2)) * v +
               (E * dEj.transpose()).cast<Complex>() * v))
          .eval();
    };
    if (psi.has_hess())
      out.jac = [ff, j, psi](const Vec3& k) {
        const double r2 = k.squaredNorm();
        const Mat3 E = ff.E(k);
        const Mat3 dEj = ff.dE(k, j);
        const CVec3 v = psi.eval(k);
        const CMat3 jf = psi.jac(k);
        CMat3 jj;
        for (int l = 0; l < 3; ++l) {
          const Mat3 dEl = ff.dE(k, l);
          const Mat3 d2Ejl = ff.d2E(k, j, l);
          const double c =
              (j == l ? 1.0 : 0.0) / (2.0 * r2) - k[j] * k[l] / (r2 * r2);
          jj.col(l) =
              kImag * (psi.hess(k, j, l) - c * v -
                       (k[j] / (2.0 * r2)) * jf.col(l) +
                       ((dEl * dEj.transpose() + E * d2Ejl.transpose()))
                               .cast<Complex>() *
                           v +
                       (E * dEj.transpose()).cast<Complex>() * jf.col(l));
        }
        return jj;
      };
    return out;
  }

  // Numeric path: differentiate g(k) = |k|^{-1/2} E^T psi on a stencil.
  auto g = [ff, psi](const Vec3& k) {
    if (!ff.contains(k))
      throw StepError("position operator: stencil leaves the frame domain");
    return (std::pow(k.squaredNorm(), -0.25) *
            ff.E(k).transpose().cast<Complex>() * psi.eval(k))
        .eval();
  };
  out.eval = [ff, j, d, g](const Vec3& k) {
    const CVec3 dg = differentiate(d, g, k, j);
    return (kImag * std::pow(k.squaredNorm(), 0.25) *
            ff.E(k).cast<Complex>() * dg)
        .eval();
  };
  out.jac = [d, eval = out.eval](const Vec3& k) {
    CMat3 jj;
    for (int l = 0; l < 3; ++l) jj.col(l) = differentiate(d, eval, k, l);
    return jj;
  };
  return out;
}

CVec3 position_apply(const FrameField& ff, int j, const WaveField3& psi,
                     const Vec3& k, const DiffEngine& d) {
  return position_apply(ff, j, psi, d).eval(k);
}

namespace {

// Multiplier field built from component j of grad f.
CScalarField gradient_component(const ScalarField& f, int j) {
  CScalarField m;
  m.val = [f, j](const Vec3& k) { return Complex(f.grad(k)[j]); };
  if (f.has_hess())
    m.grad = [f, j](const Vec3& k) {
      return f.hess(k).col(j).cast<Complex>().eval();
    };
  return m;
}

MatrixField projector_minus_identity() {
  MatrixField p = transversal_projector_field();
  MatrixField f = p;
  f.val = [p](const Vec3& k) {
    return (p.val(k) - CMat3::Identity()).eval();
  };
  return f;
}

}  // namespace

WaveField3 gauged_position_apply(const FrameField& ff, int j,
                                 const WaveField3& psi, const DiffEngine& d,
                                 const GaugeData& g) {
  WaveField3 out = position_apply(ff, j, psi, d);
  out = add(out, scalar_multiply(psi, gradient_component(g.F, j)));
  out = add(out, scalar_multiply(helicity_apply(psi),
                                 gradient_component(g.B, j)));
  out = add(out, scalar_multiply(matrix_apply(projector_minus_identity(), psi),
                                 gradient_component(g.C, j)));
  out.transversal = false;  // the (Sigma^2 - 1) term leaves the subspace
  return out;
}

CVec3 gauged_position_apply(const FrameField& ff, int j, const WaveField3& psi,
                            const Vec3& k, const DiffEngine& d,
                            const GaugeData& g) {
  return gauged_position_apply(ff, j, psi, d, g).eval(k);
}

CVec3 position_commutator(const FrameField& ff, int j, int l,
                          const WaveField3& psi, const Vec3& k,
                          const DiffEngine& d) {
  const WaveField3 xl = position_apply(ff, l, psi, d);
  const WaveField3 xj = position_apply(ff, j, psi, d);
  return (position_apply(ff, j, xl, k, d) - position_apply(ff, l, xj, k, d))
      .eval();
}

}  // namespace photonpos
