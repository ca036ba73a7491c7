#include "photonpos/bundle.hpp"

#include <cmath>

#include "photonpos/operators.hpp"

namespace photonpos {

namespace {

Eigen::Matrix<double, 3, 2> perp(const Mat3& E) {
  return E.leftCols<2>();
}

}  // namespace

CVec2 trivialize(const WaveField3& psi, const Trivialization& tr,
                 const Vec3& k) {
  if (k.norm() == 0.0) throw DomainError("trivialize: |k| = 0");
  const CVec3 v = psi.eval(k);
  const Complex kv = k.cast<Complex>().dot(v);
  // Scale by the max-norm (the squared 2-norm underflows for far-tail
  // values) and keep an absolute floor so that a numerically vanishing
  // field counts as transversal.
  if (std::abs(kv) >
      tr.transversal_tol * k.norm() * v.cwiseAbs().maxCoeff() + 1e-250)
    throw TransversalityError("trivialize: field is not transversal at k");
  const Mat3 E = tr.field_at(k).E(k);
  return (perp(E).transpose().cast<Complex>() * v).eval();
}

Section2 trivialize(const WaveField3& psi, const Trivialization& tr) {
  Section2 f;
  f.basis = Basis2::Cartesian;
  f.eval = [psi, tr](const Vec3& k) { return trivialize(psi, tr, k); };
  if (psi.has_jac())
    f.jac = [psi, tr](const Vec3& k) {
      const FrameField& ff = tr.field_at(k);
      const CVec3 v = psi.eval(k);
      const CMat3 jv = psi.jac(k);
      const Mat3 E = ff.E(k);
      CMat23 jj;
      for (int j = 0; j < 3; ++j)
        jj.col(j) = perp(ff.dE(k, j)).transpose().cast<Complex>() * v +
                    perp(E).transpose().cast<Complex>() * jv.col(j);
      return jj;
    };
  if (psi.has_hess())
    f.hess = [psi, tr](const Vec3& k, int j, int l) {
      const FrameField& ff = tr.field_at(k);
      const CVec3 v = psi.eval(k);
      const CMat3 jv = psi.jac(k);
      return (perp(ff.d2E(k, j, l)).transpose().cast<Complex>() * v +
              perp(ff.dE(k, j)).transpose().cast<Complex>() * jv.col(l) +
              perp(ff.dE(k, l)).transpose().cast<Complex>() * jv.col(j) +
              perp(ff.E(k)).transpose().cast<Complex>() * psi.hess(k, j, l))
          .eval();
    };
  return f;
}

CVec3 untrivialize(const Section2& f, const Trivialization& tr,
                   const Vec3& k) {
  if (k.norm() == 0.0) throw DomainError("untrivialize: |k| = 0");
  const Mat3 E = tr.field_at(k).E(k);
  return (perp(E).cast<Complex>() * f.eval(k)).eval();
}

WaveField3 untrivialize(const Section2& f, const Trivialization& tr) {
  WaveField3 psi;
  psi.transversal = true;
  psi.eval = [f, tr](const Vec3& k) { return untrivialize(f, tr, k); };
  if (f.has_jac())
    psi.jac = [f, tr](const Vec3& k) {
      const FrameField& ff = tr.field_at(k);
      const CVec2 v = f.eval(k);
      const CMat23 jv = f.jac(k);
      CMat3 jj;
      for (int j = 0; j < 3; ++j)
        jj.col(j) = perp(ff.dE(k, j)).cast<Complex>() * v +
                    perp(ff.E(k)).cast<Complex>() * jv.col(j);
      return jj;
    };
  if (f.has_hess())
    psi.hess = [f, tr](const Vec3& k, int j, int l) {
      const FrameField& ff = tr.field_at(k);
      const CVec2 v = f.eval(k);
      const CMat23 jv = f.jac(k);
      return (perp(ff.d2E(k, j, l)).cast<Complex>() * v +
              perp(ff.dE(k, j)).cast<Complex>() * jv.col(l) +
              perp(ff.dE(k, l)).cast<Complex>() * jv.col(j) +
              perp(ff.E(k)).cast<Complex>() * f.hess(k, j, l))
          .eval();
    };
  return psi;
}

Section2 nw_position_apply(int j, const Section2& f, const DiffEngine& d) {
  Section2 out;
  out.basis = f.basis;
  if (!d.numeric()) {
    if (!f.has_jac())
      throw InvariantError(
          "nw position operator: analytic engine needs a section Jacobian");
    out.eval = [f, j](const Vec3& k) {
      const double r2 = k.squaredNorm();
      return (kImag * (f.jac(k).col(j) - (k[j] / (2.0 * r2)) * f.eval(k)))
          .eval();
    };
    if (f.has_hess())
      out.jac = [f, j](const Vec3& k) {
        const double r2 = k.squaredNorm();
        const CVec2 v = f.eval(k);
        const CMat23 jv = f.jac(k);
        CMat23 jj;
        for (int l = 0; l < 3; ++l) {
          const double c =
              (j == l ? 1.0 : 0.0) / (2.0 * r2) - k[j] * k[l] / (r2 * r2);
          jj.col(l) = kImag * (f.hess(k, j, l) - c * v -
                               (k[j] / (2.0 * r2)) * jv.col(l));
        }
        return jj;
      };
    return out;
  }
  out.eval = [f, j, d](const Vec3& k) {
    if (k.norm() <= d.step(k) * std::sqrt(3.0))
      throw StepError("nw position operator: stencil crosses the origin");
    const CVec2 df = differentiate(d, f.eval, k, j);
    return (kImag * (df - (k[j] / (2.0 * k.squaredNorm())) * f.eval(k)))
        .eval();
  };
  out.jac = [d, eval = out.eval](const Vec3& k) {
    CMat23 jj;
    for (int l = 0; l < 3; ++l) jj.col(l) = differentiate(d, eval, k, l);
    return jj;
  };
  return out;
}

CVec2 nw_position_apply(int j, const Section2& f, const Vec3& k,
                        const DiffEngine& d) {
  return nw_position_apply(j, f, d).eval(k);
}

double pullback_consistency(int j, const WaveField3& psi, const Vec3& k,
                            const Trivialization& tr, const DiffEngine& d) {
  const FrameField& ff = tr.field_at(k);
  const WaveField3 xpsi = position_apply(ff, j, psi, d);
  const CVec2 via_field = trivialize(xpsi, tr, k);
  const CVec2 via_nw = nw_position_apply(j, trivialize(psi, tr), k, d);
  return (via_field - via_nw).norm();
}

CMat2 helicity_c2(Basis2 basis) {
  CMat2 m = CMat2::Zero();
  if (basis == Basis2::Cartesian) {
    m(0, 1) = -kImag;
    m(1, 0) = kImag;
  } else {
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
  }
  return m;
}

Section2 polarization_change(const Section2& f) {
  if (f.basis != Basis2::Cartesian)
    throw BasisError("polarization change: section is not in Cartesian basis");
  // f'1 = (f1 - i f2)/sqrt(2), f'2 = (f1 + i f2)/sqrt(2)
  static const CMat2 T = [] {
    CMat2 t;
    const double isq2 = 1.0 / std::sqrt(2.0);
    t << isq2, -kImag * isq2, isq2, kImag * isq2;
    return t;
  }();
  Section2 out;
  out.basis = Basis2::Polarization;
  out.eval = [f](const Vec3& k) { return (T * f.eval(k)).eval(); };
  if (f.has_jac())
    out.jac = [f](const Vec3& k) { return (T * f.jac(k)).eval(); };
  if (f.has_hess())
    out.hess = [f](const Vec3& k, int j, int l) {
      return (T * f.hess(k, j, l)).eval();
    };
  return out;
}

namespace {

// g(k) = |k|^{1/2} e^{-i k.X} with analytic derivatives.
CEnvelope position_envelope(const Vec3& X) {
  CEnvelope env;
  env.val = [X](const Vec3& k) {
    return std::sqrt(k.norm()) * std::exp(Complex(0.0, -k.dot(X)));
  };
  auto logd = [X](const Vec3& k) {
    const double r2 = k.squaredNorm();
    CVec3 c;
    for (int j = 0; j < 3; ++j) c[j] = Complex(k[j] / (2.0 * r2), -X[j]);
    return c;
  };
  env.grad = [val = env.val, logd](const Vec3& k) {
    return (val(k) * logd(k)).eval();
  };
  env.hess = [val = env.val, logd](const Vec3& k, int j, int l) {
    const double r2 = k.squaredNorm();
    const CVec3 c = logd(k);
    const double dd =
        (j == l ? 1.0 : 0.0) / (2.0 * r2) - k[j] * k[l] / (r2 * r2);
    return val(k) * (c[j] * c[l] + dd);
  };
  return env;
}

}  // namespace

WaveField3 eigenfunction_field3(const Vec3& X, int helicity,
                                const FrameField& ff) {
  return polarized_field(ff, helicity, position_envelope(X));
}

Section2 eigenfunction_c2(const Vec3& X, int helicity, Basis2 basis) {
  if (helicity != 1 && helicity != -1)
    throw InvariantError("eigenfunction: helicity must be +-1");
  const CEnvelope env = position_envelope(X);
  CVec2 pol;
  if (basis == Basis2::Cartesian)
    pol << 1.0 / std::sqrt(2.0),
        Complex(0.0, helicity / std::sqrt(2.0));
  else
    pol << (helicity > 0 ? 1.0 : 0.0), (helicity > 0 ? 0.0 : 1.0);
  Section2 f;
  f.basis = basis;
  f.eval = [env, pol](const Vec3& k) { return (env.val(k) * pol).eval(); };
  f.jac = [env, pol](const Vec3& k) {
    const CVec3 g = env.grad(k);
    CMat23 jj;
    for (int j = 0; j < 3; ++j) jj.col(j) = g[j] * pol;
    return jj;
  };
  f.hess = [env, pol](const Vec3& k, int j, int l) {
    return (env.hess(k, j, l) * pol).eval();
  };
  return f;
}

}  // namespace photonpos
