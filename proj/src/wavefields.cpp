#include "photonpos/wavefields.hpp"

#include <cmath>
#include <numbers>

namespace photonpos {

MatrixField MatrixField::constant(const CMat3& m) {
  MatrixField f;
  f.val = [m](const Vec3&) { return m; };
  f.d = [](const Vec3&, int) { return CMat3::Zero().eval(); };
  f.d2 = [](const Vec3&, int, int) { return CMat3::Zero().eval(); };
  return f;
}

WaveField3 add(const WaveField3& f, const WaveField3& g) {
  WaveField3 out;
  out.eval = [f, g](const Vec3& k) { return (f.eval(k) + g.eval(k)).eval(); };
  if (f.has_jac() && g.has_jac())
    out.jac = [f, g](const Vec3& k) { return (f.jac(k) + g.jac(k)).eval(); };
  if (f.has_hess() && g.has_hess())
    out.hess = [f, g](const Vec3& k, int j, int l) {
      return (f.hess(k, j, l) + g.hess(k, j, l)).eval();
    };
  out.transversal = f.transversal && g.transversal;
  return out;
}

WaveField3 subtract(const WaveField3& f, const WaveField3& g) {
  return add(f, scale(g, Complex(-1.0)));
}

WaveField3 scale(const WaveField3& f, Complex c) {
  WaveField3 out;
  out.eval = [f, c](const Vec3& k) { return (c * f.eval(k)).eval(); };
  if (f.has_jac())
    out.jac = [f, c](const Vec3& k) { return (c * f.jac(k)).eval(); };
  if (f.has_hess())
    out.hess = [f, c](const Vec3& k, int j, int l) {
      return (c * f.hess(k, j, l)).eval();
    };
  out.transversal = f.transversal;
  return out;
}

WaveField3 coordinate_multiply(const WaveField3& f, int l) {
  WaveField3 out;
  out.eval = [f, l](const Vec3& k) { return (k[l] * f.eval(k)).eval(); };
  if (f.has_jac())
    out.jac = [f, l](const Vec3& k) {
      CMat3 jj = k[l] * f.jac(k);
      jj.col(l) += f.eval(k);
      return jj;
    };
  if (f.has_hess())
    out.hess = [f, l](const Vec3& k, int j, int m) {
      CVec3 h = k[l] * f.hess(k, j, m);
      if (j == l) h += f.jac(k).col(m);
      if (m == l) h += f.jac(k).col(j);
      return h.eval();
    };
  out.transversal = f.transversal;
  return out;
}

WaveField3 scalar_multiply(const WaveField3& f, const CScalarField& m) {
  WaveField3 out;
  out.eval = [f, m](const Vec3& k) { return (m.val(k) * f.eval(k)).eval(); };
  if (f.has_jac() && m.grad)
    out.jac = [f, m](const Vec3& k) {
      const CVec3 g = m.grad(k);
      CMat3 jj = m.val(k) * f.jac(k);
      jj += f.eval(k) * g.transpose();
      return jj.eval();
    };
  out.transversal = f.transversal;
  return out;
}

WaveField3 matrix_apply(const MatrixField& M, const WaveField3& f) {
  WaveField3 out;
  out.eval = [M, f](const Vec3& k) { return (M.val(k) * f.eval(k)).eval(); };
  if (f.has_jac() && M.has_d())
    out.jac = [M, f](const Vec3& k) {
      const CVec3 v = f.eval(k);
      const CMat3 jf = f.jac(k);
      CMat3 jj;
      for (int j = 0; j < 3; ++j)
        jj.col(j) = M.d(k, j) * v + M.val(k) * jf.col(j);
      return jj;
    };
  if (f.has_hess() && M.has_d2())
    out.hess = [M, f](const Vec3& k, int j, int l) {
      const CVec3 v = f.eval(k);
      const CMat3 jf = f.jac(k);
      return (M.d2(k, j, l) * v + M.d(k, j) * jf.col(l) +
              M.d(k, l) * jf.col(j) + M.val(k) * f.hess(k, j, l))
          .eval();
    };
  return out;
}

MatrixField transversal_projector_field() {
  MatrixField f;
  f.val = [](const Vec3& k) {
    const double w = 1.0 / k.squaredNorm();
    return (Mat3::Identity() - w * k * k.transpose()).cast<Complex>().eval();
  };
  f.d = [](const Vec3& k, int j) {
    const double r2 = k.squaredNorm();
    const double w = 1.0 / r2;
    const double wj = -2.0 * k[j] / (r2 * r2);
    Vec3 e = Vec3::Zero();
    e[j] = 1.0;
    Mat3 d = -(e * k.transpose() + k * e.transpose()) * w -
             k * k.transpose() * wj;
    return d.cast<Complex>().eval();
  };
  f.d2 = [](const Vec3& k, int j, int l) {
    const double r2 = k.squaredNorm();
    const double r4 = r2 * r2;
    const double w = 1.0 / r2;
    const double wj = -2.0 * k[j] / r4;
    const double wl = -2.0 * k[l] / r4;
    const double wjl = -2.0 * (j == l ? 1.0 : 0.0) / r4 +
                       8.0 * k[j] * k[l] / (r4 * r2);
    Vec3 ej = Vec3::Zero(), el = Vec3::Zero();
    ej[j] = 1.0;
    el[l] = 1.0;
    Mat3 d = -(ej * el.transpose() + el * ej.transpose()) * w -
             (ej * k.transpose() + k * ej.transpose()) * wl -
             (el * k.transpose() + k * el.transpose()) * wj -
             k * k.transpose() * wjl;
    return d.cast<Complex>().eval();
  };
  return f;
}

WaveField3 transversal_project(const WaveField3& f) {
  WaveField3 out = matrix_apply(transversal_projector_field(), f);
  out.transversal = true;
  return out;
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
  GridSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "Nr")
      s.Nr = value.get<int>();
    else if (key == "Ntheta")
      s.Ntheta = value.get<int>();
    else if (key == "Nphi")
      s.Nphi = value.get<int>();
    else if (key == "r0")
      s.r0 = value.get<double>();
    else
      throw ConfigError("grid spec: unknown key '" + key + "'");
  }
  if (s.Nr < 0 || s.Ntheta < 0 || s.Nphi < 0 || s.r0 <= 0.0)
    throw ConfigError("grid spec: counts must be >= 0 and r0 > 0");
  return s;
}

nlohmann::json GridSpec::to_json() const {
  return {{"Nr", Nr}, {"Ntheta", Ntheta}, {"Nphi", Nphi}, {"r0", r0}};
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<size_t>(n), 0.0);
  w.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int m = 0; m < n; ++m) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * m + 1.0) * z * p1 - m * p2) / (m + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<size_t>(i)] = -z;
    w[static_cast<size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

QuadratureGrid::QuadratureGrid(const GridSpec& spec) : spec_(spec) {
  std::vector<double> xr, wr, xc, wc;
  gauss_legendre(spec.Nr, xr, wr);
  gauss_legendre(spec.Ntheta, xc, wc);
  nodes_.reserve(static_cast<size_t>(spec.Nr * spec.Ntheta * spec.Nphi));
  w3_.reserve(nodes_.capacity());
  const double dphi = 2.0 * std::numbers::pi / std::max(1, spec.Nphi);
  for (int ir = 0; ir < spec.Nr; ++ir) {
    // map t in (0,1) to r = r0 t/(1-t)
    const double t = 0.5 * (xr[static_cast<size_t>(ir)] + 1.0);
    const double omt = 1.0 - t;
    const double r = spec.r0 * t / omt;
    const double jac_r = spec.r0 / (omt * omt);
    const double wrad = 0.5 * wr[static_cast<size_t>(ir)] * jac_r * r * r;
    for (int ic = 0; ic < spec.Ntheta; ++ic) {
      const double c = xc[static_cast<size_t>(ic)];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      const double wpol = wc[static_cast<size_t>(ic)];
      for (int ip = 0; ip < spec.Nphi; ++ip) {
        const double phi = dphi * ip;
        nodes_.emplace_back(r * s * std::cos(phi), r * s * std::sin(phi),
                            r * c);
        w3_.push_back(wrad * wpol * dphi);
      }
    }
  }
}

namespace {

// Index-ascending pairwise reduction; fixed order for reproducibility.
template <class T>
T pairwise_sum(std::vector<T>& terms, size_t lo, size_t hi) {
  if (hi - lo <= 8) {
    T acc = terms[lo];
    for (size_t i = lo + 1; i < hi; ++i) acc += terms[i];
    return acc;
  }
  const size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

}  // namespace

Complex QuadratureGrid::integrate(const std::function<Complex(const Vec3&)>& f,
                                  Measure m) const {
  if (nodes_.empty()) return Complex(0.0);
  std::vector<Complex> terms(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const double wt =
        (m == Measure::BB) ? w3_[i] / nodes_[i].norm() : w3_[i];
    terms[i] = wt * f(nodes_[i]);
  }
  return pairwise_sum(terms, 0, terms.size());
}

Vec3 QuadratureGrid::integrate_real3(const std::function<Vec3(const Vec3&)>& f,
                                     Measure m) const {
  if (nodes_.empty()) return Vec3::Zero();
  std::vector<Vec3> terms(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const double wt =
        (m == Measure::BB) ? w3_[i] / nodes_[i].norm() : w3_[i];
    terms[i] = wt * f(nodes_[i]);
  }
  return pairwise_sum(terms, 0, terms.size());
}

Complex bb_inner(const WaveField3& phi, const WaveField3& psi,
                 const QuadratureGrid& g, Measure m) {
  return g.integrate(
      [&](const Vec3& k) { return phi.eval(k).dot(psi.eval(k)); }, m);
}

Complex bb_inner_checked(const WaveField3& phi, const WaveField3& psi,
                         const QuadratureGrid& g, double tol, Measure m) {
  const Complex coarse = bb_inner(phi, psi, g, m);
  const QuadratureGrid fine(g.spec().doubled());
  const Complex refined = bb_inner(phi, psi, fine, m);
  if (std::abs(refined - coarse) > tol)
    throw ConvergenceError("bb_inner: grid not converged to tolerance");
  return refined;
}

WaveField3 polarized_field(const FrameField& ff, int helicity,
                           const CEnvelope& env) {
  if (helicity != 1 && helicity != -1)
    throw InvariantError("polarized field: helicity must be +-1");
  const Complex ih = Complex(0.0, static_cast<double>(helicity));
  const double isq2 = 1.0 / std::sqrt(2.0);
  auto pol = [ff, ih, isq2](const Vec3& k) {
    const Mat3 E = ff.E(k);
    return ((E.col(0).cast<Complex>() + ih * E.col(1).cast<Complex>()) * isq2)
        .eval();
  };
  auto dpol = [ff, ih, isq2](const Vec3& k, int j) {
    const Mat3 dE = ff.dE(k, j);
    return ((dE.col(0).cast<Complex>() + ih * dE.col(1).cast<Complex>()) *
            isq2)
        .eval();
  };
  auto d2pol = [ff, ih, isq2](const Vec3& k, int j, int l) {
    const Mat3 d2E = ff.d2E(k, j, l);
    return ((d2E.col(0).cast<Complex>() + ih * d2E.col(1).cast<Complex>()) *
            isq2)
        .eval();
  };
  WaveField3 out;
  out.eval = [env, pol](const Vec3& k) {
    return (env.val(k) * pol(k)).eval();
  };
  out.jac = [env, pol, dpol](const Vec3& k) {
    const Complex g = env.val(k);
    const CVec3 gg = env.grad(k);
    const CVec3 p = pol(k);
    CMat3 jj;
    for (int j = 0; j < 3; ++j) jj.col(j) = gg[j] * p + g * dpol(k, j);
    return jj;
  };
  out.hess = [env, pol, dpol, d2pol](const Vec3& k, int j, int l) {
    const Complex g = env.val(k);
    const CVec3 gg = env.grad(k);
    return (env.hess(k, j, l) * pol(k) + gg[j] * dpol(k, l) +
            gg[l] * dpol(k, j) + g * d2pol(k, j, l))
        .eval();
  };
  out.transversal = true;
  return out;
}

WaveField3 gaussian_packet(const Vec3& K0, double s, int helicity,
                           const FrameField& ff, const Vec3& X0,
                           std::optional<GridSpec> grid) {
  if (s <= 0.0) throw InvariantError("gaussian packet: width must be > 0");
  if (!ff.contains(K0))
    throw DomainError("gaussian packet: center outside chart domain");
  // Support ball must stay clear of the excluded ray and the origin.
  const double rho = std::hypot(K0[0], K0[1]);
  const bool string_side =
      (ff.chart() == Chart::North) ? K0[2] <= 0.0 : K0[2] >= 0.0;
  const double dist_to_string = string_side ? rho : K0.norm();
  if (std::min(dist_to_string, K0.norm()) < 4.0 * s)
    throw DomainError("gaussian packet: support ball crosses the excluded ray");

  const double is2 = 1.0 / (s * s);
  CEnvelope env;
  env.val = [K0, X0, is2](const Vec3& k) {
    return std::exp(Complex(-0.5 * is2 * (k - K0).squaredNorm(), -k.dot(X0)));
  };
  auto loggrad = [K0, X0, is2](const Vec3& k) {
    CVec3 c;
    for (int j = 0; j < 3; ++j)
      c[j] = Complex(-is2 * (k[j] - K0[j]), -X0[j]);
    return c;
  };
  env.grad = [env_val = env.val, loggrad](const Vec3& k) {
    return (env_val(k) * loggrad(k)).eval();
  };
  env.hess = [env_val = env.val, loggrad, is2](const Vec3& k, int j, int l) {
    const CVec3 c = loggrad(k);
    return env_val(k) * (c[j] * c[l] - (j == l ? is2 : 0.0));
  };

  WaveField3 psi = polarized_field(ff, helicity, env);

  GridSpec gs = grid.value_or(GridSpec{});
  if (!grid) gs.r0 = K0.norm() + 3.0 * s;
  const QuadratureGrid q(gs);
  const double norm2 =
      bb_inner(psi, psi, q).real();
  const Complex scale_factor(1.0 / std::sqrt(norm2));
  return scale(psi, scale_factor);
}

nlohmann::json to_json(const CMat3& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 3; ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace photonpos
