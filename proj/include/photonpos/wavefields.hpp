#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "photonpos/diff.hpp"
#include "photonpos/frames.hpp"
#include "photonpos/types.hpp"

namespace photonpos {

// Complex 3-vector field on momentum space.  `jac` (columns d psi/dk_j) and
// `hess` are optional analytic derivative data; operators consult them in
// Analytic mode.
struct WaveField3 {
  std::function<CVec3(const Vec3&)> eval;
  std::function<CMat3(const Vec3&)> jac;
  std::function<CVec3(const Vec3&, int, int)> hess;
  bool transversal = false;

  bool has_jac() const { return static_cast<bool>(jac); }
  bool has_hess() const { return static_cast<bool>(hess); }

  CVec3 operator()(const Vec3& k) const { return eval(k); }
};

// Complex scalar multiplier with analytic gradient.
struct CScalarField {
  std::function<Complex(const Vec3&)> val;
  std::function<CVec3(const Vec3&)> grad;  // component j = d/dk_j

  static CScalarField constant(Complex c) {
    return {[c](const Vec3&) { return c; },
            [](const Vec3&) { return CVec3::Zero().eval(); }};
  }
};

// Matrix-valued field with analytic derivatives, e.g. the helicity matrix
// or a conjugation matrix V(k).
struct MatrixField {
  std::function<CMat3(const Vec3&)> val;
  std::function<CMat3(const Vec3&, int)> d;
  std::function<CMat3(const Vec3&, int, int)> d2;

  bool has_d() const { return static_cast<bool>(d); }
  bool has_d2() const { return static_cast<bool>(d2); }

  static MatrixField constant(const CMat3& m);
};

// ---- field algebra (derivative data is propagated when available) ----

WaveField3 add(const WaveField3& f, const WaveField3& g);
WaveField3 subtract(const WaveField3& f, const WaveField3& g);
WaveField3 scale(const WaveField3& f, Complex c);
// k_l * psi
WaveField3 coordinate_multiply(const WaveField3& f, int l);
// m(k) * psi; the product carries a Jacobian but no Hessian.
WaveField3 scalar_multiply(const WaveField3& f, const CScalarField& m);
WaveField3 matrix_apply(const MatrixField& M, const WaveField3& f);

// Sigma^2 = 1 - k k^T / |k|^2 as a matrix field (transversal projector).
MatrixField transversal_projector_field();
// psi -> Sigma^2 psi
WaveField3 transversal_project(const WaveField3& f);

// ---- quadrature ----

struct GridSpec {
  int Nr = 40;
  int Ntheta = 48;
  int Nphi = 48;
  double r0 = 4.0;

  static GridSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  GridSpec doubled() const { return {2 * Nr, 2 * Ntheta, 2 * Nphi, r0}; }
};

enum class Measure { BB, D3K };  // d3k/|k| vs plain d3k

// Spherical product grid: mapped Gauss-Legendre radially, Gauss-Legendre in
// cos(theta), uniform trapezoid in phi.  Stores plain-d3k node weights.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return w3_; }

  // Fixed-order pairwise-summed integral of f against the measure.
  Complex integrate(const std::function<Complex(const Vec3&)>& f,
                    Measure m = Measure::BB) const;
  Vec3 integrate_real3(const std::function<Vec3(const Vec3&)>& f,
                       Measure m = Measure::BB) const;

 private:
  GridSpec spec_;
  std::vector<Vec3> nodes_;
  std::vector<double> w3_;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

Complex bb_inner(const WaveField3& phi, const WaveField3& psi,
                 const QuadratureGrid& g, Measure m = Measure::BB);

// As bb_inner, but re-evaluates on a doubled grid and throws
// ConvergenceError when the two results differ by more than tol.
Complex bb_inner_checked(const WaveField3& phi, const WaveField3& psi,
                         const QuadratureGrid& g, double tol,
                         Measure m = Measure::BB);

// Normalized transversal Gaussian packet of definite helicity:
//   psi(k) = N exp(-|k - K0|^2/(2 s^2)) e^{-i k.X0} (E1 + i h E2)/sqrt(2).
// Normalization is computed on a grid with r0 = |K0| + 3 s unless an
// explicit spec is given.
WaveField3 gaussian_packet(const Vec3& K0, double s, int helicity,
                           const FrameField& ff, const Vec3& X0 = Vec3::Zero(),
                           std::optional<GridSpec> grid = std::nullopt);

// Shared builder for polarized fields g(k) (E1 + i h E2)/sqrt(2) given an
// analytic scalar envelope (value, gradient, Hessian closures).
struct CEnvelope {
  std::function<Complex(const Vec3&)> val;
  std::function<CVec3(const Vec3&)> grad;
  std::function<Complex(const Vec3&, int, int)> hess;
};
WaveField3 polarized_field(const FrameField& ff, int helicity,
                           const CEnvelope& env);

nlohmann::json to_json(const CMat3& m);  // nested arrays of [re, im]

}  // namespace photonpos
