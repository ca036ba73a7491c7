#pragma once

#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "photonpos/scalar_field.hpp"
#include "photonpos/types.hpp"

namespace photonpos {

enum class Chart { South, North, Custom };

std::string chart_name(Chart c);

// Right-handed orthonormal triad at a wavevector; column mu of E holds the
// components of E_mu, with E3 = k/|k|.
struct Frame {
  Mat3 E = Mat3::Identity();
  Chart chart = Chart::Custom;

  // Throws InvariantError when orthonormality, orientation or the E3 = k/|k|
  // condition is violated beyond tol.
  void validate(const Vec3& k, double tol = 1e-12) const;
};

// In-plane rotation of (E1, E2); a^2 + b^2 = 1.
struct PlaneRotation {
  double a = 1.0;
  double b = 0.0;
};

// (a, b) as smooth fields with analytic first and second derivatives.
struct PlaneRotationField {
  std::function<double(const Vec3&)> a, b;
  std::function<Vec3(const Vec3&)> grad_a, grad_b;
  std::function<Mat3(const Vec3&)> hess_a, hess_b;

  PlaneRotation at(const Vec3& k) const { return {a(k), b(k)}; }

  // a = cos B, b = sin B for a scalar gauge function B.
  static PlaneRotationField from_angle(const ScalarField& B);
  // The south -> north change of basis; depends only on the azimuth.
  static PlaneRotationField transition();
};

// Smooth assignment of frames over a punctured momentum domain, together
// with analytic first and second derivatives of the frame matrix.
class FrameField {
 public:
  static FrameField south(double ray_tol = 1e-9);
  static FrameField north(double ray_tol = 1e-9);

  Frame frame(const Vec3& k) const;
  Mat3 E(const Vec3& k) const { return frame(k).E; }
  // dE(k, j) = dE/dk_j, d2E(k, j, l) = d^2 E / dk_j dk_l
  Mat3 dE(const Vec3& k, int j) const;
  Mat3 d2E(const Vec3& k, int j, int l) const;

  bool contains(const Vec3& k) const;
  Chart chart() const { return chart_; }
  double ray_tol() const { return ray_tol_; }

  FrameField() = default;
  FrameField(Chart chart, double ray_tol,
             std::function<Mat3(const Vec3&)> eval,
             std::function<Mat3(const Vec3&, int)> deval,
             std::function<Mat3(const Vec3&, int, int)> d2eval,
             std::function<bool(const Vec3&)> contains);

 private:
  Chart chart_ = Chart::Custom;
  double ray_tol_ = 1e-9;
  std::function<Mat3(const Vec3&)> eval_;
  std::function<Mat3(const Vec3&, int)> deval_;
  std::function<Mat3(const Vec3&, int, int)> d2eval_;
  std::function<bool(const Vec3&)> contains_;
};

Frame south_frame(const Vec3& k, double ray_tol = 1e-9);
Frame north_frame(const Vec3& k, double ray_tol = 1e-9);

// E'' = E U: E1'' = a E1 - b E2, E2'' = b E1 + a E2, E3'' = E3.
Frame rotate_frame(const Frame& f, const PlaneRotation& rot);

// (a, b) with rotate_frame(south_frame(k), (a, b)) = north_frame(k).
PlaneRotation transition_rotation(const Vec3& k, double ray_tol = 1e-9);

// V = E'' E^T; real orthogonal, fixes the momentum direction.
Mat3 conjugation_matrix(const Frame& f, const Frame& f2);

// Frame field with pointwise-rotated triads and consistent derivatives.
FrameField rotated(const FrameField& ff, const PlaneRotationField& rot);

nlohmann::json frame_to_json(const Frame& f, const Vec3& k);
Frame frame_from_json(const nlohmann::json& j, Vec3* k_out = nullptr);

}  // namespace photonpos
