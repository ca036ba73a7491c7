#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace photonpos {

using Complex = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec2 = Eigen::Vector2cd;
using CVec3 = Eigen::Vector3cd;
using CMat2 = Eigen::Matrix2cd;
using CMat3 = Eigen::Matrix3cd;
using CMat23 = Eigen::Matrix<Complex, 2, 3>;

inline constexpr Complex kImag{0.0, 1.0};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation point outside the domain of a frame field / operator.
struct DomainError : Error {
  using Error::Error;
};

// A structural invariant of an input object is violated.
struct InvariantError : Error {
  using Error::Error;
};

// Finite-difference stencil leaves the admissible domain.
struct StepError : Error {
  using Error::Error;
};

struct TransversalityError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

struct HermiticityError : Error {
  using Error::Error;
};

struct BasisError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace photonpos
