#include "photonpos/frames.hpp"

#include <array>
#include <cmath>

#include "photonpos/dual.hpp"

namespace photonpos {

namespace {

// South/north triads in closed form.  With r = |k| and
//   u = 1 / (r (r -+ k3)),  v = 1 / r
// the columns are rational in k and regular everywhere off the excluded ray:
//   south: E1 = (k1^2 u - 1, k1 k2 u, -k1 v),  E2 = (-k1 k2 u, 1 - k2^2 u, k2 v)
//   north: E1 = (1 - k1^2 u, -k1 k2 u, -k1 v), E2 = (-k1 k2 u, 1 - k2^2 u, -k2 v)
// and E3 = k v in both charts.
template <class T>
std::array<std::array<T, 3>, 3> frame_entries(Chart chart, const T& k1,
                                              const T& k2, const T& k3) {
  using std::sqrt;
  const T r = sqrt(k1 * k1 + k2 * k2 + k3 * k3);
  const T v = 1.0 / r;
  std::array<std::array<T, 3>, 3> col;  // col[mu][row]
  if (chart == Chart::South) {
    const T u = 1.0 / (r * (r - k3));
    col[0] = {k1 * k1 * u - 1.0, k1 * k2 * u, -(k1 * v)};
    col[1] = {-(k1 * k2 * u), 1.0 - k2 * k2 * u, k2 * v};
  } else {
    const T u = 1.0 / (r * (r + k3));
    col[0] = {1.0 - k1 * k1 * u, -(k1 * k2 * u), -(k1 * v)};
    col[1] = {-(k1 * k2 * u), 1.0 - k2 * k2 * u, -(k2 * v)};
  }
  col[2] = {k1 * v, k2 * v, k3 * v};
  return col;
}

Mat3 frame_value(Chart chart, const Vec3& k) {
  const auto col = frame_entries<double>(chart, k[0], k[1], k[2]);
  Mat3 E;
  for (int mu = 0; mu < 3; ++mu)
    for (int i = 0; i < 3; ++i) E(i, mu) = col[mu][i];
  return E;
}

std::array<std::array<DualR, 3>, 3> frame_jets(Chart chart, const Vec3& k) {
  return frame_entries<DualR>(chart, DualR::variable(k[0], 0),
                              DualR::variable(k[1], 1),
                              DualR::variable(k[2], 2));
}

void check_point(Chart chart, const Vec3& k, double ray_tol) {
  const double r = k.norm();
  if (r == 0.0) throw DomainError("frame field: |k| = 0");
  const double rho = std::hypot(k[0], k[1]);
  const bool toward_string = (chart == Chart::South) ? k[2] >= 0.0 : k[2] <= 0.0;
  if (toward_string && rho < ray_tol * r)
    throw DomainError("frame field: k on the excluded " +
                      chart_name(chart == Chart::South ? Chart::South
                                                       : Chart::North) +
                      "-chart ray");
}

bool point_ok(Chart chart, const Vec3& k, double ray_tol) {
  const double r = k.norm();
  if (r == 0.0) return false;
  const double rho = std::hypot(k[0], k[1]);
  const bool toward_string = (chart == Chart::South) ? k[2] >= 0.0 : k[2] <= 0.0;
  return !(toward_string && rho < ray_tol * r);
}

}  // namespace

std::string chart_name(Chart c) {
  switch (c) {
    case Chart::South:
      return "south";
    case Chart::North:
      return "north";
    default:
      return "custom";
  }
}

void Frame::validate(const Vec3& k, double tol) const {
  if ((E.transpose() * E - Mat3::Identity()).cwiseAbs().maxCoeff() > tol)
    throw InvariantError("frame: E^T E != 1");
  if (std::abs(E.determinant() - 1.0) > tol)
    throw InvariantError("frame: det E != +1");
  if ((E.col(2) - k.normalized()).cwiseAbs().maxCoeff() > tol)
    throw InvariantError("frame: E3 != k/|k|");
}

FrameField::FrameField(Chart chart, double ray_tol,
                       std::function<Mat3(const Vec3&)> eval,
                       std::function<Mat3(const Vec3&, int)> deval,
                       std::function<Mat3(const Vec3&, int, int)> d2eval,
                       std::function<bool(const Vec3&)> contains)
    : chart_(chart),
      ray_tol_(ray_tol),
      eval_(std::move(eval)),
      deval_(std::move(deval)),
      d2eval_(std::move(d2eval)),
      contains_(std::move(contains)) {}

Frame FrameField::frame(const Vec3& k) const {
  if (!contains(k)) throw DomainError("frame field: k outside chart domain");
  return Frame{eval_(k), chart_};
}

Mat3 FrameField::dE(const Vec3& k, int j) const {
  if (!contains(k)) throw DomainError("frame field: k outside chart domain");
  return deval_(k, j);
}

Mat3 FrameField::d2E(const Vec3& k, int j, int l) const {
  if (!contains(k)) throw DomainError("frame field: k outside chart domain");
  return d2eval_(k, j, l);
}

bool FrameField::contains(const Vec3& k) const { return contains_(k); }

namespace {

FrameField chart_field(Chart chart, double ray_tol) {
  auto eval = [chart](const Vec3& k) { return frame_value(chart, k); };
  auto deval = [chart](const Vec3& k, int j) {
    const auto col = frame_jets(chart, k);
    Mat3 d;
    for (int mu = 0; mu < 3; ++mu)
      for (int i = 0; i < 3; ++i) d(i, mu) = col[mu][i].g[j];
    return d;
  };
  auto d2eval = [chart](const Vec3& k, int j, int l) {
    const auto col = frame_jets(chart, k);
    Mat3 d;
    for (int mu = 0; mu < 3; ++mu)
      for (int i = 0; i < 3; ++i) d(i, mu) = col[mu][i].h(j, l);
    return d;
  };
  auto contains = [chart, ray_tol](const Vec3& k) {
    return point_ok(chart, k, ray_tol);
  };
  return FrameField(chart, ray_tol, eval, deval, d2eval, contains);
}

}  // namespace

FrameField FrameField::south(double ray_tol) {
  return chart_field(Chart::South, ray_tol);
}

FrameField FrameField::north(double ray_tol) {
  return chart_field(Chart::North, ray_tol);
}

Frame south_frame(const Vec3& k, double ray_tol) {
  check_point(Chart::South, k, ray_tol);
  return Frame{frame_value(Chart::South, k), Chart::South};
}

Frame north_frame(const Vec3& k, double ray_tol) {
  check_point(Chart::North, k, ray_tol);
  return Frame{frame_value(Chart::North, k), Chart::North};
}

Frame rotate_frame(const Frame& f, const PlaneRotation& rot) {
  if (std::abs(rot.a * rot.a + rot.b * rot.b - 1.0) > 1e-10)
    throw InvariantError("plane rotation: a^2 + b^2 != 1");
  Frame out;
  out.chart = Chart::Custom;
  out.E.col(0) = rot.a * f.E.col(0) - rot.b * f.E.col(1);
  out.E.col(1) = rot.b * f.E.col(0) + rot.a * f.E.col(1);
  out.E.col(2) = f.E.col(2);
  return out;
}

PlaneRotation transition_rotation(const Vec3& k, double ray_tol) {
  const double r = k.norm();
  const double rho2 = k[0] * k[0] + k[1] * k[1];
  if (r == 0.0 || rho2 < ray_tol * ray_tol * r * r)
    throw DomainError("transition rotation: k on the k3 axis");
  // a = cos 2phi, b = sin 2phi for the chosen south/north pair.
  return {(k[0] * k[0] - k[1] * k[1]) / rho2, 2.0 * k[0] * k[1] / rho2};
}

Mat3 conjugation_matrix(const Frame& f, const Frame& f2) {
  if ((f.E.col(2) - f2.E.col(2)).cwiseAbs().maxCoeff() > 1e-10)
    throw InvariantError("conjugation matrix: frames share no E3 column");
  return f2.E * f.E.transpose();
}

PlaneRotationField PlaneRotationField::from_angle(const ScalarField& B) {
  PlaneRotationField f;
  f.a = [B](const Vec3& k) { return std::cos(B.val(k)); };
  f.b = [B](const Vec3& k) { return std::sin(B.val(k)); };
  f.grad_a = [B](const Vec3& k) {
    return (-std::sin(B.val(k)) * B.grad(k)).eval();
  };
  f.grad_b = [B](const Vec3& k) {
    return (std::cos(B.val(k)) * B.grad(k)).eval();
  };
  if (B.has_hess()) {
    f.hess_a = [B](const Vec3& k) {
      const Vec3 g = B.grad(k);
      return (-std::cos(B.val(k)) * g * g.transpose() -
              std::sin(B.val(k)) * B.hess(k))
          .eval();
    };
    f.hess_b = [B](const Vec3& k) {
      const Vec3 g = B.grad(k);
      return (-std::sin(B.val(k)) * g * g.transpose() +
              std::cos(B.val(k)) * B.hess(k))
          .eval();
    };
  }
  return f;
}

PlaneRotationField PlaneRotationField::transition() {
  return from_angle(ScalarField::azimuthal(2.0));
}

FrameField rotated(const FrameField& ff, const PlaneRotationField& rot) {
  auto umat = [rot](const Vec3& k) {
    Mat3 U = Mat3::Identity();
    const double a = rot.a(k), b = rot.b(k);
    U(0, 0) = a;
    U(0, 1) = b;
    U(1, 0) = -b;
    U(1, 1) = a;
    return U;
  };
  auto dumat = [rot](const Vec3& k, int j) {
    Mat3 dU = Mat3::Zero();
    const double da = rot.grad_a(k)[j], db = rot.grad_b(k)[j];
    dU(0, 0) = da;
    dU(0, 1) = db;
    dU(1, 0) = -db;
    dU(1, 1) = da;
    return dU;
  };
  auto d2umat = [rot](const Vec3& k, int j, int l) {
    Mat3 d2U = Mat3::Zero();
    const double da = rot.hess_a(k)(j, l), db = rot.hess_b(k)(j, l);
    d2U(0, 0) = da;
    d2U(0, 1) = db;
    d2U(1, 0) = -db;
    d2U(1, 1) = da;
    return d2U;
  };
  auto eval = [ff, umat](const Vec3& k) { return (ff.E(k) * umat(k)).eval(); };
  auto deval = [ff, umat, dumat](const Vec3& k, int j) {
    return (ff.dE(k, j) * umat(k) + ff.E(k) * dumat(k, j)).eval();
  };
  auto d2eval = [ff, umat, dumat, d2umat](const Vec3& k, int j, int l) {
    return (ff.d2E(k, j, l) * umat(k) + ff.dE(k, j) * dumat(k, l) +
            ff.dE(k, l) * dumat(k, j) + ff.E(k) * d2umat(k, j, l))
        .eval();
  };
  auto contains = [ff](const Vec3& k) { return ff.contains(k); };
  return FrameField(Chart::Custom, ff.ray_tol(), eval, deval, d2eval,
                    contains);
}

nlohmann::json frame_to_json(const Frame& f, const Vec3& k) {
  nlohmann::json j;
  j["k"] = {k[0], k[1], k[2]};
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i)
    rows.push_back({f.E(i, 0), f.E(i, 1), f.E(i, 2)});
  j["E"] = rows;
  j["chart"] = chart_name(f.chart);
  return j;
}

Frame frame_from_json(const nlohmann::json& j, Vec3* k_out) {
  Frame f;
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c) f.E(i, c) = j.at("E").at(i).at(c).get<double>();
  const std::string chart = j.at("chart").get<std::string>();
  f.chart = chart == "south"  ? Chart::South
            : chart == "north" ? Chart::North
                               : Chart::Custom;
  if (k_out)
    for (int i = 0; i < 3; ++i) (*k_out)[i] = j.at("k").at(i).get<double>();
  return f;
}

}  // namespace photonpos
