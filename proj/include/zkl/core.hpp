#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace zkl {

using complexd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Vec14 = Eigen::Matrix<double, 14, 1>;
using Vec14c = Eigen::Matrix<complexd, 14, 1>;
using Mat3c = Eigen::Matrix3cd;
using Mat14c = Eigen::Matrix<complexd, 14, 14>;

inline constexpr complexd I{0.0, 1.0};
inline constexpr int kStateDim = 14;

/// Physical/asymptotic parameters of the scaled Euler-Maxwell system.
/// The fundamental frequency is fixed to 1 and the characteristic
/// harmonic set is {-1, 1}; the cold-ions scaling ties theta_i to eps.
struct PlasmaParams {
  double eps = 0.05;      // 1/(omega_pe * t0)
  double theta_e = 0.2;   // electron thermal velocity ratio
  double alpha = 0.1;     // temperature ratio T_i/T_e
  static constexpr double omega = 1.0;
  static constexpr std::array<int, 2> harmonics{-1, 1};

  void validate() const {
    if (!(eps > 0.0 && eps < 1.0))
      throw std::invalid_argument("PlasmaParams: eps must lie in (0,1), got " + std::to_string(eps));
    if (!(theta_e > 0.0))
      throw std::invalid_argument("PlasmaParams: theta_e must be positive");
    if (!(alpha >= 0.0))
      throw std::invalid_argument("PlasmaParams: alpha must be >= 0");
  }
};

/// The 14-component unknown (B, E, v_e, n_e, v_i, n_i-weighted).
/// Component layout is fixed; every matrix in the library indexes
/// against it. The last slot stores the ion log-density with the
/// alpha weight that makes the symbol hermitian.
struct StateVector {
  Vec14 v = Vec14::Zero();

  StateVector() = default;
  explicit StateVector(const Vec14& raw) : v(raw) {}

  static StateVector from_parts(const Vec3& B, const Vec3& E, const Vec3& ve,
                                double ne, const Vec3& vi, double ni) {
    StateVector u;
    u.v.segment<3>(0) = B;
    u.v.segment<3>(3) = E;
    u.v.segment<3>(6) = ve;
    u.v(9) = ne;
    u.v.segment<3>(10) = vi;
    u.v(13) = ni;
    return u;
  }

  Vec3 B() const { return v.segment<3>(0); }
  Vec3 E() const { return v.segment<3>(3); }
  Vec3 v_e() const { return v.segment<3>(6); }
  double n_e() const { return v(9); }
  Vec3 v_i() const { return v.segment<3>(10); }
  double n_i() const { return v(13); }

  auto B_ref() { return v.segment<3>(0); }
  auto E_ref() { return v.segment<3>(3); }
  auto v_e_ref() { return v.segment<3>(6); }
  double& n_e_ref() { return v(9); }
  auto v_i_ref() { return v.segment<3>(10); }
  double& n_i_ref() { return v(13); }

  StateVector operator+(const StateVector& o) const { return StateVector(v + o.v); }
  StateVector operator-(const StateVector& o) const { return StateVector(v - o.v); }
  StateVector operator*(double a) const { return StateVector(v * a); }
};

inline StateVector operator*(double a, const StateVector& u) { return u * a; }

/// Scalar convection terms the eigenvalues depend on.
struct ConvectionScalars {
  double x = 0.0;  // eps * theta_e * (v_e . xi)
  double y = 0.0;  // eps^2 * (v_i . xi)

  static ConvectionScalars from_state(const PlasmaParams& p, const StateVector& u, const Vec3& xi) {
    return {p.eps * p.theta_e * u.v_e().dot(xi), p.eps * p.eps * u.v_i().dot(xi)};
  }
};

/// Bilinear cross product for complex 3-vectors. Eigen's member cross()
/// conjugates complex operands, which is never what the formulas here mean.
inline Vec3c cross_c(const Vec3c& a, const Vec3c& b) {
  return Vec3c(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

// 3x3 cross-product matrix of xi: cross_matrix(xi) * z == xi x z.
template <class Scalar>
inline Eigen::Matrix<Scalar, 3, 3> cross_matrix(const Eigen::Matrix<Scalar, 3, 1>& xi) {
  Eigen::Matrix<Scalar, 3, 3> m;
  Scalar z{0};
  m << z, -xi(2), xi(1),
       xi(2), z, -xi(0),
       -xi(1), xi(0), z;
  return m;
}

struct GapViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LocalizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace zkl
