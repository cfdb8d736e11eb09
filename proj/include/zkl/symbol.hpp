#pragma once

#include "zkl/core.hpp"

namespace zkl {

/// Assembled symbol together with the point it was evaluated at.
struct SymbolMatrix {
  Mat14c entries = Mat14c::Zero();
  PlasmaParams params;
  StateVector state;
  Vec3 xi = Vec3::Zero();
};

// Generic assembly over a (possibly complex) frequency argument. The real-xi
// instantiation is hermitian; the complex one is used by the dispersion
// determinant cross-check.
template <class Scalar>
Eigen::Matrix<complexd, 14, 14> assemble_symbol_generic(const PlasmaParams& p,
                                                        const StateVector& u,
                                                        const Eigen::Matrix<Scalar, 3, 1>& xi) {
  using M3 = Eigen::Matrix<complexd, 3, 3>;
  Eigen::Matrix<complexd, 14, 14> A = Eigen::Matrix<complexd, 14, 14>::Zero();
  Eigen::Matrix<complexd, 3, 1> xic = xi.template cast<complexd>();

  const M3 Xi = cross_matrix<complexd>(xic);
  const M3 Id3 = M3::Identity();
  const double te = p.theta_e;
  const double eps = p.eps;

  // A0: curl blocks, constant couplings, pressure couplings.
  A.block<3, 3>(0, 3) = Xi;
  A.block<3, 3>(3, 0) = -Xi;
  A.block<3, 3>(3, 6) = I * Id3;
  A.block<3, 3>(6, 3) = -I * Id3;
  A.block<3, 3>(3, 10) = -I * (eps / te) * Id3;
  A.block<3, 3>(10, 3) = I * (eps / te) * Id3;
  A.block<3, 1>(6, 9) = te * xic;
  A.block<1, 3>(9, 6) = te * xic.transpose();
  A.block<3, 1>(10, 13) = eps * p.alpha * xic;
  A.block<1, 3>(13, 10) = eps * p.alpha * xic.transpose();

  // eps * A1: diagonal convection block.
  const complexd ve_xi = (u.v_e().template cast<complexd>().transpose() * xic)(0);
  const complexd vi_xi = (u.v_i().template cast<complexd>().transpose() * xic)(0);
  const complexd cx = eps * te * ve_xi;
  const complexd cy = eps * eps * vi_xi;
  for (int k = 6; k <= 9; ++k) A(k, k) += cx;
  for (int k = 10; k <= 13; ++k) A(k, k) += cy;
  return A;
}

/// A(eps, eps u, xi) = A0(eps, xi) + eps A1(eps, u, xi), hermitian for real xi.
inline SymbolMatrix assemble_symbol(const PlasmaParams& p, const StateVector& u, const Vec3& xi) {
  SymbolMatrix s;
  s.entries = assemble_symbol_generic<double>(p, u, xi);
  s.params = p;
  s.state = u;
  s.xi = xi;
  return s;
}

/// Constant + curl part only (u-independent).
inline Mat14c assemble_symbol_A0(const PlasmaParams& p, const Vec3& xi) {
  return assemble_symbol_generic<double>(p, StateVector{}, xi);
}

/// Quadratic source B(u, u') = (0, n_e v'_e, -theta_e v'_e x B, 0, 0, 0).
inline StateVector bilinear_B(const PlasmaParams& p, const StateVector& u, const StateVector& up) {
  StateVector out;
  out.E_ref() = u.n_e() * up.v_e();
  out.v_e_ref() = -p.theta_e * up.v_e().cross(u.B());
  return out;
}

/// f^eps(x) = eps^-2 (e^{eps x} - 1 - eps x), series for small eps*x to avoid
/// the eps^-2 cancellation.
inline double f_eps(double eps, double x) {
  const double z = eps * x;
  if (std::abs(z) < 1e-4) {
    return x * x * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  }
  return (std::exp(z) - 1.0 - z) / (eps * eps);
}

/// Smooth remainder source G^eps(u); G^eps(0) = 0. Coefficients are the ones
/// forced by the diffractive rescaling of the log-density system.
inline StateVector source_G(const PlasmaParams& p, const StateVector& u) {
  StateVector out;
  const double ni_raw = p.alpha > 0.0 ? u.n_i() / p.alpha : 0.0;
  out.E_ref() = f_eps(p.eps, u.n_e()) * u.v_e()
      - (1.0 / p.theta_e) * (ni_raw + p.eps * f_eps(p.eps, ni_raw)) * u.v_i();
  out.v_i_ref() = (p.eps / p.theta_e) * u.v_i().cross(u.B());
  return out;
}

/// Density change of variables n = log(1 + n#).
inline double sharp_to_log(double n_sharp) {
  if (!(1.0 + n_sharp > 0.0))
    throw std::domain_error("sharp_to_log: 1 + n_sharp must be positive, got " + std::to_string(1.0 + n_sharp));
  return std::log1p(n_sharp);
}

inline double log_to_sharp(double n) { return std::expm1(n); }

}  // namespace zkl
