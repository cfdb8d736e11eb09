#pragma once

#include "zkl/resonance.hpp"

#include <functional>
#include <vector>

namespace zkl {

/// Pointwise snapshot of one harmonic amplitude of the approximate solution
/// (or of a real profile sample), with the derivatives the interaction
/// symbols need. Amplitudes are complex; real snapshots use zero imaginary
/// parts.
struct ProfilePoint {
  Vec14c u = Vec14c::Zero();
  std::array<Vec14c, 3> du_dx{Vec14c::Zero(), Vec14c::Zero(), Vec14c::Zero()};
  Vec14c eps2_dt_u = Vec14c::Zero();
};

// ---------------------------------------------------------------------------
// Complexified pieces of the quadratic source and the convection symbol.

/// B(u, u') for complex arguments.
inline Vec14c bilinear_Bc(const PlasmaParams& p, const Vec14c& u, const Vec14c& up) {
  Vec14c out = Vec14c::Zero();
  const Vec3c B = u.segment<3>(0);
  const complexd ne = u(9);
  const Vec3c vpe = up.segment<3>(6);
  out.segment<3>(3) = ne * vpe;
  out.segment<3>(6) = -p.theta_e * cross_c(vpe, B);
  return out;
}

/// A^(1)(v), the v-linear part of the symbol at eps = 0, applied to w:
/// diag(0, 0, theta_e (v_e . xi) on v_e/n_e rows, 0) * w.
inline Vec14c convection_A1(const PlasmaParams& p, const Vec14c& v, const Vec3& xi, const Vec14c& w) {
  Vec14c out = Vec14c::Zero();
  const complexd vx = (v.segment<3>(6).transpose() * xi.cast<complexd>())(0);
  out.segment<3>(6) = p.theta_e * vx * w.segment<3>(6);
  out(9) = p.theta_e * vx * w(9);
  return out;
}

/// Linearized interaction symbol acting on the perturbation z:
/// B(u_a) z = B(u_a, z) + B(z, u_a) - eps A^(1)(u_a, xi) z. The convection
/// part is linear in xi, so its semiclassical quantization carries one power
/// of eps relative to the bilinear sources.
inline Mat14c linearized_interaction(const PlasmaParams& p, const Vec14c& ua, const Vec3& xi) {
  Mat14c M = Mat14c::Zero();
  for (int c = 0; c < kStateDim; ++c) {
    Vec14c z = Vec14c::Zero();
    z(c) = 1.0;
    M.col(c) = bilinear_Bc(p, ua, z) + bilinear_Bc(p, z, ua) - p.eps * convection_A1(p, ua, xi, z);
  }
  return M;
}

/// Linearized smooth source D(u_a) = (G^0)'(u_a); A^(2) vanishes for this
/// system. G^0 keeps the eps -> 0 limit of G^eps.
inline Mat14c linearized_D(const PlasmaParams& p, const Vec14c& ua) {
  Mat14c M = Mat14c::Zero();
  const complexd ne = ua(9);
  const Vec3c ve = ua.segment<3>(6);
  const Vec3c vi = ua.segment<3>(10);
  const complexd ni_raw = p.alpha > 0.0 ? ua(13) / p.alpha : complexd(0.0);
  for (int c = 0; c < kStateDim; ++c) {
    Vec14c z = Vec14c::Zero();
    z(c) = 1.0;
    Vec14c col = Vec14c::Zero();
    const complexd z_ne = z(9);
    const complexd z_ni = p.alpha > 0.0 ? z(13) / p.alpha : complexd(0.0);
    col.segment<3>(3) = ne * z_ne * ve + 0.5 * ne * ne * z.segment<3>(6)
        - (1.0 / p.theta_e) * (z_ni * vi + ni_raw * z.segment<3>(10));
    M.col(c) = col;
  }
  return M;
}

// ---------------------------------------------------------------------------
// Rest projectors and their derivatives.

/// Total projectors at (eps, v, xi) with Pi_s including the kernel.
inline std::pair<Mat14c, Mat14c> totals_at(const PlasmaParams& p, const Vec14 v, const Vec3& xi) {
  return total_projectors(p, StateVector(v), xi);
}

/// Directional derivative of v -> Pi(eps, v, xi) at v = 0 along a complex
/// direction, by central differences on the real and imaginary parts.
inline std::pair<Mat14c, Mat14c> projector_derivative(const PlasmaParams& p, const Vec3& xi,
                                                      const Vec14c& dir, double h = 1e-5) {
  auto diff_real = [&](const Vec14& d) {
    const double scale = std::max(1.0, d.norm());
    const double hh = h / scale;
    auto [p0p, p0s] = totals_at(p, (hh * d).eval(), xi);
    auto [m0p, m0s] = totals_at(p, (-hh * d).eval(), xi);
    return std::make_pair(((p0p - m0p) / (2.0 * hh)).eval(), ((p0s - m0s) / (2.0 * hh)).eval());
  };
  const Vec14 re = dir.real(), im = dir.imag();
  Mat14c d0 = Mat14c::Zero(), ds = Mat14c::Zero();
  if (re.norm() > 0) {
    auto [a, b] = diff_real(re);
    d0 += a;
    ds += b;
  }
  if (im.norm() > 0) {
    auto [a, b] = diff_real(im);
    d0 += I * a;
    ds += I * b;
  }
  return {d0, ds};
}

/// First-order part of the composition-correction symbol rho, with d/dxi by
/// central differences on the rest projectors.
inline Mat14c rho_first_order(const PlasmaParams& p, const ProfilePoint& pt, const Vec3& xi) {
  const double h = 1e-5 * (1.0 + xi.norm());
  auto totals = [&](const Vec3& q) { return totals_at(p, Vec14::Zero(), q); };
  const auto [pi0, pis] = totals(xi);
  const Mat14c A0 = assemble_symbol_A0(p, xi);

  Mat14c rho = Mat14c::Zero();
  for (int a = 0; a < 3; ++a) {
    Vec3 dxi = Vec3::Zero();
    dxi(a) = h;
    const auto [pi0_p, pis_p] = totals(xi + dxi);
    const auto [pi0_m, pis_m] = totals(xi - dxi);
    const Mat14c dpi0 = (pi0_p - pi0_m) / (2.0 * h);
    const Mat14c dpis = (pis_p - pis_m) / (2.0 * h);
    const Mat14c dPsA0 = (pis_p * assemble_symbol_A0(p, xi + dxi) -
                          pis_m * assemble_symbol_A0(p, xi - dxi)) / (2.0 * h);

    const Vec14c dxu = pt.du_dx[a];
    const auto [dv_pi0, dv_pis] = projector_derivative(p, xi, dxu);
    (void)dv_pis;

    // A^(1) evaluated at the gradient of the profile.
    Mat14c A1grad = Mat14c::Zero();
    for (int c = 0; c < kStateDim; ++c) {
      Vec14c ecol = Vec14c::Zero();
      ecol(c) = 1.0;
      A1grad.col(c) = convection_A1(p, dxu, xi, ecol);
    }

    const Mat14c dB_grad = linearized_interaction(p, dxu, xi);
    rho += -I * (dPsA0 * dv_pi0 + dpis * A1grad + pis * A0 * dpi0 * dv_pi0 - dpis * dB_grad);
  }
  return rho;
}

/// Linear-in-u_a part of the reduced source symbol B^r(eps, u_a) at (eps, 0):
/// Pi_s ( B(u_a) + dPi_s . (eps^2 dt u_a) + eps rho ) Pi_0.
inline Mat14c interaction_Br(const PlasmaParams& p, const ProfilePoint& pt, const Vec3& xi) {
  const auto [pi0, pis] = totals_at(p, Vec14::Zero(), xi);
  const Mat14c dB = linearized_interaction(p, pt.u, xi);
  const auto [dv_pi0, dv_pis] = projector_derivative(p, xi, pt.eps2_dt_u);
  (void)dv_pi0;
  const Mat14c rho = rho_first_order(p, pt, xi);
  return pis * (dB + dv_pis + p.eps * rho) * pi0;
}

// ---------------------------------------------------------------------------
// Transparency and non-transparency checks.

struct TransparencyWitness {
  double eps = 0, xi_norm = 0, phi = 0, coeff = 0;
  double lambda_j = 0, lambda_k = 0;  // Klein-Gordon / acoustic eigenvalues
};

struct TransparencyReport {
  double C_B = 0.0;       // |coeff| <= C_B (|xi|^2 + eps |xi|)
  double C = 0.0;         // |coeff| <= C (eps^2 + |Phi|), clipped phases
  double C_D = 0.0;       // |Pi_k D Pi_j| <= C_D eps
  std::vector<TransparencyWitness> witnesses;
};

/// Default probe directions: aligned, transverse, and skew relative to the
/// one-dimensional field axis.
inline const std::vector<Vec3>& probe_directions() {
  static const std::vector<Vec3> dirs{
      Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(1, 1, 1).normalized(),
      Vec3(0.6, 0, 0.8), Vec3(0, -0.8, 0.6)};
  return dirs;
}

/// Fits the transparency constants of the reduced interaction coefficient
/// over radial xi-grids below c_l, for one profile point.
inline TransparencyReport check_transparency(const PlasmaParams& p, const ProfilePoint& pt,
                                             const Vec3& direction, int n_xi = 24) {
  TransparencyReport rep;
  const Vec3 dir = direction.normalized();
  for (int i = 1; i <= n_xi; ++i) {
    const double r = cutoff::c_l * i / n_xi;
    const Vec3 xi = r * dir;
    const Mat14c Br = interaction_Br(p, pt, xi);
    const Mat14c Dm = linearized_D(p, pt.u);
    const auto dec = eigendecompose(p, StateVector{}, xi);
    for (const auto& mk : dec.modes) {
      if (mk.cls == ModeClass::KleinGordon) continue;
      for (const auto& mj : dec.modes) {
        if (mj.cls != ModeClass::KleinGordon) continue;
        const double cb = (mk.projector * Br * mj.projector).norm();
        const double cd = (mk.projector * Dm * mj.projector).norm();
        rep.C_B = std::max(rep.C_B, cb / (r * r + p.eps * r));
        rep.C_D = std::max(rep.C_D, cd / p.eps);
        double min_phi = 1e300;
        for (int hp : PlasmaParams::harmonics)
          min_phi = std::min(min_phi, std::abs(mj.lambda - mk.lambda + hp * PlasmaParams::omega));
        const double ratio = cb / (p.eps * p.eps + min_phi);
        if (ratio > rep.C) {
          rep.C = ratio;
          rep.witnesses.push_back({p.eps, r, min_phi, cb, mj.lambda, mk.lambda});
        }
      }
    }
  }
  return rep;
}

/// Non-transparency margin: the reduced-free interaction coefficient
/// Pi_j B(u_{a,p}) Pi_k stays away from zero near the Klein-Gordon/acoustic
/// resonance radii.
inline double check_nontransparency(const PlasmaParams& p, const ProfilePoint& pt, const Vec3& direction) {
  if (pt.u.segment<3>(6).norm() < 1e-14)
    throw std::invalid_argument("check_nontransparency: degenerate profile, v_e0 vanishes");
  const Vec3 dir = direction.normalized();

  // Resonance radii of the (0-s) family.
  std::vector<double> radii;
  try {
    const auto rep = locate_resonances(p, ResonanceFamily::KG_Acoustic);
    for (const auto& r : rep.roots) radii.push_back(r.radius);
  } catch (const LocalizationFailure&) {
    // Roots exist but violate localization; still probe near them.
  }
  if (radii.empty()) radii = {2.0 * p.eps, 0.5 * cutoff::c_l};

  double eta = 1e300;
  for (double r0 : radii) {
    double local_max_min = 1e300;
    for (double f : {0.9, 1.0, 1.1}) {
      const Vec3 xi = (r0 * f) * dir;
      const Mat14c dB = linearized_interaction(p, pt.u, xi);
      const auto dec = eigendecompose(p, StateVector{}, xi);
      double best = 0.0;
      for (const auto& mj : dec.modes) {
        if (mj.cls != ModeClass::KleinGordon) continue;
        for (const auto& mk : dec.modes) {
          if (mk.cls == ModeClass::KleinGordon) continue;
          best = std::max(best, (mj.projector * dB * mk.projector).norm());
        }
      }
      local_max_min = std::min(local_max_min, best);
    }
    eta = std::min(eta, local_max_min);
  }
  return eta;
}

// ---------------------------------------------------------------------------
// Symmetrizer.

/// Positive Fourier multiplier S(xi) diagonal in the rest eigenbasis, making
/// S A hermitian and the singular interaction block skew to leading order.
struct Symmetrizer {
  Mat14c S = Mat14c::Zero();
  double gamma = 1.0;  // max weight / min weight proxy
};

inline Symmetrizer build_symmetrizer(const PlasmaParams& p, const Vec3& xi) {
  const double r = xi.norm();
  if (!(r > 0.0)) throw std::invalid_argument("build_symmetrizer: |xi| must be positive");
  const auto fam = rest_eigenvectors(p, xi);
  const double lamT = rest_lambda_transverse(p, r);
  const auto [mu_s, mu_kg] = rest_mu_longitudinal(p, r);
  const double t2r2 = p.theta_e * p.theta_e * r * r;
  const double w_ion = t2r2 / std::max(1e-300, t2r2 - mu_s * mu_s);

  auto weight = [&](const std::string& label) -> double {
    if (label == "f+" || label == "f-") return lamT / mu_kg;
    if (label == "fs(e+)+" || label == "fs(e+)-") return w_ion;
    return 1.0;
  };

  Symmetrizer sym;
  double wmin = 1e300, wmax = 0.0;
  for (const auto& e : fam.entries) {
    const Vec14c v = e.vec.normalized();
    const double w = weight(e.label);
    sym.S += w * (v * v.adjoint());
    wmin = std::min(wmin, w);
    wmax = std::max(wmax, w);
  }
  sym.gamma = std::max(wmax, 1.0 / wmin);
  return sym;
}

/// Block-diagonal part of the interaction symbol: Pi0 B Pi0 + Pis B Pis.
inline Mat14c interaction_E(const PlasmaParams& p, const Vec14c& ua, const Vec3& xi) {
  const auto [pi0, pis] = totals_at(p, Vec14::Zero(), xi);
  const Mat14c dB = linearized_interaction(p, ua, xi);
  return pi0 * dB * pi0 + pis * dB * pis;
}

/// Skew defect of the symmetrized block interaction on the resonant sector:
/// the kernel direction is overlooked (divergence-free sector) and
/// opposite-sign mode pairs, whose combined frequencies stay away from the
/// characteristic harmonics, are excluded.
inline double symmetrizer_skew_defect(const PlasmaParams& p, const Vec14c& ua, const Vec3& xi) {
  const auto fam = rest_eigenvectors(p, xi);
  const auto sym = build_symmetrizer(p, xi);
  const Mat14c E = interaction_E(p, ua, xi);
  const Mat14c M = sym.S * E + (sym.S * E).adjoint();
  double worst = 0.0;
  for (const auto& a : fam.entries) {
    if (a.branch == Branch::Kernel) continue;
    for (const auto& b : fam.entries) {
      if (b.branch == Branch::Kernel) continue;
      if (a.lambda * b.lambda < -1e-12) continue;
      const complexd m = (a.vec.normalized().adjoint() * M * b.vec.normalized())(0, 0);
      worst = std::max(worst, std::abs(m));
    }
  }
  return worst;
}

}  // namespace zkl
