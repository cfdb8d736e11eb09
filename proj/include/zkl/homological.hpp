#pragma once

#include "zkl/transparency.hpp"

namespace zkl {

enum class NormalFormKind { L, M, N0 };

/// Per-mode pieces of the rest spectrum reused by the block sums below.
struct RestModes {
  std::vector<SpectralDecomposition::Mode> kg;        // Klein-Gordon clusters
  std::vector<SpectralDecomposition::Mode> acoustic;  // acoustic + kernel clusters

  static RestModes at(const PlasmaParams& p, const Vec3& xi) {
    RestModes m;
    for (const auto& mode : eigendecompose(p, StateVector{}, xi).modes) {
      if (mode.cls == ModeClass::KleinGordon) m.kg.push_back(mode);
      else m.acoustic.push_back(mode);
    }
    return m;
  }
};

/// Leading normal-form symbol for the resonant lower block, per harmonic p:
/// N0_p = chi_eps * chi_supp * sum_{j KG, k ac} D^-1 Pi_k (dB^r . u_{a,p}) Pi_j,
/// D the clipped per-block phase of the transported equation.
inline Mat14c normal_form_N0_p(const PlasmaParams& p, const ProfilePoint& pt, const Vec3& xi, int hp) {
  const double r = xi.norm();
  const double cut = chi_eps(p.eps, r) * chi_N0_support(r);
  if (cut == 0.0) return Mat14c::Zero();
  const Mat14c Br = interaction_Br(p, pt, xi);
  const auto modes = RestModes::at(p, xi);
  Mat14c N = Mat14c::Zero();
  for (const auto& mk : modes.acoustic)
    for (const auto& mj : modes.kg) {
      const double phase = hp * PlasmaParams::omega + mk.lambda - mj.lambda;
      const complexd denom = I * clip_phase(phase, p.eps);
      N += (cut / denom) * (mk.projector * Br * mj.projector);
    }
  return N;
}

/// First-reduction symbol (non-resonant upper block), per harmonic p:
/// L_p = chi_L * sum_{j KG, k ac} Phi_{j,k,p}^-1 Pi_j (dB_0s . u_{a,p}) Pi_k,
/// with the eps chi_eps^-1 projection weight of the prepared system.
inline Mat14c normal_form_L_p(const PlasmaParams& p, const ProfilePoint& pt, const Vec3& xi, int hp) {
  const double r = xi.norm();
  const double cl = chi_L(r);
  if (cl == 0.0) return Mat14c::Zero();
  const auto [pi0, pis] = totals_at(p, Vec14::Zero(), xi);
  const Mat14c src = (p.eps / chi_eps(p.eps, r)) * pi0 * linearized_interaction(p, pt.u, xi) * pis;
  const auto modes = RestModes::at(p, xi);
  Mat14c L = Mat14c::Zero();
  for (const auto& mj : modes.kg)
    for (const auto& mk : modes.acoustic) {
      const double phase = hp * PlasmaParams::omega + mj.lambda - mk.lambda;
      L += (cl / (I * phase)) * (mj.projector * src * mk.projector);
    }
  return L;
}

/// Second-reduction symbol (acoustic diagonal block), per harmonic p. The
/// source carries the frequency-cutoff derivative, so it is supported on the
/// chi_eps ramp.
inline Mat14c normal_form_M_p(const PlasmaParams& p, const ProfilePoint& pt, const Vec3& xi, int hp) {
  const double r = xi.norm();
  if (!(r > 0.0)) return Mat14c::Zero();
  const double h = 1e-6;
  const double dchi = (chi_eps(p.eps, r + h) - chi_eps(p.eps, r - h)) / (2.0 * h);
  if (dchi == 0.0) return Mat14c::Zero();
  const auto [pi0, pis] = totals_at(p, Vec14::Zero(), xi);
  const Vec3 xihat = xi / r;
  Vec14c grad_along = Vec14c::Zero();
  for (int a = 0; a < 3; ++a) grad_along += xihat(a) * pt.du_dx[a];
  // -eps chi_eps^-1 (chi_eps # (Pi_s dB)) Pi_s, leading linear term.
  const Mat14c src = (p.eps / chi_eps(p.eps, r)) * I * dchi *
                     (pis * linearized_interaction(p, grad_along, xi) * pis);
  const complexd denom = I * static_cast<double>(hp) * PlasmaParams::omega;
  const auto modes = RestModes::at(p, xi);
  Mat14c M = Mat14c::Zero();
  for (const auto& mj : modes.acoustic)
    for (const auto& mk : modes.acoustic) M += (mj.projector * src * mk.projector) / denom;
  return M;
}

/// Algebraic residual of the leading homological equation at one (t, x, xi):
/// the clipped-phase mismatch against the cut source, block-wise. Measured on
/// |xi| <= c_0 where the support factor is inactive.
inline double homological_residual_algebraic(const PlasmaParams& p, const ProfilePoint& pt,
                                             const Vec3& xi, int hp) {
  const double r = xi.norm();
  const Mat14c Br = interaction_Br(p, pt, xi);
  const Mat14c N = normal_form_N0_p(p, pt, xi, hp);
  const auto modes = RestModes::at(p, xi);
  Mat14c lhs = Mat14c::Zero();
  for (const auto& mk : modes.acoustic)
    for (const auto& mj : modes.kg) {
      const double phase = hp * PlasmaParams::omega + mk.lambda - mj.lambda;
      lhs += (I * phase) * (mk.projector * N * mj.projector);
    }
  const Mat14c rhs = chi_eps(p.eps, r) * Br;
  return (lhs - rhs).norm();
}

/// Commutator-form residual including the slow time derivative of the symbol:
/// || eps^2 dt N0 + [iA(eps,0), N0]_{s0} - chi_eps dB^r . u_a || at one point.
/// pt_dt supplies the exact slow derivative of the profile point.
inline double homological_residual_commutator(const PlasmaParams& p, const ProfilePoint& pt,
                                              const ProfilePoint& pt_dt, const Vec3& xi, int hp) {
  const Mat14c N = normal_form_N0_p(p, pt, xi, hp);
  const Mat14c dtN = normal_form_N0_p(p, pt_dt, xi, hp);  // builder is linear in the point
  const Mat14c A = assemble_symbol(p, StateVector{}, xi).entries;
  const Mat14c comm = I * (A * N - N * A);
  const Mat14c lhs = (I * static_cast<double>(hp) * PlasmaParams::omega) * N +
                     p.eps * p.eps * dtN + comm;
  const Mat14c rhs = chi_eps(p.eps, xi.norm()) * interaction_Br(p, pt, xi);
  return (lhs - rhs).norm();
}

}  // namespace zkl
