#pragma once

#include "zkl/grid.hpp"
#include "zkl/symbol.hpp"

namespace zkl {

/// Envelope/density state of the vector Zakharov system. E stores the p = +1
/// harmonic; the p = -1 partner is its conjugate by construction.
struct ZakharovState {
  Field3 E;   // complex envelope, 3 components
  Field n;    // low-frequency density (real-valued data in complex storage)
  Field nt;   // time derivative of n
  double t = 0.0;

  static ZakharovState zero(const PeriodicGrid& g) {
    ZakharovState s;
    s.E = Field3::Zero(3, g.total());
    s.n = Field::Zero(g.total());
    s.nt = Field::Zero(g.total());
    return s;
  }
};

struct ZakharovConfig {
  PeriodicGrid grid;
  double dt = 1e-3;
  double theta_e = 0.2;
  double alpha = 0.1;
  static constexpr int splitting_order = 2;  // Strang

  double wave_speed() const { return std::sqrt(1.0 + alpha * alpha); }
};

struct DivergenceViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Builds the initial state from a divergence-free electric datum. Small
/// divergence defects are projected away; large ones are rejected.
inline ZakharovState init_from_datum(const PeriodicGrid& g, const Field3& E0) {
  ZakharovState s = ZakharovState::zero(g);
  const Field3 proj = leray_project(g, E0);
  const double base = std::max(1e-300, E0.norm());
  const double change = (proj - E0).norm() / base;
  if (change > 1e-6)
    throw DivergenceViolation("init_from_datum: datum divergence too large (relative projection change " +
                              std::to_string(change) + ")");
  s.E = proj;
  return s;
}

namespace zak_detail {

/// Exact spectral flow of the linear envelope part over tau:
/// -2ip dt E + Delta_e E - theta^-2 E = 0, p = +1.
inline void linear_envelope_flow(const PeriodicGrid& g, const ZakharovConfig& cfg, double tau, Field3& E) {
  Field3 spec = to_spectral_multi<3>(g, E);
  const double th2 = cfg.theta_e * cfg.theta_e;
  for (int k = 0; k < g.total(); ++k) {
    const Vec3 xi = g.freq(k);
    const double r2 = xi.squaredNorm();
    if (r2 == 0.0) {
      spec.col(k) *= std::exp(I * 0.5 * tau / th2);
      continue;
    }
    const Vec3c xih = (xi / std::sqrt(r2)).cast<complexd>();
    const Vec3c par = xih * (xih.dot(spec.col(k)));
    const Vec3c perp = spec.col(k) - par;
    const complexd ph_par = std::exp(I * 0.5 * tau * (th2 * r2 + 1.0 / th2));
    const complexd ph_perp = std::exp(I * 0.5 * tau * (r2 + 1.0 / th2));
    spec.col(k) = ph_par * par + ph_perp * perp;
  }
  E = to_physical_multi<3>(g, spec);
}

/// Pointwise potential rotation over tau: dt E = +(i/2) n E (p = +1 harmonic).
inline void potential_kick(const ZakharovState& s, double tau, Field3& E) {
  for (int k = 0; k < E.cols(); ++k) E.col(k) *= std::exp(I * 0.5 * tau * s.n(k).real());
}

/// Exact d'Alembert flow of (dtt - c^2 Lap) n = +Lap |E|^2 with the source
/// frozen over the step.
inline void wave_flow(const PeriodicGrid& g, const ZakharovConfig& cfg, double tau, const Field3& E,
                      Field& n, Field& nt) {
  Field intensity(g.total());
  for (int k = 0; k < g.total(); ++k) intensity(k) = E.col(k).squaredNorm();
  const Field ghat_base = to_spectral(g, intensity);
  Field nh = to_spectral(g, n);
  Field nth = to_spectral(g, nt);
  const double c = cfg.wave_speed();
  for (int k = 0; k < g.total(); ++k) {
    const double r2 = g.freq(k).squaredNorm();
    if (r2 == 0.0) {
      nh(k) += nth(k) * tau;
      continue;
    }
    const double w = c * std::sqrt(r2);
    const complexd g_k = -r2 * ghat_base(k);  // +Lap |E|^2 in spectrum
    const complexd n_inf = g_k / (w * w);
    const complexd osc = nh(k) - n_inf;
    const double cw = std::cos(w * tau), sw = std::sin(w * tau);
    const complexd n_new = n_inf + osc * cw + nth(k) * (sw / w);
    nth(k) = -osc * w * sw + nth(k) * cw;
    nh(k) = n_new;
  }
  n = to_physical(g, nh);
  nt = to_physical(g, nth);
}

}  // namespace zak_detail

/// One time-reversible split step: half potential kick, half linear envelope
/// flow, full forced wave flow (source frozen at the midpoint envelope),
/// half linear flow, half kick with the updated density.
inline ZakharovState step(const ZakharovState& in, const ZakharovConfig& cfg) {
  if (!in.E.allFinite() || !in.n.allFinite())
    throw std::runtime_error("zakharov step: non-finite state at t = " + std::to_string(in.t) +
                             " (focusing blow-up?)");
  const PeriodicGrid& g = cfg.grid;
  ZakharovState s = in;
  zak_detail::potential_kick(s, 0.5 * cfg.dt, s.E);  // uses n(t)
  zak_detail::linear_envelope_flow(g, cfg, 0.5 * cfg.dt, s.E);
  zak_detail::wave_flow(g, cfg, cfg.dt, s.E, s.n, s.nt);
  zak_detail::linear_envelope_flow(g, cfg, 0.5 * cfg.dt, s.E);
  zak_detail::potential_kick(s, 0.5 * cfg.dt, s.E);  // uses n(t+dt)
  s.t = in.t + cfg.dt;
  return s;
}

inline double mass(const PeriodicGrid& g, const ZakharovState& s) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double nc = l2_norm(g, s.E.row(c).transpose());
    acc += nc * nc;
  }
  return std::sqrt(acc);
}

/// Exact slow time derivatives from the model's right-hand sides.
struct ZakharovDerivatives {
  Field3 dE;   // dt E = -(i/2)(Delta_e E - theta^-2 E - n E)
  Field dn;    // = nt
  Field dnt;   // = c^2 Lap n + Lap |E|^2
  Field3 ddE;  // second derivative of E (for order-two profile terms)
};

inline Field3 apply_delta_e(const PeriodicGrid& g, double theta_e, const Field3& E) {
  Field3 spec = to_spectral_multi<3>(g, E);
  const double th2 = theta_e * theta_e;
  for (int k = 0; k < g.total(); ++k) {
    const Vec3 xi = g.freq(k);
    const double r2 = xi.squaredNorm();
    if (r2 == 0.0) {
      spec.col(k).setZero();
      continue;
    }
    const Vec3c xic = xi.cast<complexd>();
    const Vec3c par = xic * (xic.dot(spec.col(k)) / r2);
    spec.col(k) = -th2 * r2 * par - r2 * (spec.col(k) - par);
  }
  return to_physical_multi<3>(g, spec);
}

inline Field apply_laplacian(const PeriodicGrid& g, const Field& f) {
  Field spec = to_spectral(g, f);
  for (int k = 0; k < g.total(); ++k) spec(k) *= -g.freq(k).squaredNorm();
  return to_physical(g, spec);
}

inline ZakharovDerivatives derivatives(const PeriodicGrid& g, const ZakharovConfig& cfg,
                                       const ZakharovState& s) {
  ZakharovDerivatives d;
  const double th2 = cfg.theta_e * cfg.theta_e;
  const Field3 de = apply_delta_e(g, cfg.theta_e, s.E);
  d.dE = Field3(3, g.total());
  for (int k = 0; k < g.total(); ++k)
    d.dE.col(k) = -I * 0.5 * (de.col(k) - s.E.col(k) / th2 - s.n(k) * s.E.col(k));
  d.dn = s.nt;
  Field intensity(g.total());
  for (int k = 0; k < g.total(); ++k) intensity(k) = s.E.col(k).squaredNorm();
  const double c2 = cfg.wave_speed() * cfg.wave_speed();
  d.dnt = c2 * apply_laplacian(g, s.n) + apply_laplacian(g, intensity);
  const Field3 dde = apply_delta_e(g, cfg.theta_e, d.dE);
  d.ddE = Field3(3, g.total());
  for (int k = 0; k < g.total(); ++k)
    d.ddE.col(k) = -I * 0.5 * (dde.col(k) - d.dE.col(k) / th2 - d.dn(k) * s.E.col(k) - s.n(k) * d.dE.col(k));
  return d;
}

/// First-order corrector fields forced by the polarization conditions.
struct CorrectorFields {
  Field3 B1;      // harmonic +1: i curl E / omega
  Field3 vi1;     // harmonic +1: E / (i omega theta_e)
  Field ne1_h1;   // harmonic +1: -theta_e div E / omega^2
  Field ne10;     // slow electron density; equals the solver's n identically
  Field ni10;     // slow ion density (same object, quasineutrality)
  Field3 vi10;    // slow curl-free ion velocity from continuity
};

inline Field3 spectral_curl(const PeriodicGrid& g, const Field3& F) {
  Field3 spec = to_spectral_multi<3>(g, F);
  for (int k = 0; k < g.total(); ++k) {
    const Vec3c ixi = I * g.freq(k).cast<complexd>();
    const Vec3c v = spec.col(k);
    spec.col(k) = cross_c(ixi, v);
  }
  return to_physical_multi<3>(g, spec);
}

inline Field spectral_div(const PeriodicGrid& g, const Field3& F) {
  Field3 spec = to_spectral_multi<3>(g, F);
  Field out(g.total());
  for (int k = 0; k < g.total(); ++k)
    out(k) = ((I * g.freq(k).cast<complexd>()).transpose() * spec.col(k))(0, 0);
  return to_physical(g, out);
}

inline CorrectorFields solve_corrector_first_order(const PeriodicGrid& g, const PlasmaParams& p,
                                                   const ZakharovState& s) {
  constexpr double w = PlasmaParams::omega;
  CorrectorFields c;
  // ip w B_{1,p} = -curl E_{0,p}  =>  B_{1,1} = i curl E / w
  c.B1 = (I / w) * spectral_curl(g, s.E);
  // ip w v_{i1,p} = E_{0,p}/theta_e
  c.vi1 = (1.0 / (I * w * p.theta_e)) * s.E;
  // n_{e1,p} = -theta_e div E_{0,p} / (pw)^2
  c.ne1_h1 = (-p.theta_e / (w * w)) * spectral_div(g, s.E);
  c.ne10 = s.n;
  c.ni10 = s.n;  // quasineutrality, bit for bit
  // continuity dt n + div v_{i1,0} = 0 with curl-free v:  v^ = i xi nt^ / |xi|^2
  Field nth = to_spectral(g, s.nt);
  Field3 vspec = Field3::Zero(3, g.total());
  for (int k = 0; k < g.total(); ++k) {
    const double r2 = g.freq(k).squaredNorm();
    if (r2 == 0.0) continue;
    vspec.col(k) = I * g.freq(k).cast<complexd>() * (nth(k) / r2);
  }
  c.vi10 = to_physical_multi<3>(g, vspec);
  return c;
}

}  // namespace zkl
