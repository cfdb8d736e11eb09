#pragma once

#include "zkl/transparency.hpp"
#include "zkl/zakharov.hpp"

#include <map>

namespace zkl {

/// Three-scale profile u_a(t, x, theta) = sum_m eps^m sum_p e^{ip theta} u_{m,p}(t, x),
/// theta = w t / eps^2. Amplitudes are stored for p >= 0 (negative harmonics
/// are conjugates) in the sharp-density convention: slot 9 holds n_e#, slot
/// 13 the raw ion density n_i#; the log/weighted form is produced at
/// evaluation time.
struct WKBProfile {
  PeriodicGrid grid;
  PlasmaParams params;
  int order = 0;
  std::map<std::pair<int, int>, Field14> amps;     // (m, p) -> amplitude field
  std::map<std::pair<int, int>, Field14> amps_dt;  // exact slow time derivatives

  bool has(int m, int p) const { return amps.count({m, p}) > 0; }
  const Field14& amp(int m, int p) const { return amps.at({m, p}); }
};

namespace wkb_detail {

inline Field14 zero_field(const PeriodicGrid& g) { return Field14::Zero(14, g.total()); }

inline void set3(Field14& f, int row0, const Field3& v) { f.middleRows<3>(row0) = v; }

inline Field3 get3(const Field14& f, int row0) { return f.middleRows<3>(row0); }

/// Gradient of a scalar field, all three axes.
inline Field3 spectral_grad(const PeriodicGrid& g, const Field& f) {
  Field spec = to_spectral(g, f);
  Field3 out(3, g.total());
  for (int a = 0; a < 3; ++a) {
    Field da(g.total());
    for (int k = 0; k < g.total(); ++k) da(k) = I * g.freq(k)(a) * spec(k);
    out.row(a) = to_physical(g, da).transpose();
  }
  return out;
}

/// (a . grad) b for complex 3-vector fields.
inline Field3 advect(const PeriodicGrid& g, const Field3& a, const Field3& b) {
  Field3 out = Field3::Zero(3, g.total());
  for (int axis = 0; axis < 3; ++axis) {
    Field3 db(3, g.total());
    for (int c = 0; c < 3; ++c)
      db.row(c) = spectral_derivative(g, b.row(c).transpose(), axis).transpose();
    for (int k = 0; k < g.total(); ++k) out.col(k) += a(axis, k) * db.col(k);
  }
  return out;
}

inline Field3 cross_field(const Field3& a, const Field3& b) {
  Field3 out(3, a.cols());
  for (int k = 0; k < a.cols(); ++k) {
    out.col(k) = cross_c(a.col(k), b.col(k));
  }
  return out;
}

}  // namespace wkb_detail

/// Assembles the profile from a Zakharov state and its forced correctors.
/// Order 0 carries the leading polarization; order 1 the forced first
/// correctors; order 2 the elliptic/pseudo-inverse responses of the printed
/// order-one equations. Free corrector parts (linearized-system solutions)
/// are not included.
inline WKBProfile build_profile(const PeriodicGrid& g, const PlasmaParams& p, const ZakharovConfig& zcfg,
                                const ZakharovState& z, int order) {
  using namespace wkb_detail;
  if (std::abs(zcfg.theta_e - p.theta_e) > 1e-14 || std::abs(zcfg.alpha - p.alpha) > 1e-14)
    throw std::invalid_argument("build_profile: Zakharov run and plasma parameters disagree");
  constexpr double w = PlasmaParams::omega;
  WKBProfile prof;
  prof.grid = g;
  prof.params = p;
  prof.order = order;

  const auto d = derivatives(g, zcfg, z);
  const auto corr = solve_corrector_first_order(g, p, z);

  // m = 0, p = 1: leading polarization (E, v_e) = (E, i w E).
  {
    Field14 a = zero_field(g), adt = zero_field(g);
    set3(a, 3, z.E);
    set3(a, 6, (I * w * z.E).eval());
    set3(adt, 3, d.dE);
    set3(adt, 6, (I * w * d.dE).eval());
    prof.amps[{0, 1}] = a;
    prof.amps_dt[{0, 1}] = adt;
  }
  if (order >= 1) {
    // m = 1, p = 1: B_1, v_i1, n_e1#.
    Field14 a = zero_field(g), adt = zero_field(g);
    set3(a, 0, corr.B1);
    set3(a, 10, corr.vi1);
    a.row(9) = corr.ne1_h1.transpose();
    const Field3 dB1 = (I / w) * spectral_curl(g, d.dE);
    const Field3 dvi1 = (1.0 / (I * w * p.theta_e)) * d.dE;
    const Field dne1 = (-p.theta_e / (w * w)) * spectral_div(g, d.dE);
    set3(adt, 0, dB1);
    set3(adt, 10, dvi1);
    adt.row(9) = dne1.transpose();
    prof.amps[{1, 1}] = a;
    prof.amps_dt[{1, 1}] = adt;

    // m = 1, p = 0: quasineutral densities and the slow ion velocity.
    Field14 s = zero_field(g), sdt = zero_field(g);
    s.row(9) = corr.ne10.transpose();
    s.row(13) = corr.ni10.transpose();
    set3(s, 10, corr.vi10);
    sdt.row(9) = d.dn.transpose();
    sdt.row(13) = d.dn.transpose();
    // momentum: dt v_{i1,0} = -(1+alpha^2) grad n - grad |E|^2
    Field intensity(g.total());
    for (int k = 0; k < g.total(); ++k) intensity(k) = z.E.col(k).squaredNorm();
    const double c2 = zcfg.wave_speed() * zcfg.wave_speed();
    const Field3 dvi10 = -c2 * spectral_grad(g, z.n) - spectral_grad(g, intensity);
    set3(sdt, 10, dvi10);
    prof.amps[{1, 0}] = s;
    prof.amps_dt[{1, 0}] = sdt;
  }
  if (order >= 2) {
    Field intensity(g.total()), dintensity(g.total());
    for (int k = 0; k < g.total(); ++k) {
      intensity(k) = z.E.col(k).squaredNorm();
      dintensity(k) = 2.0 * (z.E.col(k).conjugate().transpose() * d.dE.col(k))(0, 0).real();
    }
    const double c2 = zcfg.wave_speed() * zcfg.wave_speed();
    const Field3 dvi10 = -c2 * spectral_grad(g, z.n) - spectral_grad(g, intensity);

    // m = 2, p = 0: E_{2,0} = -theta_e grad(n + |E|^2), v_{e2,0} = vi10/theta_e
    // minus the slow harmonic-zero product (nonzero only when div E != 0).
    {
      Field14 a = zero_field(g), adt = zero_field(g);
      const Field3 E20 = -p.theta_e * (spectral_grad(g, z.n) + spectral_grad(g, intensity));
      const Field3 dE20 = -p.theta_e * (spectral_grad(g, d.dn) + spectral_grad(g, dintensity));
      const Field3 ve01 = (I * w * z.E).eval();
      const Field3 dve01 = (I * w * d.dE).eval();
      const Field& ne1 = corr.ne1_h1;
      const Field dne1 = (-p.theta_e / (w * w)) * spectral_div(g, d.dE);
      Field3 prod0(3, g.total()), dprod0(3, g.total());
      for (int k = 0; k < g.total(); ++k) {
        prod0.col(k) = std::conj(ne1(k)) * ve01.col(k) + ne1(k) * ve01.col(k).conjugate();
        dprod0.col(k) = std::conj(dne1(k)) * ve01.col(k) + std::conj(ne1(k)) * dve01.col(k) +
                        dne1(k) * ve01.col(k).conjugate() + ne1(k) * dve01.col(k).conjugate();
      }
      set3(a, 3, E20);
      set3(a, 6, ((1.0 / p.theta_e) * corr.vi10 - prod0).eval());
      set3(adt, 3, dE20);
      set3(adt, 6, ((1.0 / p.theta_e) * dvi10 - dprod0).eval());
      prof.amps[{2, 0}] = a;
      prof.amps_dt[{2, 0}] = adt;
    }
    // m = 2, p = 1: pseudo-inverse response of the resonant block. The
    // compatibility (Schroedinger) equation makes the right-hand side lie in
    // the range of (iw + L0); the minimal-norm solution is (c/2, -ic/2). The
    // magnetic harmonic at this level vanishes.
    {
      Field14 a = zero_field(g), adt = zero_field(g);
      const Field3 grad_ne11 = wkb_detail::spectral_grad(g, corr.ne1_h1);
      const Field dne1 = (-p.theta_e / (w * w)) * spectral_div(g, d.dE);
      Field3 c_rhs = (-I * w) * d.dE - p.theta_e * grad_ne11;
      Field3 dc_rhs = (-I * w) * d.ddE - p.theta_e * wkb_detail::spectral_grad(g, dne1);
      set3(a, 3, (0.5 * c_rhs).eval());
      set3(a, 6, ((-I * 0.5) * c_rhs).eval());
      set3(adt, 3, (0.5 * dc_rhs).eval());
      set3(adt, 6, ((-I * 0.5) * dc_rhs).eval());
      prof.amps[{2, 1}] = a;
      prof.amps_dt[{2, 1}] = adt;
    }
    // m = 2, p = 2: elliptic inversion of (2iw + L0).
    {
      Field14 a = zero_field(g), adt = zero_field(g);
      const Field3 ve01 = (I * w * z.E).eval();
      const Field3 dve01 = (I * w * d.dE).eval();
      const Field3 B11 = (I / w) * spectral_curl(g, z.E);
      const Field3 dB11 = (I / w) * spectral_curl(g, d.dE);
      const Field dne1 = (-p.theta_e / (w * w)) * spectral_div(g, d.dE);
      Field3 a_src(3, g.total()), da_src(3, g.total());
      for (int k = 0; k < g.total(); ++k) {
        a_src.col(k) = corr.ne1_h1(k) * ve01.col(k);
        da_src.col(k) = dne1(k) * ve01.col(k) + corr.ne1_h1(k) * dve01.col(k);
      }
      const Field3 b_src = -p.theta_e * (wkb_detail::advect(g, ve01, ve01) +
                                         wkb_detail::cross_field(ve01, B11));
      const Field3 db_src = -p.theta_e * (wkb_detail::advect(g, dve01, ve01) +
                                          wkb_detail::advect(g, ve01, dve01) +
                                          wkb_detail::cross_field(dve01, B11) +
                                          wkb_detail::cross_field(ve01, dB11));
      const Field3 E22 = (-(b_src + 2.0 * I * a_src) / 3.0).eval();
      const Field3 ve22 = (2.0 * I * E22 - a_src).eval();
      const Field3 dE22 = (-(db_src + 2.0 * I * da_src) / 3.0).eval();
      const Field3 dve22 = (2.0 * I * dE22 - da_src).eval();
      set3(a, 3, E22);
      set3(a, 6, ve22);
      set3(adt, 3, dE22);
      set3(adt, 6, dve22);
      prof.amps[{2, 2}] = a;
      prof.amps_dt[{2, 2}] = adt;
    }
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Evaluation.

/// Sharp-convention totals and their exact time derivatives on the grid.
struct ProfileTotals {
  Field14 sharp;      // real-valued profile in sharp densities
  Field14 sharp_dt;   // full time derivative (fast phases included)
};

inline ProfileTotals profile_totals(const WKBProfile& prof, double t) {
  const double eps = prof.params.eps;
  const double theta = PlasmaParams::omega * t / (eps * eps);
  ProfileTotals tot;
  tot.sharp = Field14::Zero(14, prof.grid.total());
  tot.sharp_dt = Field14::Zero(14, prof.grid.total());
  for (const auto& [key, a] : prof.amps) {
    const auto [m, p] = key;
    const double em = std::pow(eps, m);
    const complexd phase = std::exp(I * static_cast<double>(p) * theta);
    const Field14& adt = prof.amps_dt.at(key);
    const complexd fast = I * static_cast<double>(p) * PlasmaParams::omega / (eps * eps);
    if (p == 0) {
      tot.sharp += em * a;
      tot.sharp_dt += em * adt;
    } else {
      tot.sharp += em * (phase * a + (phase * a).conjugate());
      const Field14 dterm = phase * (fast * a + adt);
      tot.sharp_dt += em * (dterm + dterm.conjugate());
    }
  }
  return tot;
}

/// Log-form state on the grid at time t: the deliverable profile of the
/// scaled system, real-valued.
inline Field14 evaluate_profile(const WKBProfile& prof, double t) {
  const auto tot = profile_totals(prof, t);
  const double eps = prof.params.eps;
  const double alpha = prof.params.alpha;
  Field14 out = tot.sharp;
  for (int k = 0; k < out.cols(); ++k) {
    const double ne_sharp = tot.sharp(9, k).real();
    const double ni_sharp = tot.sharp(13, k).real();
    out(9, k) = std::log1p(eps * ne_sharp) / eps;
    out(13, k) = alpha * std::log1p(eps * ni_sharp) / eps;
  }
  return out.real().cast<complexd>();
}

/// Time derivative of the log-form profile (chain rule through the density
/// change of variables).
inline Field14 evaluate_profile_dt(const WKBProfile& prof, double t) {
  const auto tot = profile_totals(prof, t);
  const double eps = prof.params.eps;
  const double alpha = prof.params.alpha;
  Field14 out = tot.sharp_dt;
  for (int k = 0; k < out.cols(); ++k) {
    const double ne_sharp = tot.sharp(9, k).real();
    const double ni_sharp = tot.sharp(13, k).real();
    out(9, k) = tot.sharp_dt(9, k).real() / (1.0 + eps * ne_sharp);
    out(13, k) = alpha * tot.sharp_dt(13, k).real() / (1.0 + eps * ni_sharp);
  }
  return out.real().cast<complexd>();
}

/// Single-point evaluation.
inline StateVector evaluate_at(const WKBProfile& prof, double t, int flat_index) {
  const Field14 f = evaluate_profile(prof, t);
  StateVector u;
  u.v = f.col(flat_index).real();
  return u;
}

/// First-harmonic amplitude point (positive harmonic, all orders summed) for
/// the interaction-symbol checks, in the weighted log-linearized convention.
inline ProfilePoint profile_point(const WKBProfile& prof, double /*t*/, int flat_index) {
  const PeriodicGrid& g = prof.grid;
  const double eps = prof.params.eps;
  Field14 amp1 = Field14::Zero(14, g.total());
  Field14 amp1_dt = Field14::Zero(14, g.total());
  for (const auto& [key, a] : prof.amps) {
    const auto [m, p] = key;
    if (p != 1) continue;
    amp1 += std::pow(eps, m) * a;
    amp1_dt += std::pow(eps, m) * prof.amps_dt.at(key);
  }
  // weighted slot: C = alpha n_i at linear order
  amp1.row(13) *= prof.params.alpha;
  amp1_dt.row(13) *= prof.params.alpha;

  ProfilePoint pt;
  pt.u = amp1.col(flat_index);
  // eps^2 dt of the p = +1 harmonic of u_a: the fast phase contributes
  // ip w u_{a,p} at order one, the slow derivative at order eps^2.
  pt.eps2_dt_u = I * PlasmaParams::omega * amp1.col(flat_index) +
                 eps * eps * amp1_dt.col(flat_index);
  for (int axis = 0; axis < 3; ++axis) {
    Field14 da(14, g.total());
    for (int c = 0; c < 14; ++c)
      da.row(c) = spectral_derivative(g, amp1.row(c).transpose(), axis).transpose();
    pt.du_dx[axis] = da.col(flat_index);
  }
  return pt;
}

/// Time-derivative companion of profile_point (for the slow derivative of
/// normal-form symbols).
inline ProfilePoint profile_point_dt(const WKBProfile& prof, double /*t*/, int flat_index) {
  const PeriodicGrid& g = prof.grid;
  const double eps = prof.params.eps;
  Field14 amp1 = Field14::Zero(14, g.total());
  for (const auto& [key, a] : prof.amps_dt) {
    const auto [m, p] = key;
    if (p != 1) continue;
    amp1 += std::pow(eps, m) * a;
  }
  amp1.row(13) *= prof.params.alpha;
  ProfilePoint pt;
  pt.u = amp1.col(flat_index);
  pt.eps2_dt_u = I * PlasmaParams::omega * amp1.col(flat_index);
  for (int axis = 0; axis < 3; ++axis) {
    Field14 da(14, g.total());
    for (int c = 0; c < 14; ++c)
      da.row(c) = spectral_derivative(g, amp1.row(c).transpose(), axis).transpose();
    pt.du_dx[axis] = da.col(flat_index);
  }
  return pt;
}

}  // namespace zkl
