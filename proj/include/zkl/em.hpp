#pragma once

#include "zkl/semiclassical.hpp"
#include "zkl/wkb.hpp"

#include <Eigen/Eigenvalues>
#include <functional>

namespace zkl {

/// Spectral realization of the stiff Euler-Maxwell operator on a periodic
/// grid: the constant symbol part is diagonalized once per frequency and the
/// nonlinear terms are evaluated pseudospectrally.
class EMOperator {
 public:
  EMOperator(const PeriodicGrid& grid, const PlasmaParams& params) : g_(grid), p_(params) {
    p_.validate();
    modes_.reserve(g_.total());
    for (int k = 0; k < g_.total(); ++k) {
      const Vec3 exi = p_.eps * g_.freq(k);
      Eigen::SelfAdjointEigenSolver<Mat14c> es(assemble_symbol_A0(p_, exi));
      modes_.push_back({es.eigenvalues(), es.eigenvectors()});
    }
  }

  const PeriodicGrid& grid() const { return g_; }
  const PlasmaParams& params() const { return p_; }

  /// (1/eps^2) op(i A0) u, the stiff linear term as it appears on the
  /// left-hand side of the evolution equation.
  Field14 linear_apply(const Field14& phys) const {
    Field14 spec = to_spectral_multi<14>(g_, phys);
    const double s = 1.0 / (p_.eps * p_.eps);
    for (int k = 0; k < g_.total(); ++k) {
      const auto& m = modes_[k];
      const Vec14c coeff = m.U.adjoint() * spec.col(k);
      spec.col(k) = m.U * (I * s * m.lambda.cast<complexd>().cwiseProduct(coeff));
    }
    return to_physical_multi<14>(g_, spec);
  }

  /// Exact flow of dt u + (1/eps^2) op(i A0) u = 0 over dt.
  Field14 linear_flow(const Field14& phys, double dt) const {
    Field14 spec = to_spectral_multi<14>(g_, phys);
    const double s = dt / (p_.eps * p_.eps);
    for (int k = 0; k < g_.total(); ++k) {
      const auto& m = modes_[k];
      Vec14c coeff = m.U.adjoint() * spec.col(k);
      for (int j = 0; j < kStateDim; ++j) coeff(j) *= std::exp(-I * s * m.lambda(j));
      spec.col(k) = m.U * coeff;
    }
    return to_physical_multi<14>(g_, spec);
  }

  /// All order-one-in-time right-hand-side terms: the singular bilinear
  /// source, the smooth remainder, and the quasilinear convection block.
  Field14 nonlinear(const Field14& phys) const {
    const int N = g_.total();
    Field14 out = Field14::Zero(14, N);

    // pointwise sources
    for (int k = 0; k < N; ++k) {
      StateVector u;
      u.v = phys.col(k).real();
      const StateVector b = bilinear_B(p_, u, u);
      const StateVector gsrc = source_G(p_, u);
      out.col(k) = (b.v / p_.eps + gsrc.v).cast<complexd>();
    }

    // convection: -theta_e (v_e . grad) {v_e, n_e} - eps (v_i . grad) {v_i, C}
    const int axes_lo = g_.dim == 1 ? 2 : 0;
    for (int axis = axes_lo; axis < 3; ++axis) {
      Field14 d(14, N);
      for (int c = 0; c < 14; ++c)
        d.row(c) = spectral_derivative(g_, phys.row(c).transpose(), axis).transpose();
      for (int k = 0; k < N; ++k) {
        const double ve_a = phys(6 + axis - 0, k).real();
        const double vi_a = phys(10 + axis - 0, k).real();
        out.block<3, 1>(6, k) -= p_.theta_e * ve_a * d.block<3, 1>(6, k);
        out(9, k) -= p_.theta_e * ve_a * d(9, k);
        out.block<3, 1>(10, k) -= p_.eps * vi_a * d.block<3, 1>(10, k);
        out(13, k) -= p_.eps * vi_a * d(13, k);
      }
    }
    return out;
  }

  /// Residual of a candidate field pair (u, dt u) in the scaled system.
  Field14 residual(const Field14& u, const Field14& dtu) const {
    return dtu + linear_apply(u) - nonlinear(u);
  }

 private:
  struct ModeData {
    Eigen::Matrix<double, 14, 1> lambda;
    Mat14c U;
  };
  PeriodicGrid g_;
  PlasmaParams p_;
  std::vector<ModeData> modes_;
};

// ---------------------------------------------------------------------------
// Integration.

struct EMRunConfig {
  PeriodicGrid grid;
  PlasmaParams params;
  double dt = 0.0;   // defaults to eps^2/20
  double T = 0.1;
  int n_outputs = 10;

  double step_size() const { return dt > 0.0 ? dt : params.eps * params.eps / 20.0; }
  void validate() const {
    params.validate();
    if (step_size() > params.eps * params.eps / 10.0)
      throw std::invalid_argument("EMRunConfig: dt must resolve the fast scale (dt <= eps^2/10)");
    if (!(T > 0.0)) throw std::invalid_argument("EMRunConfig: T must be positive");
  }
};

struct EMTrajectory {
  std::vector<double> times;
  std::vector<Field14> states;
};

/// Lawson-type exponential integrator: exact constant-coefficient flow,
/// explicit second-order rule for the remaining terms.
inline EMTrajectory integrate(const EMOperator& op, const EMRunConfig& cfg, const Field14& datum) {
  cfg.validate();
  const double dt = cfg.step_size();
  const int n_steps = static_cast<int>(std::ceil(cfg.T / dt - 1e-12));
  const int out_stride = std::max(1, n_steps / std::max(1, cfg.n_outputs));

  EMTrajectory traj;
  Field14 u = datum;
  traj.times.push_back(0.0);
  traj.states.push_back(u);
  double t = 0.0;
  for (int s = 0; s < n_steps; ++s) {
    const double h = std::min(dt, cfg.T - t);
    const Field14 k1 = op.nonlinear(u);
    const Field14 eu = op.linear_flow(u, h);
    const Field14 ek1 = op.linear_flow(k1, h);
    const Field14 ustar = eu + h * ek1;
    const Field14 k2 = op.nonlinear(ustar);
    u = eu + 0.5 * h * (ek1 + k2);
    t += h;
    if (!u.allFinite())
      throw std::runtime_error("em integrate: blow-up detected at t = " + std::to_string(t));
    if ((s + 1) % out_stride == 0 || s + 1 == n_steps) {
      traj.times.push_back(t);
      traj.states.push_back(u);
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Constraints.

struct ConstraintMonitor {
  std::vector<double> times;
  std::vector<double> divB;
  std::vector<double> gauss;
};

/// Discrete divergence constraint and Gauss law in sharp densities:
/// div E + (n_e# - n_i#)/(eps theta_e) is conserved by the flow.
inline ConstraintMonitor monitor_constraints(const PeriodicGrid& g, const PlasmaParams& p,
                                             const EMTrajectory& traj) {
  ConstraintMonitor mon;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const Field14& u = traj.states[s];
    Field3 B = u.middleRows<3>(0);
    Field3 E = u.middleRows<3>(3);
    const Field divB = spectral_div(g, B);
    const Field divE = spectral_div(g, E);
    double max_divB = 0.0, max_gauss = 0.0;
    for (int k = 0; k < g.total(); ++k) {
      const double ne_sharp = std::expm1(p.eps * u(9, k).real()) / p.eps;
      const double ni_raw = p.alpha > 0.0 ? u(13, k).real() / p.alpha : 0.0;
      const double ni_sharp = std::expm1(p.eps * ni_raw) / p.eps;
      max_divB = std::max(max_divB, std::abs(divB(k)));
      max_gauss = std::max(max_gauss,
                           std::abs(divE(k).real() + (ne_sharp - ni_sharp) / (p.eps * p.theta_e)));
    }
    mon.times.push_back(traj.times[s]);
    mon.divB.push_back(max_divB);
    mon.gauss.push_back(max_gauss);
  }
  return mon;
}

// ---------------------------------------------------------------------------
// Data.

/// Well-prepared polarized datum from a complex envelope:
/// a = (0, 2 Re Etilde, 2 Re(i Etilde / w), 0, 0, 0).
inline Field14 well_prepared_datum(const PeriodicGrid& g, const Field3& envelope) {
  Field14 u = Field14::Zero(14, g.total());
  constexpr double w = PlasmaParams::omega;
  u.middleRows<3>(3) = (envelope + envelope.conjugate());
  u.middleRows<3>(6) = ((I / w) * envelope + ((I / w) * envelope).conjugate());
  return u;
}

/// Built-in envelope data. All are divergence-free fields varying along x3.
inline Field3 datum_envelope(const PeriodicGrid& g, const std::string& name, double amplitude) {
  Field3 E = Field3::Zero(3, g.total());
  const double s2 = std::sqrt(2.0);
  for (int k = 0; k < g.total(); ++k) {
    const double x3 = g.point(k)(2);
    if (name == "circular-modulated") {
      const complexd f = amplitude * (std::cos(x3) + 0.35 * std::sin(2.0 * x3));
      E(0, k) = f / s2;
      E(1, k) = I * f / s2;
    } else if (name == "plane") {
      const complexd f = amplitude * std::exp(I * x3);
      E(0, k) = f;
    } else if (name == "linear-modulated") {
      E(0, k) = amplitude * (std::cos(x3) + 0.35 * std::sin(2.0 * x3));
    } else {
      throw std::invalid_argument("datum_envelope: unknown datum '" + name + "'");
    }
  }
  return E;
}

// ---------------------------------------------------------------------------
// Comparison with the approximate solution.

struct WkbComparison {
  std::vector<double> times;
  std::vector<double> sup_err_E;   // sup_x |E - (E_{0,1} e^{iwt/eps^2} + c.c.)|
  std::vector<double> sup_err_n;   // sup_x |n_e - eps nbar|
  std::vector<double> hs_err;      // ||u - u_a||_{eps,s}
  double worst_E = 0.0, worst_n = 0.0, worst_hs = 0.0;
};

/// Pointwise validation quantities of the asymptotic description.
inline WkbComparison compare_to_wkb(const EMOperator& op, const EMTrajectory& traj,
                                    const std::function<WKBProfile(double)>& profile_at, double s) {
  const PeriodicGrid& g = op.grid();
  const PlasmaParams& p = op.params();
  WkbComparison cmp;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double t = traj.times[i];
    const WKBProfile prof = profile_at(t);
    const Field14 ua = evaluate_profile(prof, t);
    const Field14 diff = traj.states[i] - ua;

    const complexd phase = std::exp(I * PlasmaParams::omega * t / (p.eps * p.eps));
    const Field3& E0 = prof.amps.at({0, 1}).middleRows<3>(3);
    double eE = 0.0, en = 0.0;
    const Field& nbar = prof.has(1, 0) ? Field(prof.amps.at({1, 0}).row(9).transpose())
                                       : Field(Field::Zero(g.total()));
    for (int k = 0; k < g.total(); ++k) {
      const Vec3c lead = phase * E0.col(k) + (phase * E0.col(k)).conjugate();
      eE = std::max(eE, (traj.states[i].block<3, 1>(3, k) - lead).norm());
      en = std::max(en, std::abs(traj.states[i](9, k).real() - p.eps * nbar(k).real()));
    }
    cmp.times.push_back(t);
    cmp.sup_err_E.push_back(eE);
    cmp.sup_err_n.push_back(en);
    cmp.hs_err.push_back(hs_eps_norm_multi<14>(g, diff, p.eps, s));
  }
  for (std::size_t i = 0; i < cmp.times.size(); ++i) {
    cmp.worst_E = std::max(cmp.worst_E, cmp.sup_err_E[i]);
    cmp.worst_n = std::max(cmp.worst_n, cmp.sup_err_n[i]);
    cmp.worst_hs = std::max(cmp.worst_hs, cmp.hs_err[i]);
  }
  return cmp;
}

/// Least-squares slope of log(err) against log(eps).
inline double fitted_order(const std::vector<double>& eps, const std::vector<double>& err) {
  const int n = static_cast<int>(eps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(eps[i]);
    const double y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace zkl
