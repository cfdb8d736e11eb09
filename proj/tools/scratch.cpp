// Temporary convention-validation harness (deleted before release).
#include "zkl/em.hpp"
#include "zkl/homological.hpp"

#include <cstdio>

using namespace zkl;

int main() {
  PlasmaParams p;
  p.eps = 0.1;
  p.theta_e = 0.2;
  p.alpha = 0.1;

  PeriodicGrid g;
  g.dim = 1;
  g.n = 64;

  ZakharovConfig zc;
  zc.grid = g;
  zc.dt = 1e-3;
  zc.theta_e = p.theta_e;
  zc.alpha = p.alpha;

  // 1. plane-wave rotation: E(t) = E0 exp(+i Omega t), Omega = (k^2 + 1/th^2)/2
  {
    Field3 E0 = Field3::Zero(3, g.total());
    for (int k = 0; k < g.total(); ++k) E0(0, k) = 0.3 * std::exp(I * g.point(k)(2));
    auto s = init_from_datum(g, E0);
    const double T = 0.05;
    int nsteps = static_cast<int>(T / zc.dt + 0.5);
    for (int i = 0; i < nsteps; ++i) s = step(s, zc);
    const double Om = (1.0 + 1.0 / (p.theta_e * p.theta_e)) / 2.0;
    double err = 0.0;
    for (int k = 0; k < g.total(); ++k)
      err = std::max(err, std::abs(s.E(0, k) - E0(0, k) * std::exp(I * Om * s.t)));
    std::printf("zakharov plane wave err: %.3e (t=%.3f)\n", err, s.t);
  }

  // 2. mass + reversibility with nontrivial data
  {
    Field3 E0 = datum_envelope(g, "circular-modulated", 0.4);
    auto s0 = init_from_datum(g, E0);
    auto s = s0;
    for (int i = 0; i < 200; ++i) s = step(s, zc);
    const double m0 = mass(g, s0), m1 = mass(g, s);
    ZakharovConfig back = zc;
    back.dt = -zc.dt;
    auto r = s;
    for (int i = 0; i < 200; ++i) r = step(r, back);
    std::printf("mass drift: %.3e  reversibility: %.3e  max|n|=%.3e\n",
                std::abs(m1 - m0) / (200 * zc.dt), (r.E - s0.E).norm() + (r.n - s0.n).norm(),
                s.n.cwiseAbs().maxCoeff());
  }

  // 3. dt self-convergence order
  {
    Field3 E0 = datum_envelope(g, "circular-modulated", 0.4);
    const double T = 0.2;
    std::vector<double> dts{4e-3, 2e-3, 1e-3}, errs;
    auto run = [&](double dt) {
      ZakharovConfig c = zc;
      c.dt = dt;
      auto s = init_from_datum(g, E0);
      int n = static_cast<int>(T / dt + 0.5);
      for (int i = 0; i < n; ++i) s = step(s, c);
      return s;
    };
    auto ref = run(2.5e-4);
    for (double dt : dts) {
      auto s = run(dt);
      errs.push_back((s.E - ref.E).norm() + (s.n - ref.n).norm());
    }
    std::printf("zak dt errors: %.3e %.3e %.3e slope %.2f\n", errs[0], errs[1], errs[2],
                std::log2(errs[0] / errs[1]));
  }

  // 4. WKB residual orders
  {
    Field3 E0 = datum_envelope(g, "circular-modulated", 0.4);
    auto s = init_from_datum(g, E0);
    for (int i = 0; i < 50; ++i) s = step(s, zc);  // t = 0.05, density developed
    std::vector<double> eps_list{0.2, 0.1, 0.05};
    for (int order = 0; order <= 2; ++order) {
      std::vector<double> resn;
      for (double eps : eps_list) {
        PlasmaParams pe = p;
        pe.eps = eps;
        auto prof = build_profile(g, pe, zc, s, order);
        EMOperator op(g, pe);
        const Field14 ua = evaluate_profile(prof, s.t);
        const Field14 dua = evaluate_profile_dt(prof, s.t);
        const Field14 res = op.residual(ua, dua);
        resn.push_back(hs_eps_norm_multi<14>(g, res, eps, 1.0));
      }
      std::printf("order %d residuals: %.4e %.4e %.4e  fit=%.2f\n", order, resn[0], resn[1],
                  resn[2], fitted_order(eps_list, resn));
    }
  }

  // 5. EM linear regime vs exact flow
  {
    PlasmaParams pe = p;
    pe.eps = 0.1;
    EMOperator op(g, pe);
    Field14 u0 = well_prepared_datum(g, datum_envelope(g, "circular-modulated", 1e-8));
    EMRunConfig cfg;
    cfg.grid = g;
    cfg.params = pe;
    cfg.T = 0.01;
    cfg.n_outputs = 1;
    auto traj = integrate(op, cfg, u0);
    const Field14 exact = op.linear_flow(u0, traj.times.back());
    std::printf("em linear regime rel err: %.3e\n",
                (traj.states.back() - exact).norm() / u0.norm());
  }

  // 6. mini convergence study (criterion 9 shape)
  {
    Field3 E0 = datum_envelope(g, "circular-modulated", 0.4);
    ZakharovConfig zc2 = zc;
    auto z0 = init_from_datum(g, E0);
    // store zakharov states at output times over [0, T]
    const double T = 0.1;
    std::vector<double> eps_list{0.2, 0.1, 0.05};
    std::vector<double> errE, errn;
    for (double eps : eps_list) {
      PlasmaParams pe = p;
      pe.eps = eps;
      EMOperator op(g, pe);
      EMRunConfig cfg;
      cfg.grid = g;
      cfg.params = pe;
      cfg.T = T;
      cfg.n_outputs = 5;
      auto traj = integrate(op, cfg, well_prepared_datum(g, E0));
      auto profile_at = [&](double t) {
        auto z = z0;
        ZakharovConfig zl = zc2;
        int n = static_cast<int>(std::round(t / zl.dt));
        zl.dt = n > 0 ? t / n : zl.dt;
        for (int i = 0; i < n; ++i) z = step(z, zl);
        return build_profile(g, pe, zc2, z, 2);
      };
      auto cmp = compare_to_wkb(op, traj, profile_at, 2.0);
      errE.push_back(cmp.worst_E);
      errn.push_back(cmp.worst_n);
      std::printf("eps=%.2f  supE=%.4e  supn=%.4e  hs=%.4e\n", eps, cmp.worst_E, cmp.worst_n,
                  cmp.worst_hs);
    }
    std::printf("fitted order E: %.2f  n: %.2f\n", fitted_order(eps_list, errE),
                fitted_order(eps_list, errn));
  }
  return 0;
}
