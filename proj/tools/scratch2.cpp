// Validation pass for the operator-calculus and transparency modules (temporary).
#include "zkl/em.hpp"
#include "zkl/homological.hpp"

#include <cstdio>

using namespace zkl;

int main() {
  // --- psi cutoff identities
  {
    double worst1 = 0, worst2 = 0, worst3 = 0;
    for (double xi : {0.0, 0.7, 3.0, 17.0, 120.0}) {
      const double br = std::sqrt(1.0 + xi * xi);
      for (double eta = 0.0; eta <= 4 * br; eta += 0.03 * br + 1e-3) {
        const double v = psi_cutoff(eta, xi);
        if (eta <= br / 32.0) worst1 = std::max(worst1, std::abs(v - 1.0));
        if (eta >= br / 2.0) worst2 = std::max(worst2, std::abs(v));
        if (eta <= 1.0 / 32.0) worst3 = std::max(worst3, std::abs(v - 1.0));
      }
    }
    std::printf("psi plateau devs: %.2e %.2e %.2e\n", worst1, worst2, worst3);
  }

  // --- paradifferential remainder scaling, s = 4, d = 1
  {
    PeriodicGrid g;
    g.dim = 1;
    g.n = 2048;
    const double s = 4.0, m = 0.0, d0 = 1.0;
    // coefficient with an H^s-critical spectrum tail; the input oscillates at
    // the semiclassical scale so the smoothing cutoff depends on eps.
    Field v = Field::Zero(g.total());
    {
      Field spec = Field::Zero(g.total());
      for (int k = 0; k < g.total(); ++k) {
        const double kk = std::abs(g.freq(k)(2));
        if (kk < 0.5) { spec(k) = 1.0; continue; }
        spec(k) = std::pow(1.0 + kk * kk, -(s + 0.51) / 2.0) * std::exp(I * 0.37 * kk);
      }
      v = to_physical(g, spec);
    }
    std::vector<double> epss, ratios;
    for (int j = 2; j <= 6; ++j) {
      const double eps = std::pow(2.0, -j);
      const int kc = static_cast<int>(std::round(8.0 / eps));
      Field u(g.total());
      for (int k = 0; k < g.total(); ++k) u(k) = std::exp(I * static_cast<double>(kc) * g.point(k)(2));
      auto p2 = [](const Vec3& exi) { return complexd(1.0 / (1.0 + exi.squaredNorm())); };
      const Field rem = para_remainder(g, eps, v, p2, u);
      const double num = hs_eps_norm(g, rem, eps, s);
      const double den = hs_eps_norm(g, v, eps, s) * hs_eps_norm(g, u, eps, m + d0);
      epss.push_back(eps);
      ratios.push_back(num / den);
      std::printf("  eps=%.4f remainder ratio %.3e\n", eps, num / den);
    }
    std::printf("remainder slope: %.2f (target %.2f +- 0.5)\n", fitted_order(epss, ratios), s - 0.5);
  }

  // --- composition and adjoint defects
  {
    PeriodicGrid g;
    g.dim = 1;
    g.n = 128;
    Field a(g.total()), b(g.total()), u(g.total());
    for (int k = 0; k < g.total(); ++k) {
      const double x = g.point(k)(2);
      a(k) = 1.0 + 0.4 * std::cos(x);
      b(k) = 0.7 + 0.3 * std::sin(x) + 0.1 * std::cos(3 * x);
      u(k) = std::cos(2 * x) + 0.5 * std::sin(5 * x) + complexd(0, 0.2) * std::cos(x);
    }
    auto m1 = [](const Vec3& exi) { return complexd(1.0 / (1.0 + exi.squaredNorm())); };
    auto m2 = [](const Vec3& exi) { return std::exp(-0.3 * exi.squaredNorm()); };
    std::vector<double> epss, comp, adj;
    for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
      const Field lhs = para_product(g, eps, a, m1, para_product(g, eps, b, m2, u));
      const Field rhs = para_product(g, eps, a.cwiseProduct(b),
                                     [&](const Vec3& e) { return m1(e) * m2(e); }, u);
      comp.push_back(hs_eps_norm(g, lhs - rhs, eps, 2.0));
      const Field ad = para_product_adjoint(g, eps, a, m1, u) -
                       para_product(g, eps, a.conjugate(),
                                    [&](const Vec3& e) { return std::conj(m1(e)); }, u);
      adj.push_back(hs_eps_norm(g, ad, eps, 2.0));
      epss.push_back(eps);
    }
    std::printf("composition slope: %.2f  adjoint slope: %.2f\n", fitted_order(epss, comp),
                fitted_order(epss, adj));
  }

  // --- resonance localization at the acceptance parameters
  {
    PlasmaParams pr;
    pr.eps = 0.05;
    pr.theta_e = 0.35;
    pr.alpha = 0.1;
    for (double eps : {0.05, 0.025, 0.0125}) {
      pr.eps = eps;
      try {
        auto rep = locate_resonances(pr, ResonanceFamily::KG_Acoustic);
        double rmax = 0;
        for (auto& r : rep.roots) rmax = std::max(rmax, r.radius);
        std::printf("  (0-s) eps=%.4f roots=%zu max radius=%.4f margin=%.3e\n", eps,
                    rep.roots.size(), rmax, rep.margin);
      } catch (const LocalizationFailure& e) {
        std::printf("  (0-s) eps=%.4f FAIL: %s\n", eps, e.what());
      }
    }
    pr.eps = 0.05;
    auto r00 = locate_resonances(pr, ResonanceFamily::KG_KG);
    double rmin = 1e9, rmax = 0;
    for (auto& r : r00.roots) {
      rmin = std::min(rmin, r.radius);
      rmax = std::max(rmax, r.radius);
    }
    std::printf("  (0-0) roots in [%.4f, %.4f], margin %.3e\n", rmin, rmax, r00.margin);
    auto rsec = locate_resonances(pr, ResonanceFamily::Secondary);
    std::printf("  (0-0-s) margin %.4f\n", rsec.margin);
    // theta_e -> 0 root vs sqrt(3)
    PlasmaParams p0 = pr;
    p0.theta_e = 1e-5;
    p0.eps = 1e-12;
    auto rep = locate_resonances(p0, ResonanceFamily::KG_KG);
    double best = 1e9;
    for (auto& r : rep.roots) best = std::min(best, std::abs(r.radius - std::sqrt(3.0)));
    std::printf("  theta->0 root dev from sqrt3: %.3e\n", best);
  }

  // --- transparency + symmetrizer + homological, with a synthetic profile point
  {
    PlasmaParams p;
    p.eps = 0.05;
    p.theta_e = 0.35;
    p.alpha = 0.1;
    PeriodicGrid g;
    g.dim = 1;
    g.n = 64;
    ZakharovConfig zc;
    zc.grid = g;
    zc.dt = 1e-3;
    zc.theta_e = p.theta_e;
    zc.alpha = p.alpha;
    auto s = init_from_datum(g, datum_envelope(g, "circular-modulated", 0.4));
    for (int i = 0; i < 30; ++i) s = step(s, zc);

    for (double eps : {0.1, 0.05, 0.025}) {
      PlasmaParams pe = p;
      pe.eps = eps;
      auto prof = build_profile(g, pe, zc, s, 2);
      auto pt = profile_point(prof, s.t, 5);
      TransparencyReport rep;
      for (const auto& dir : probe_directions()) {
        auto r1 = check_transparency(pe, pt, dir);
        rep.C_B = std::max(rep.C_B, r1.C_B);
        rep.C = std::max(rep.C, r1.C);
        rep.C_D = std::max(rep.C_D, r1.C_D);
      }
      std::printf("  eps=%.3f C_B=%.3f C=%.3f C_D=%.3f\n", eps, rep.C_B, rep.C, rep.C_D);
      if (!rep.witnesses.empty()) {
        const auto& w = rep.witnesses.back();
        std::printf("    worst: r=%.4f coeff=%.3e phi=%.3e lj=%.4f lk=%.4f\n", w.xi_norm,
                    w.coeff, w.phi, w.lambda_j, w.lambda_k);
      }
    }

    auto prof = build_profile(g, p, zc, s, 2);
    auto pt = profile_point(prof, s.t, 5);
    const double eta = check_nontransparency(p, pt, Vec3(0, 0, 1));
    std::printf("  nontransparency margin eta=%.4e (ve0 scale %.3f)\n", eta,
                pt.u.segment<3>(6).norm());

    auto sym = build_symmetrizer(p, Vec3(0, 0, 0.7));
    const Mat14c A = assemble_symbol(p, StateVector{}, Vec3(0, 0, 0.7)).entries;
    std::printf("  symmetrizer gamma=%.3f  ||SA-(SA)*||=%.2e\n", sym.gamma,
                (sym.S * A - (sym.S * A).adjoint().eval()).norm());

    // skewness of S E + (SE)^* as eps halves
    for (double eps : {0.1, 0.05, 0.025}) {
      PlasmaParams pe = p;
      pe.eps = eps;
      auto prof2 = build_profile(g, pe, zc, s, 2);
      // real profile snapshot at theta = 0.3
      const Field14 ua = evaluate_profile(prof2, 0.3 * eps * eps);
      Vec14c uav = ua.col(5);
      double worst = 0.0;
      for (const auto& dir : probe_directions())
        worst = std::max(worst, symmetrizer_skew_defect(pe, uav, (0.7 * dir).eval()));
      std::printf("  eps=%.3f skew defect/eps = %.4f\n", eps, worst / eps);
    }

    // homological residual slope (criterion 10 style)
    std::vector<double> epss, resid;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      PlasmaParams pe = p;
      pe.eps = eps;
      auto prof2 = build_profile(g, pe, zc, s, 2);
      auto pt2 = profile_point(prof2, s.t, 5);
      auto pt2dt = profile_point_dt(prof2, s.t, 5);
      double worst = 0;
      for (double r : {0.1, 0.25, 0.4, 0.55})
        for (const auto& dir : probe_directions()) {
          worst = std::max(worst, homological_residual_algebraic(pe, pt2, (r * dir).eval(), -1));
          worst = std::max(worst,
                           homological_residual_commutator(pe, pt2, pt2dt, (r * dir).eval(), -1));
        }
      epss.push_back(eps);
      resid.push_back(worst);
      std::printf("  eps=%.3f homological residual %.4e\n", eps, worst);
    }
    std::printf("  homological slope: %.2f (target 2 +- 0.3)\n", fitted_order(epss, resid));
  }
  return 0;
}
