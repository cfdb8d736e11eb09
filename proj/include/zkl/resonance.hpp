#pragma once

#include "zkl/spectral.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace zkl {

// Frequency-truncation geometry shared by the cutoffs and the normal-form
// symbols. The plateaus sit strictly between the resonance localization
// radii c_l < c_m <= C_m.
namespace cutoff {
inline constexpr double c_l = 0.5;
inline constexpr double c_0 = 0.6;
inline constexpr double c_1 = 0.8;
inline constexpr double c_m = 1.0;
inline constexpr double C_m = 2.0;
}  // namespace cutoff

/// C-infinity step built from the exp(-1/t) bump: 0 for t<=0, 1 for t>=1.
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

/// chi_eps: 1 on |xi| <= c_0, eps on |xi| >= c_1.
inline double chi_eps(double eps, double r) {
  const double s = smooth_step((r - cutoff::c_0) / (cutoff::c_1 - cutoff::c_0));
  return 1.0 + (eps - 1.0) * s;
}

/// chi_L: 0 on |xi| <= c_l, 1 on |xi| >= c_0.
inline double chi_L(double r) {
  return smooth_step((r - cutoff::c_l) / (cutoff::c_0 - cutoff::c_l));
}

/// chi_N: 1 on |xi| <= c_1, 0 on |xi| >= c_m.
inline double chi_N(double r) {
  return 1.0 - smooth_step((r - cutoff::c_1) / (cutoff::c_m - cutoff::c_1));
}

/// Compact-support companion for the leading normal-form symbol:
/// 1 on |xi| <= c_0, 0 on |xi| >= c_1.
inline double chi_N0_support(double r) {
  return 1.0 - smooth_step((r - cutoff::c_0) / (cutoff::c_1 - cutoff::c_0));
}

/// Phase Phi_{j,k,p}(eps, xi) = lambda_j(eps,0,xi) - lambda_k(eps,0,xi) + p w.
inline double resonance_phase(Branch j, Branch k, int p, const PlasmaParams& par, double xi_norm) {
  return rest_eigenvalue(j, par, xi_norm) - rest_eigenvalue(k, par, xi_norm) +
         static_cast<double>(p) * PlasmaParams::omega;
}

/// Secondary phase Psi_{j,p,p'}(xi) = lambda_j(0,0,xi) - (p+p') w.
inline double secondary_phase(Branch j, int p, int pp, const PlasmaParams& par, double xi_norm) {
  PlasmaParams p0 = par;
  p0.eps = 0.0;  // evaluated at eps = 0 by definition
  return rest_eigenvalue(j, p0, xi_norm) - static_cast<double>(p + pp) * PlasmaParams::omega;
}

/// Phase clip: phi if |phi| >= eps^2/2, else eps^2/2 (positive clip).
inline double clip_phase(double phi, double eps) {
  const double floor_val = 0.5 * eps * eps;
  return std::abs(phi) >= floor_val ? phi : floor_val;
}

enum class ResonanceFamily { KG_KG, KG_Acoustic, Secondary };

inline const char* family_name(ResonanceFamily f) {
  switch (f) {
    case ResonanceFamily::KG_KG: return "0-0";
    case ResonanceFamily::KG_Acoustic: return "0-s";
    case ResonanceFamily::Secondary: return "0-0-s";
  }
  return "?";
}

struct ResonanceReport {
  struct Root {
    Branch j, k;
    int p, pp;  // pp used by the secondary family only
    double radius;
  };
  ResonanceFamily family;
  std::vector<Root> roots;
  double c_l = cutoff::c_l, c_m = cutoff::c_m, C_m = cutoff::C_m;
  double margin = 0.0;  // inf |phase| outside the declared interval
  bool localized = true;
  std::string violation;
};

namespace detail {

/// Sign-change bracketing on log-spaced radii, then bisection to 1e-12.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double rmin,
                                      double rmax, int n_scan) {
  std::vector<double> roots;
  double prev_r = rmin, prev_f = f(rmin);
  const double lmin = std::log(rmin), lmax = std::log(rmax);
  for (int i = 1; i <= n_scan; ++i) {
    const double r = std::exp(lmin + (lmax - lmin) * i / n_scan);
    const double fr = f(r);
    if (prev_f == 0.0) roots.push_back(prev_r);
    if (prev_f * fr < 0.0) {
      double a = prev_r, b = r, fa = prev_f;
      for (int it = 0; it < 200 && b - a > 1e-12 * (1.0 + b); ++it) {
        const double m = 0.5 * (a + b), fm = f(m);
        if (fa * fm <= 0.0) b = m;
        else { a = m; fa = fm; }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_r = r;
    prev_f = fr;
  }
  return roots;
}

inline double min_abs_outside(const std::function<double(double)>& f, double lo, double hi,
                              double rmin, double rmax, int n_scan) {
  double m = 1e300;
  const double lmin = std::log(rmin), lmax = std::log(rmax);
  for (int i = 0; i <= n_scan; ++i) {
    const double r = std::exp(lmin + (lmax - lmin) * i / n_scan);
    if (r >= lo && r <= hi) continue;
    m = std::min(m, std::abs(f(r)));
  }
  return m;
}

}  // namespace detail

/// Locates a resonance family's roots in |xi| and verifies the localization
/// constants c_l = 1/2, c_m = 1, C_m = 2.
inline ResonanceReport locate_resonances(const PlasmaParams& par, ResonanceFamily family,
                                         double rmin = 1e-3, double rmax = 50.0, int n_scan = 2000) {
  ResonanceReport rep;
  rep.family = family;
  std::ostringstream viol;

  auto handle_pair = [&](Branch j, Branch k, int p, double lo, double hi) {
    auto f = [&](double r) { return resonance_phase(j, k, p, par, r); };
    for (double root : detail::scan_roots(f, rmin, rmax, n_scan)) {
      rep.roots.push_back({j, k, p, 0, root});
      if (root < lo || root > hi) {
        rep.localized = false;
        viol << " root " << root << " outside [" << lo << "," << hi << "] for (j=" << static_cast<int>(j)
             << ",k=" << static_cast<int>(k) << ",p=" << p << ");";
      }
    }
    rep.margin = std::min(rep.margin, detail::min_abs_outside(f, lo, hi, rmin, rmax, n_scan));
  };

  rep.margin = 1e300;
  switch (family) {
    case ResonanceFamily::KG_KG: {
      PlasmaParams p0 = par;
      p0.eps = 0.0;  // the (0-0) equations are posed at eps = 0
      for (Branch j : klein_gordon_branches())
        for (Branch k : klein_gordon_branches())
          for (int p : PlasmaParams::harmonics) {
            auto f = [&](double r) { return resonance_phase(j, k, p, p0, r); };
            for (double root : detail::scan_roots(f, rmin, rmax, n_scan)) {
              rep.roots.push_back({j, k, p, 0, root});
              if (root < cutoff::c_m || root > cutoff::C_m) {
                rep.localized = false;
                viol << " (0-0) root " << root << " outside [1,2];";
              }
            }
            rep.margin = std::min(rep.margin,
                detail::min_abs_outside(f, cutoff::c_m, cutoff::C_m, rmin, rmax, n_scan));
          }
      break;
    }
    case ResonanceFamily::KG_Acoustic: {
      for (Branch j : klein_gordon_branches())
        for (Branch k : acoustic_branches())
          for (int p : PlasmaParams::harmonics) handle_pair(j, k, p, 0.0, cutoff::c_l);
      break;
    }
    case ResonanceFamily::Secondary: {
      // Psi must stay away from zero on |xi| <= c_m for all p, p'.
      double margin = 1e300;
      for (Branch j : klein_gordon_branches())
        for (int p : PlasmaParams::harmonics)
          for (int pp : PlasmaParams::harmonics) {
            auto f = [&](double r) { return secondary_phase(j, p, pp, par, r); };
            for (double root : detail::scan_roots(f, rmin, cutoff::c_m, n_scan / 2)) {
              rep.roots.push_back({j, j, p, pp, root});
              rep.localized = false;
              viol << " (0-0-s) root " << root << " inside [0," << cutoff::c_m << "];";
            }
            for (int i = 0; i <= n_scan / 2; ++i) {
              const double r = rmin + (cutoff::c_m - rmin) * i / (n_scan / 2);
              margin = std::min(margin, std::abs(f(r)));
            }
          }
      rep.margin = margin;
      break;
    }
  }
  rep.violation = viol.str();
  if (!rep.localized)
    throw LocalizationFailure("resonance localization failure (" + std::string(family_name(family)) +
                              "):" + rep.violation);
  return rep;
}

}  // namespace zkl
