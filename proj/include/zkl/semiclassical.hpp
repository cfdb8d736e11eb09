#pragma once

#include "zkl/grid.hpp"
#include "zkl/resonance.hpp"  // smooth_step

#include <functional>

namespace zkl {

/// Field paired with the eps its norms are weighted by.
struct SemiclassicalField {
  Field values;
  double eps = 1.0;
};

/// Weighted-spectrum Sobolev norm || (1+|eps xi|^2)^{s/2} v^ ||_{L2}.
inline double hs_eps_norm(const PeriodicGrid& g, const Field& phys, double eps, double s) {
  const Field spec = to_spectral(g, phys);
  double acc = 0.0;
  for (int k = 0; k < g.total(); ++k) {
    const double w = 1.0 + eps * eps * g.freq(k).squaredNorm();
    acc += std::pow(w, s) * std::norm(spec(k));
  }
  double vol = 1.0;
  for (int d = 0; d < g.dim; ++d) vol *= g.period;
  return std::sqrt(vol * acc);
}

template <int N>
inline double hs_eps_norm_multi(const PeriodicGrid& g, const Eigen::Matrix<complexd, N, Eigen::Dynamic>& phys,
                                double eps, double s) {
  double acc = 0.0;
  for (int c = 0; c < N; ++c) {
    const double nc = hs_eps_norm(g, phys.row(c).transpose(), eps, s);
    acc += nc * nc;
  }
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Paradifferential cutoff.

/// Radial plateau profile: 1 for t <= 1.1, 0 for t >= 1.9.
inline double plateau(double t) { return 1.0 - smooth_step((t - 1.1) / 0.8); }

/// Dyadic ring profile phi_k(xi) built from the plateau; sums to one.
inline double phi_ring(int k, double xi_norm) {
  const double bracket = std::sqrt(1.0 + xi_norm * xi_norm);
  const double lo = plateau(std::ldexp(bracket, -k));
  const double hi = k >= 1 ? plateau(std::ldexp(bracket, -(k - 1))) : 0.0;
  return lo - hi;
}

/// Number of dyadic shells that can be active up to a frequency bound.
inline int shell_count(double max_xi_norm) {
  const double bracket = std::sqrt(1.0 + max_xi_norm * max_xi_norm);
  return std::max(1, static_cast<int>(std::ceil(std::log2(bracket))) + 2);
}

/// psi(eta, xi) = sum_k chi(2^{-k+3} eta) phi_k(xi); equals 1 for
/// |eta| <= 2^-5 <xi>, vanishes for |eta| >= 2^-1 <xi>.
inline double psi_cutoff(double eta_norm, double xi_norm) {
  double acc = 0.0;
  const int K = shell_count(xi_norm) + 2;
  for (int k = 0; k <= K; ++k) acc += plateau(std::ldexp(eta_norm, -k + 3)) * phi_ring(k, xi_norm);
  return acc;
}

struct ParaCutoff {
  double chi0_lo = 1.1, chi0_hi = 1.9;
  static double chi0(double t) { return plateau(t); }
  static double chi(double t) { return plateau(t); }
  static double psi(double eta, double xi) { return psi_cutoff(eta, xi); }
};

// ---------------------------------------------------------------------------
// Quantization.

using MultiplierFn = std::function<complexd(const Vec3&)>;        // of eps*xi
using SymbolFn = std::function<complexd(const Vec3&, const Vec3&)>;  // (x, eps*xi)

/// op_eps of a Fourier multiplier: exact diagonal action in spectrum.
inline Field apply_multiplier(const PeriodicGrid& g, double eps, const MultiplierFn& m, const Field& u) {
  Field spec = to_spectral(g, u);
  for (int k = 0; k < g.total(); ++k) spec(k) *= m(eps * g.freq(k));
  return to_physical(g, spec);
}

/// op_eps of a product symbol p1(x) p2(eps xi): multiplier then pointwise.
inline Field quantize_product(const PeriodicGrid& g, double eps, const Field& p1,
                              const MultiplierFn& p2, const Field& u) {
  return p1.cwiseProduct(apply_multiplier(g, eps, p2, u));
}

/// Direct double-sum oracle for a general symbol. Guarded against large grids.
inline Field quantize_oracle(const PeriodicGrid& g, double eps, const SymbolFn& q, const Field& u) {
  if (g.total() > (1 << 14))
    throw std::invalid_argument("quantize_oracle: grid too large for the direct double sum");
  const Field spec = to_spectral(g, u);
  Field out = Field::Zero(g.total());
  for (int j = 0; j < g.total(); ++j) {
    const Vec3 x = g.point(j);
    complexd acc = 0.0;
    for (int k = 0; k < g.total(); ++k) {
      const Vec3 xi = g.freq(k);
      acc += std::exp(I * xi.dot(x)) * q(x, eps * xi) * spec(k);
    }
    out(j) = acc;
  }
  return out;
}

/// Frequency-filtered copy of a coefficient field: keeps x-spectrum where
/// chi(2^{-k+3} eps eta) is active for dyadic shell k. The eta variable is
/// scaled by eps, matching the op_1 coordinates the smoothing is defined in.
inline Field shell_filter(const PeriodicGrid& g, double eps, const Field& coeff, int k) {
  Field spec = to_spectral(g, coeff);
  for (int j = 0; j < g.total(); ++j)
    spec(j) *= plateau(std::ldexp(eps * g.freq(j).norm(), -k + 3));
  return to_physical(g, spec);
}

/// Paradifferential action op^psi_eps for a product symbol p1(x) p2(eps xi),
/// through the dyadic decomposition of psi.
inline Field para_product(const PeriodicGrid& g, double eps, const Field& p1, const MultiplierFn& p2,
                          const Field& u) {
  double max_exi = 0.0;
  for (int k = 0; k < g.total(); ++k) max_exi = std::max(max_exi, eps * g.freq(k).norm());
  const int K = shell_count(max_exi) + 2;
  const Field uspec = to_spectral(g, u);
  Field out = Field::Zero(g.total());
  for (int k = 0; k <= K; ++k) {
    Field ring = uspec;
    bool any = false;
    for (int j = 0; j < g.total(); ++j) {
      const Vec3 exi = eps * g.freq(j);
      const double w = phi_ring(k, exi.norm());
      ring(j) *= w * p2(exi);
      any = any || w != 0.0;
    }
    if (!any) continue;
    out += shell_filter(g, eps, p1, k).cwiseProduct(to_physical(g, ring));
  }
  return out;
}

/// Adjoint of para_product in the discrete L2 inner product.
inline Field para_product_adjoint(const PeriodicGrid& g, double eps, const Field& p1,
                                  const MultiplierFn& p2, const Field& u) {
  double max_exi = 0.0;
  for (int k = 0; k < g.total(); ++k) max_exi = std::max(max_exi, eps * g.freq(k).norm());
  const int K = shell_count(max_exi) + 2;
  Field out = Field::Zero(g.total());
  for (int k = 0; k <= K; ++k) {
    const Field a = shell_filter(g, eps, p1, k);
    Field w = a.conjugate().cwiseProduct(u);
    Field spec = to_spectral(g, w);
    bool any = false;
    for (int j = 0; j < g.total(); ++j) {
      const Vec3 exi = eps * g.freq(j);
      const double r = phi_ring(k, exi.norm());
      spec(j) *= r * std::conj(p2(exi));
      any = any || r != 0.0;
    }
    if (!any) continue;
    out += to_physical(g, spec);
  }
  return out;
}

/// op_eps - op^psi_eps applied through the exact product path and the dyadic
/// path; the paradifferential remainder.
inline Field para_remainder(const PeriodicGrid& g, double eps, const Field& p1, const MultiplierFn& p2,
                            const Field& u) {
  return quantize_product(g, eps, p1, p2, u) - para_product(g, eps, p1, p2, u);
}

}  // namespace zkl
