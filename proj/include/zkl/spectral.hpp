#pragma once

#include "zkl/symbol.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <optional>
#include <vector>

namespace zkl {

enum class ModeClass { KleinGordon, Acoustic, Kernel };

inline const char* mode_class_name(ModeClass c) {
  switch (c) {
    case ModeClass::KleinGordon: return "KG";
    case ModeClass::Acoustic: return "AC";
    case ModeClass::Kernel: return "KER";
  }
  return "?";
}

/// Point spectrum of the symbol, clustered into rank projectors, plus the
/// Klein-Gordon / acoustic totals. pi0 + pis + kernel == Id.
struct SpectralDecomposition {
  struct Mode {
    double lambda = 0.0;
    int multiplicity = 0;
    ModeClass cls = ModeClass::Acoustic;
    Mat14c projector = Mat14c::Zero();
  };
  std::vector<Mode> modes;   // sorted by eigenvalue
  Mat14c pi0 = Mat14c::Zero();     // Klein-Gordon total
  Mat14c pis = Mat14c::Zero();     // acoustic total, kernel excluded
  Mat14c kernel = Mat14c::Zero();  // span of e0 (zero matrix at xi = 0)
  Eigen::Matrix<double, 14, 1> eigenvalues;  // raw sorted values
  double gap_threshold = 0.0;
};

/// Kernel direction (xi/|xi|, 0, ..., 0); annihilated by A for every (eps,u).
inline Vec14c kernel_vector(const Vec3& xi) {
  Vec14c e0 = Vec14c::Zero();
  e0.segment<3>(0) = (xi / xi.norm()).cast<complexd>();
  return e0;
}

/// Threshold separating acoustic from Klein-Gordon magnitudes. Half the
/// rest-frame Klein-Gordon floor, shrunk at small eps per the acoustic
/// smallness |lambda_ac| <= C eps (1 + |xi|).
inline double acoustic_threshold(const PlasmaParams& p, const Vec3& xi) {
  const double floor = 1e-6;
  return std::max(floor, std::min(0.5, 2.0 * p.eps * (1.0 + xi.norm())));
}

inline SpectralDecomposition eigendecompose(const PlasmaParams& p, const StateVector& u, const Vec3& xi) {
  const Mat14c A = assemble_symbol(p, u, xi).entries;
  Eigen::SelfAdjointEigenSolver<Mat14c> es(A);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");

  SpectralDecomposition dec;
  dec.eigenvalues = es.eigenvalues();
  dec.gap_threshold = acoustic_threshold(p, xi);

  // Cluster near-degenerate eigenvalues into rank projectors.
  const double scale = std::max(1.0, dec.eigenvalues.cwiseAbs().maxCoeff());
  const double ctol = 1e-8 * scale;
  int i = 0;
  while (i < kStateDim) {
    int j = i + 1;
    while (j < kStateDim && dec.eigenvalues(j) - dec.eigenvalues(j - 1) < ctol) ++j;
    SpectralDecomposition::Mode m;
    m.multiplicity = j - i;
    m.lambda = dec.eigenvalues.segment(i, j - i).mean();
    m.projector = es.eigenvectors().middleCols(i, j - i) *
                  es.eigenvectors().middleCols(i, j - i).adjoint();
    dec.modes.push_back(std::move(m));
    i = j;
  }

  int n_kg = 0, n_rest = 0;
  for (auto& m : dec.modes) {
    if (std::abs(m.lambda) > dec.gap_threshold) {
      m.cls = ModeClass::KleinGordon;
      n_kg += m.multiplicity;
      dec.pi0 += m.projector;
    } else {
      m.cls = ModeClass::Acoustic;
      n_rest += m.multiplicity;
    }
  }
  if (n_kg != 6 || n_rest != 8) {
    throw GapViolation("spectral gap violation at |xi|=" + std::to_string(xi.norm()) +
                       ", eps=" + std::to_string(p.eps) + ": " + std::to_string(n_kg) +
                       " Klein-Gordon / " + std::to_string(n_rest) +
                       " acoustic+kernel modes (expected 6/8)");
  }
  // Verify the families actually separate.
  double max_ac = 0.0, min_kg = 1e300;
  for (const auto& m : dec.modes) {
    if (m.cls == ModeClass::KleinGordon) min_kg = std::min(min_kg, std::abs(m.lambda));
    else max_ac = std::max(max_ac, std::abs(m.lambda));
  }
  if (max_ac >= min_kg) {
    throw GapViolation("acoustic/Klein-Gordon crossing at |xi|=" + std::to_string(xi.norm()));
  }

  if (xi.norm() > 0.0) {
    const Vec14c e0 = kernel_vector(xi);
    dec.kernel = e0 * e0.adjoint();
    // Tag a one-dimensional cluster aligned with e0 as the kernel class.
    for (auto& m : dec.modes) {
      if (m.multiplicity == 1 && m.cls == ModeClass::Acoustic &&
          std::abs((e0.adjoint() * m.projector * e0)(0).real() - 1.0) < 1e-8) {
        m.cls = ModeClass::Kernel;
      }
    }
  }
  dec.pis = Mat14c::Identity() - dec.pi0 - dec.kernel;
  return dec;
}

// ---------------------------------------------------------------------------
// Dispersion polynomials.

/// Coefficients c[0] + c[1] w + ... of the transverse quartic at (x, y).
inline std::array<double, 5> transverse_poly(const PlasmaParams& p, const ConvectionScalars& c, double xi_norm) {
  const double e = p.eps * p.eps / (p.theta_e * p.theta_e);
  const double b = 1.0 + xi_norm * xi_norm + e;
  const double x = c.x, y = c.y;
  // (w-x)(w-y)(w^2-b) - x(w-y) - e y (w-x)
  std::array<double, 5> q{};
  // (w-x)(w-y) = w^2 - (x+y) w + xy
  const double s = x + y, pr = x * y;
  // times (w^2 - b): w^4 - s w^3 + (pr - b) w^2 + s b w - pr b
  q[4] = 1.0;
  q[3] = -s;
  q[2] = pr - b;
  q[1] = s * b;
  q[0] = -pr * b;
  // minus x(w - y): -x w + x y
  q[1] -= x;
  q[0] += x * y;
  // minus e y (w - x)
  q[1] -= e * y;
  q[0] += e * y * x;
  return q;
}

/// Coefficients of the longitudinal quintic at (x, y).
inline std::array<double, 6> longitudinal_poly(const PlasmaParams& p, const ConvectionScalars& c, double xi_norm) {
  const double e = p.eps * p.eps / (p.theta_e * p.theta_e);
  const double a2 = p.eps * p.eps * p.alpha * p.alpha * xi_norm * xi_norm;
  const double t2 = p.theta_e * p.theta_e * xi_norm * xi_norm;
  const double x = c.x, y = c.y;
  // g(w) = (w-y)^2 - a2, h(w) = (w-x)^2 - 1 - t2, m(w) = (w-x)^2 - t2
  // w g h + x g - e (w-y) m
  const std::array<double, 3> g{y * y - a2, -2.0 * y, 1.0};
  const std::array<double, 3> h{x * x - 1.0 - t2, -2.0 * x, 1.0};
  const std::array<double, 3> m{x * x - t2, -2.0 * x, 1.0};
  std::array<double, 6> q{};
  // w * g * h
  std::array<double, 5> gh{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gh[i + j] += g[i] * h[j];
  for (int i = 0; i < 5; ++i) q[i + 1] += gh[i];
  // + x g
  for (int i = 0; i < 3; ++i) q[i] += x * g[i];
  // - e (w - y) m
  for (int i = 0; i < 3; ++i) {
    q[i + 1] -= e * m[i];
    q[i] += e * y * m[i];
  }
  return q;
}

template <std::size_t N>
inline double poly_eval(const std::array<double, N>& c, double w) {
  double r = 0.0;
  for (int i = static_cast<int>(N) - 1; i >= 0; --i) r = r * w + c[static_cast<std::size_t>(i)];
  return r;
}

/// All real roots of a polynomial via its companion matrix, Newton-polished.
template <std::size_t N>
inline std::vector<double> poly_roots(const std::array<double, N>& c) {
  constexpr int deg = static_cast<int>(N) - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) comp(0, i) = -c[static_cast<std::size_t>(deg - 1 - i)] / c[N - 1];
  comp.block(1, 0, deg - 1, deg - 1).setIdentity();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  std::vector<double> roots;
  std::array<double, N> d{};  // derivative coefficients
  for (std::size_t i = 1; i < N; ++i) d[i - 1] = c[i] * static_cast<double>(i);
  for (int i = 0; i < deg; ++i) {
    complexd z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z.real()))) continue;
    double w = z.real();
    for (int it = 0; it < 4; ++it) {
      const double fp = poly_eval(d, w);
      if (fp == 0.0) break;
      w -= poly_eval(c, w) / fp;
    }
    roots.push_back(w);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Real roots of both dispersion polynomials. Pre: |xi| > 0.
struct DispersionRoots {
  std::vector<double> transverse;    // 4 roots, each of multiplicity two
  std::vector<double> longitudinal;  // 5 roots, multiplicity one
  double kernel_root = 0.0;
};

inline DispersionRoots dispersion_polynomials(const PlasmaParams& p, const ConvectionScalars& c, const Vec3& xi) {
  const double r = xi.norm();
  if (!(r > 0.0)) throw std::invalid_argument("dispersion_polynomials: |xi| must be positive");
  DispersionRoots out;
  out.transverse = poly_roots(transverse_poly(p, c, r));
  out.longitudinal = poly_roots(longitudinal_poly(p, c, r));
  return out;
}

/// det(w Id - A(eps,u,xi)) cross-check value: the characteristic polynomial of
/// the hermitian symbol, to be compared with w * disp1(w)^2 * disp2(w).
inline complexd characteristic_det(const PlasmaParams& p, const StateVector& u, const Vec3& xi, double w) {
  const Mat14c A = assemble_symbol(p, u, xi).entries;
  return (w * Mat14c::Identity() - A).determinant();
}

// ---------------------------------------------------------------------------
// Closed-form rest spectrum (u = 0).

/// Transverse Klein-Gordon magnitude sqrt(1 + |xi|^2 + eps^2/theta_e^2).
inline double rest_lambda_transverse(const PlasmaParams& p, double xi_norm) {
  return std::sqrt(1.0 + xi_norm * xi_norm + p.eps * p.eps / (p.theta_e * p.theta_e));
}

/// Longitudinal magnitudes: the nonzero roots of the rest quintic solve a
/// quadratic in w^2. Returns (acoustic mu_s(e+), Klein-Gordon mu).
inline std::pair<double, double> rest_mu_longitudinal(const PlasmaParams& p, double xi_norm) {
  const double e = p.eps * p.eps / (p.theta_e * p.theta_e);
  const double t2 = p.theta_e * p.theta_e * xi_norm * xi_norm;
  const double a2 = p.eps * p.eps * p.alpha * p.alpha * xi_norm * xi_norm;
  const double S = 1.0 + t2 + a2 + e;
  const double P = a2 * (1.0 + t2) + p.eps * p.eps * xi_norm * xi_norm;
  const double disc = std::sqrt(std::max(0.0, S * S - 4.0 * P));
  const double mu_kg2 = 0.5 * (S + disc);
  const double mu_s2 = P > 0.0 ? 2.0 * P / (S + disc) : 0.0;  // stable small root
  return {std::sqrt(mu_s2), std::sqrt(mu_kg2)};
}

/// Branch labels of the rest spectrum (u = 0). Signed branches map +/- onto
/// the positive/negative root.
enum class Branch {
  Kernel,               // 0
  TransverseZero,       // lambda_s(e-/e+) = 0 at rest
  TransverseKGPlus,     // +sqrt(1+|xi|^2+e)
  TransverseKGMinus,
  LongitudinalZero,     // mu_s(e-) = 0
  AcousticIonPlus,      // +mu_s(e+)
  AcousticIonMinus,
  LongitudinalKGPlus,   // +mu
  LongitudinalKGMinus,
};

inline bool branch_is_klein_gordon(Branch b) {
  return b == Branch::TransverseKGPlus || b == Branch::TransverseKGMinus ||
         b == Branch::LongitudinalKGPlus || b == Branch::LongitudinalKGMinus;
}

inline double rest_eigenvalue(Branch b, const PlasmaParams& p, double xi_norm) {
  switch (b) {
    case Branch::Kernel:
    case Branch::TransverseZero:
    case Branch::LongitudinalZero:
      return 0.0;
    case Branch::TransverseKGPlus: return rest_lambda_transverse(p, xi_norm);
    case Branch::TransverseKGMinus: return -rest_lambda_transverse(p, xi_norm);
    case Branch::AcousticIonPlus: return rest_mu_longitudinal(p, xi_norm).first;
    case Branch::AcousticIonMinus: return -rest_mu_longitudinal(p, xi_norm).first;
    case Branch::LongitudinalKGPlus: return rest_mu_longitudinal(p, xi_norm).second;
    case Branch::LongitudinalKGMinus: return -rest_mu_longitudinal(p, xi_norm).second;
  }
  return 0.0;
}

inline const std::array<Branch, 4>& klein_gordon_branches() {
  static const std::array<Branch, 4> b{Branch::TransverseKGPlus, Branch::TransverseKGMinus,
                                       Branch::LongitudinalKGPlus, Branch::LongitudinalKGMinus};
  return b;
}

inline const std::array<Branch, 4>& acoustic_branches() {
  static const std::array<Branch, 4> b{Branch::TransverseZero, Branch::LongitudinalZero,
                                       Branch::AcousticIonPlus, Branch::AcousticIonMinus};
  return b;
}

// ---------------------------------------------------------------------------
// Rest eigenvectors (u = 0, xi != 0).

/// Deterministic orthonormal basis {xi1, xi2} of the plane orthogonal to xi,
/// right-handed: xihat x xi1 = xi2.
inline std::pair<Vec3, Vec3> transverse_basis(const Vec3& xi) {
  const Vec3 xihat = xi / xi.norm();
  int kmin = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(xihat(k)) < std::abs(xihat(kmin))) kmin = k;
  const Vec3 emin = Vec3::Unit(kmin);
  const Vec3 xi1 = emin.cross(xi).normalized();
  const Vec3 xi2 = xihat.cross(xi1);
  return {xi1, xi2};
}

/// The labeled rest eigenvector family at (eps, 0, xi).
struct RestEigenvectors {
  struct Entry {
    std::string label;
    Branch branch;
    double lambda;
    Vec14c vec;  // unnormalized, as printed
  };
  std::vector<Entry> entries;

  const Entry& find(const std::string& label) const {
    for (const auto& e : entries)
      if (e.label == label) return e;
    throw std::out_of_range("RestEigenvectors: no entry " + label);
  }
};

namespace detail {

inline Vec14c pack(const Vec3c& B, const Vec3c& E, const Vec3c& ve, complexd ne,
                   const Vec3c& vi, complexd ni) {
  Vec14c v;
  v.segment<3>(0) = B;
  v.segment<3>(3) = E;
  v.segment<3>(6) = ve;
  v(9) = ne;
  v.segment<3>(10) = vi;
  v(13) = ni;
  return v;
}

/// Longitudinal eigenvector for a nonzero root mu of the rest quintic,
/// normalized to v_e = -i xihat (back-substitution through the 5x5 block).
inline Vec14c longitudinal_eigenvector(const PlasmaParams& p, const Vec3& xi, double mu) {
  const double r = xi.norm();
  const Vec3 xihat = xi / r;
  const double t2r2 = p.theta_e * p.theta_e * r * r;
  const double a = p.eps * p.alpha * r;
  const complexd E = (mu * mu - t2r2) / mu;
  const complexd ne = -I * p.theta_e * r / mu;
  const complexd vi = I * (p.eps / p.theta_e) * mu * E / (mu * mu - a * a);
  const complexd ni = p.eps * p.alpha * r * vi / mu;
  return pack(Vec3c::Zero(), E * xihat.cast<complexd>(), -I * xihat.cast<complexd>(), ne,
              vi * xihat.cast<complexd>(), ni);
}

}  // namespace detail

inline RestEigenvectors rest_eigenvectors(const PlasmaParams& p, const Vec3& xi) {
  const double r = xi.norm();
  if (!(r > 0.0)) throw std::invalid_argument("rest_eigenvectors: undefined direction at xi = 0");
  const auto [xi1d, xi2d] = transverse_basis(xi);
  const Vec3c xihat = (xi / r).cast<complexd>();
  const Vec3c xi1 = xi1d.cast<complexd>();
  const Vec3c xi2 = xi2d.cast<complexd>();
  const double te = p.theta_e, eps = p.eps;

  RestEigenvectors fam;
  auto add = [&](const std::string& label, Branch b, double lam, const Vec14c& v) {
    fam.entries.push_back({label, b, lam, v});
  };

  // Kernel.
  add("e0", Branch::Kernel, 0.0, detail::pack(xihat, Vec3c::Zero(), Vec3c::Zero(), 0.0, Vec3c::Zero(), 0.0));

  // Transverse Klein-Gordon pairs.
  const double lamT = rest_lambda_transverse(p, r);
  for (double sgn : {1.0, -1.0}) {
    const double lam = sgn * lamT;
    const Branch b = sgn > 0 ? Branch::TransverseKGPlus : Branch::TransverseKGMinus;
    add(sgn > 0 ? "e+" : "e-", b, lam,
        detail::pack(r / lam * xi2, xi1, -I / lam * xi1, 0.0, I * eps / (te * lam) * xi1, 0.0));
    add(sgn > 0 ? "e'+" : "e'-", b, lam,
        detail::pack(-r / lam * xi1, xi2, -I / lam * xi2, 0.0, I * eps / (te * lam) * xi2, 0.0));
  }

  // Transverse zero modes: electromagnetic-type and ion-type.
  const double nrm_em = 1.0 / std::sqrt(1.0 + r * r);
  add("es(e-)", Branch::TransverseZero, 0.0,
      detail::pack(nrm_em * xi1, Vec3c::Zero(), -I * r * nrm_em * xi2, 0.0, Vec3c::Zero(), 0.0));
  add("e's(e-)", Branch::TransverseZero, 0.0,
      detail::pack(nrm_em * xi2, Vec3c::Zero(), I * r * nrm_em * xi1, 0.0, Vec3c::Zero(), 0.0));
  const double pre_ion = r / (r + eps);
  add("es(e+)", Branch::TransverseZero, 0.0,
      detail::pack(pre_ion * I * eps / (te * r) * xi2, Vec3c::Zero(), Vec3c::Zero(), 0.0, pre_ion * xi1, 0.0));
  add("e's(e+)", Branch::TransverseZero, 0.0,
      detail::pack(-pre_ion * I * eps / (te * r) * xi1, Vec3c::Zero(), Vec3c::Zero(), 0.0, pre_ion * xi2, 0.0));

  // Longitudinal zero mode (as printed). Undefined at alpha = 0, where the
  // weighted ion density decouples.
  if (p.alpha > 0.0) {
    const double nrm_l = 1.0 / std::sqrt(1.0 + te * te * r * r);
    Vec14c fsm = detail::pack(Vec3c::Zero(), -I * te * xi.cast<complexd>(), Vec3c::Zero(),
                              complexd(1.0), Vec3c::Zero(), complexd(-1.0 / p.alpha));
    add("fs(e-)", Branch::LongitudinalZero, 0.0, (nrm_l * fsm).eval());
  }

  // Longitudinal nonzero roots.
  const auto [mu_s, mu_kg] = rest_mu_longitudinal(p, r);
  add("f+", Branch::LongitudinalKGPlus, mu_kg, detail::longitudinal_eigenvector(p, xi, mu_kg));
  add("f-", Branch::LongitudinalKGMinus, -mu_kg, detail::longitudinal_eigenvector(p, xi, -mu_kg));
  if (mu_s > 0.0) {
    add("fs(e+)+", Branch::AcousticIonPlus, mu_s, detail::longitudinal_eigenvector(p, xi, mu_s));
    add("fs(e+)-", Branch::AcousticIonMinus, -mu_s, detail::longitudinal_eigenvector(p, xi, -mu_s));
  }
  return fam;
}

/// Paper-convention totals: Pi0 = Klein-Gordon, Pis = acoustic + kernel.
inline std::pair<Mat14c, Mat14c> total_projectors(const PlasmaParams& p, const StateVector& u, const Vec3& xi) {
  const auto dec = eigendecompose(p, u, xi);
  return {dec.pi0, dec.pis + dec.kernel};
}

}  // namespace zkl
