#pragma once

#include "zkl/core.hpp"

#include <Eigen/Core>
#include <fftw3.h>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace zkl {

using Field = Eigen::VectorXcd;
using Field3 = Eigen::Matrix<complexd, 3, Eigen::Dynamic>;
using Field14 = Eigen::Matrix<complexd, 14, Eigen::Dynamic>;

/// Uniform periodic grid on [0, period)^dim, dim 1 or 3, n a power of two.
/// 1-D reductions live on the third coordinate axis: x = (0, 0, x3),
/// xi = (0, 0, k), so all vector calculus keeps a single code path.
struct PeriodicGrid {
  int dim = 1;
  int n = 64;
  double period = 2.0 * std::numbers::pi;

  int total() const {
    int t = 1;
    for (int d = 0; d < dim; ++d) t *= n;
    return t;
  }
  double dx() const { return period / n; }
  double freq_unit() const { return 2.0 * std::numbers::pi / period; }

  // flat index <-> lattice coordinates; the last axis is fastest (FFTW row-major)
  Eigen::Vector3i coords(int flat) const {
    Eigen::Vector3i c = Eigen::Vector3i::Zero();
    if (dim == 1) {
      c(2) = flat;
    } else {
      c(2) = flat % n;
      c(1) = (flat / n) % n;
      c(0) = flat / (n * n);
    }
    return c;
  }

  /// Physical coordinates of a grid point; 1-D fields vary along axis 3.
  Vec3 point(int flat) const {
    const Eigen::Vector3i c = coords(flat);
    Vec3 x = Vec3::Zero();
    if (dim == 1) {
      x(2) = c(2) * dx();
    } else {
      x = c.cast<double>() * dx();
    }
    return x;
  }

  /// Signed physical frequency vector of a spectral index.
  Vec3 freq(int flat) const {
    const Eigen::Vector3i c = coords(flat);
    auto wrap = [this](int k) { return k <= n / 2 ? k : k - n; };
    Vec3 xi = Vec3::Zero();
    if (dim == 1) {
      xi(2) = wrap(c(2)) * freq_unit();
    } else {
      for (int d = 0; d < 3; ++d) xi(d) = wrap(c(d)) * freq_unit();
    }
    return xi;
  }

  bool operator<(const PeriodicGrid& o) const {
    return std::tie(dim, n, period) < std::tie(o.dim, o.n, o.period);
  }
};

namespace fftcore {

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

inline Plans& plans_for(int dim, int n) {
  static std::map<std::pair<int, int>, Plans> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(dim, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  std::vector<complexd> tmp_in(total), tmp_out(total);
  auto* in = reinterpret_cast<fftw_complex*>(tmp_in.data());
  auto* out = reinterpret_cast<fftw_complex*>(tmp_out.data());
  Plans p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  if (dim == 1) {
    p.fwd = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
  } else {
    p.fwd = fftw_plan_dft_3d(n, n, n, in, out, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, flags);
  }
  return cache.emplace(key, p).first->second;
}

}  // namespace fftcore

/// Forward transform to trig-polynomial coefficients (1/N normalization).
inline Field to_spectral(const PeriodicGrid& g, const Field& phys) {
  Field out(g.total());
  Field in = phys;
  auto& plans = fftcore::plans_for(g.dim, g.n);
  fftw_execute_dft(plans.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  out /= static_cast<double>(g.total());
  return out;
}

/// Inverse transform from coefficients to grid samples.
inline Field to_physical(const PeriodicGrid& g, const Field& spec) {
  Field out(g.total());
  Field in = spec;
  auto& plans = fftcore::plans_for(g.dim, g.n);
  fftw_execute_dft(plans.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

template <int N>
inline Eigen::Matrix<complexd, N, Eigen::Dynamic> to_spectral_multi(
    const PeriodicGrid& g, const Eigen::Matrix<complexd, N, Eigen::Dynamic>& phys) {
  Eigen::Matrix<complexd, N, Eigen::Dynamic> out(N, g.total());
  for (int c = 0; c < N; ++c) out.row(c) = to_spectral(g, phys.row(c).transpose()).transpose();
  return out;
}

template <int N>
inline Eigen::Matrix<complexd, N, Eigen::Dynamic> to_physical_multi(
    const PeriodicGrid& g, const Eigen::Matrix<complexd, N, Eigen::Dynamic>& spec) {
  Eigen::Matrix<complexd, N, Eigen::Dynamic> out(N, g.total());
  for (int c = 0; c < N; ++c) out.row(c) = to_physical(g, spec.row(c).transpose()).transpose();
  return out;
}

/// d/dx_axis by spectral differentiation.
inline Field spectral_derivative(const PeriodicGrid& g, const Field& phys, int axis) {
  Field spec = to_spectral(g, phys);
  for (int k = 0; k < g.total(); ++k) spec(k) *= I * g.freq(k)(axis);
  return to_physical(g, spec);
}

/// Discrete L2 norm matching the continuum measure.
inline double l2_norm(const PeriodicGrid& g, const Field& phys) {
  double cell = 1.0;
  for (int d = 0; d < g.dim; ++d) cell *= g.dx();
  return std::sqrt(phys.squaredNorm() * cell);
}

/// Leray projection: removes the spectral component along xi (mean kept).
inline Field3 leray_project(const PeriodicGrid& g, const Field3& phys) {
  Field3 spec = to_spectral_multi<3>(g, phys);
  for (int k = 0; k < g.total(); ++k) {
    const Vec3 xi = g.freq(k);
    const double n2 = xi.squaredNorm();
    if (n2 == 0.0) continue;
    const Vec3c xic = xi.cast<complexd>();
    spec.col(k) -= xic * (xic.dot(spec.col(k)) / n2);
  }
  return to_physical_multi<3>(g, spec);
}

}  // namespace zkl
