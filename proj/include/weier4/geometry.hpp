#pragma once

// Surfaces x = Re Psi with Psi' = Phi: grid evaluation, first and second
// fundamental data, normal projection of Phi', ambient motions and a
// finite-difference harmonicity check.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "weier4/weierstrass.hpp"

namespace weier4 {

inline constexpr double kDegenerateNorm = 1e-10;

using Psi = std::array<TaylorSeries, 4>;

/// Node-centred closed rectangle with uniform spacing h in u and v.
struct GridSpec {
  double u0 = 0.0, u1 = 0.0;
  double v0 = 0.0, v1 = 0.0;
  double h = 0.0;

  static GridSpec square(double lo, double hi, double h) { return {lo, hi, lo, hi, h}; }

  int cols() const { return static_cast<int>(std::llround((u1 - u0) / h)) + 1; }
  int rows() const { return static_cast<int>(std::llround((v1 - v0) / h)) + 1; }
  double u(int col) const { return u0 + col * h; }
  double v(int row) const { return v0 + row * h; }
  Complex node(int row, int col) const { return {u(col), v(row)}; }
};

/// Per-node curvature data, attached to a patch when available.
struct CurvatureSample {
  double K = 0.0;
  double kappa = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  double E = 0.0;
};

struct SurfacePatch {
  GridSpec grid;
  int rows = 0;
  int cols = 0;
  std::vector<Vec4> points;  // row-major, row = v index
  std::vector<double> E;
  bool origin_pinned = false;
  std::vector<CurvatureSample> curvature;  // empty or one per node

  const Vec4& at(int row, int col) const { return points[static_cast<std::size_t>(row) * cols + col]; }
  std::size_t index(int row, int col) const { return static_cast<std::size_t>(row) * cols + col; }
};

inline Psi integrate_phi(const PhiCurve& p) {
  return {integrate(p.phi[0]), integrate(p.phi[1]), integrate(p.phi[2]), integrate(p.phi[3])};
}

inline PhiCurve differentiate_psi(const Psi& psi) {
  return PhiCurve{{differentiate(psi[0]), differentiate(psi[1]), differentiate(psi[2]), differentiate(psi[3])},
                  PhiKind::general};
}

/// x = Re Psi and E = |Phi|^2 / 2 at every grid node.
inline SurfacePatch eval_patch(const Psi& psi, const GridSpec& grid) {
  const PhiCurve phi = differentiate_psi(psi);
  SurfacePatch patch;
  patch.grid = grid;
  patch.rows = grid.rows();
  patch.cols = grid.cols();
  patch.points.resize(static_cast<std::size_t>(patch.rows) * patch.cols);
  patch.E.resize(patch.points.size());
  for (int r = 0; r < patch.rows; ++r) {
    for (int c = 0; c < patch.cols; ++c) {
      const Complex t = grid.node(r, c);
      Vec4 x;
      for (int i = 0; i < 4; ++i) x[i] = psi[i].evaluate(t).real();
      patch.points[patch.index(r, c)] = x;
      patch.E[patch.index(r, c)] = 0.5 * phi.value(t).squaredNorm();
    }
  }
  bool pinned = psi[0].base() == Complex{};
  for (const auto& s : psi) pinned = pinned && s[0] == Complex{};
  patch.origin_pinned = pinned;
  return patch;
}

/// Samples an arbitrary R^4-valued field on a grid (E set to 1). Used for
/// control fields and closed-form surfaces.
inline SurfacePatch sample_patch(const GridSpec& grid, const std::function<Vec4(double, double)>& x) {
  SurfacePatch patch;
  patch.grid = grid;
  patch.rows = grid.rows();
  patch.cols = grid.cols();
  patch.points.resize(static_cast<std::size_t>(patch.rows) * patch.cols);
  patch.E.assign(patch.points.size(), 1.0);
  for (int r = 0; r < patch.rows; ++r)
    for (int c = 0; c < patch.cols; ++c) patch.points[patch.index(r, c)] = x(grid.u(c), grid.v(r));
  return patch;
}

/// Phi'_perp = Phi' - (Phi' . conj(Phi) / |Phi|^2) Phi.
inline CVec4 normal_project(const CVec4& phi, const CVec4& dphi) {
  const double n2 = phi.squaredNorm();
  if (n2 <= kDegenerateNorm * kDegenerateNorm) throw Error(Errc::DegeneratePoint, "|Phi| vanishes");
  // Eigen's dot conjugates its first argument: phi.dot(dphi) = conj(phi) . dphi.
  const Complex coef = phi.dot(dphi) / n2;
  return dphi - coef * phi;
}

inline CVec4 normal_project(const PhiCurve& p, Complex t) { return normal_project(p.value(t), p.derivative_value(t)); }

/// Unit vector completing (a, b, c) to a positively oriented orthonormal basis.
inline Vec4 complete_positive_basis(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 n;
  for (int i = 0; i < 4; ++i) {
    Eigen::Matrix3d m;
    int row = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      m.row(row++) << a[j], b[j], c[j];
    }
    // Cofactor along the last column of det(a, b, c, e_i).
    n[i] = ((i + 3) % 2 == 0 ? 1.0 : -1.0) * m.determinant();
  }
  return n.normalized();
}

inline double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  Eigen::Matrix4d m;
  m << a, b, c, d;
  return m.determinant();
}

struct FundamentalData {
  double E = 0.0;
  Vec4 sigma_uu;  // sigma(x_u, x_u)
  Vec4 sigma_uv;  // sigma(x_u, x_v)
  std::array<Vec4, 4> frame;  // X1, X2, n1, n2

  Vec4 sigma_vv() const { return -sigma_uu; }
  /// |sigma(X1, X1)|
  double nu() const { return (sigma_uu / E).norm(); }
  /// sigma(X1, X2) . n2
  double mu() const { return (sigma_uv / E).dot(frame[3]); }
  /// sigma(X1, X2) . n1; vanishes in canonical coordinates.
  double lambda() const { return (sigma_uv / E).dot(frame[2]); }
};

/// Second fundamental form from Phi'_perp: sigma(x_u,x_u) = Re Phi'_perp,
/// sigma(x_u,x_v) = -Im Phi'_perp. The frame takes n1 along sigma(X1,X1)
/// and n2 so that (X1, X2, n1, n2) is positively oriented.
inline FundamentalData fundamental_data(const PhiCurve& p, Complex t) {
  const CVec4 phi = p.value(t);
  if (phi.norm() <= kDegenerateNorm) throw Error(Errc::DegeneratePoint, "|Phi| vanishes");
  const CVec4 perp = normal_project(phi, p.derivative_value(t));

  FundamentalData fd;
  fd.E = 0.5 * phi.squaredNorm();
  fd.sigma_uu = perp.real();
  fd.sigma_uv = -perp.imag();

  const Vec4 xu = phi.real();
  const Vec4 xv = -phi.imag();
  fd.frame[0] = xu.normalized();
  fd.frame[1] = xv.normalized();
  const Vec4 s11 = fd.sigma_uu / fd.E;
  if (s11.norm() <= 1e-12 * std::max(1.0, (fd.sigma_uv / fd.E).norm()))
    throw Error(Errc::UmbilicLikeFrame, "sigma(X1, X1) vanishes; frame direction undefined");
  fd.frame[2] = s11.normalized();
  fd.frame[3] = complete_positive_basis(fd.frame[0], fd.frame[1], fd.frame[2]);
  return fd;
}

// ---------------------------------------------------------------------------
// Motions

struct Motion4 {
  Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
  Vec4 b = Vec4::Zero();

  void validate() const {
    if ((A.transpose() * A - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() > 1e-12 ||
        std::abs(A.determinant() - 1.0) > 1e-12)
      throw Error(Errc::NotOrthogonal, "motion matrix is not in SO(4)");
  }

  Vec4 apply(const Vec4& x) const { return A * x + b; }
};

/// Phi -> A Phi. The translation does not act on Phi.
inline PhiCurve apply_motion(const PhiCurve& p, const Motion4& m) {
  m.validate();
  PhiCurve out = p;
  const int n = p.order();
  for (int i = 0; i < 4; ++i) {
    TaylorSeries acc = TaylorSeries::constant(0.0, n, p.base()).with_radius(std::nullopt);
    for (int j = 0; j < 4; ++j) acc = acc + Complex(m.A(i, j)) * p.phi[j].truncated(n);
    out.phi[i] = acc;
  }
  check_phi(out);
  return out;
}

// ---------------------------------------------------------------------------
// Harmonicity

/// Max over interior nodes of |5-point Laplacian of x|.
inline double harmonic_residual(const SurfacePatch& patch) {
  if (patch.rows < 5 || patch.cols < 5) throw Error(Errc::GridTooSmall, "harmonic residual needs at least a 5x5 grid");
  const double h2 = patch.grid.h * patch.grid.h;
  double worst = 0.0;
  for (int r = 1; r + 1 < patch.rows; ++r) {
    for (int c = 1; c + 1 < patch.cols; ++c) {
      const Vec4 lap =
          (patch.at(r, c - 1) + patch.at(r, c + 1) + patch.at(r - 1, c) + patch.at(r + 1, c) - 4.0 * patch.at(r, c)) /
          h2;
      worst = std::max(worst, lap.norm());
    }
  }
  return worst;
}

}  // namespace weier4
