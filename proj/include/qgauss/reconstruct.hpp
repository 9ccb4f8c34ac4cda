#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qgauss/gaussmap.hpp"
#include "qgauss/quadric.hpp"
#include "qgauss/sphere.hpp"

namespace qgauss {

// A Lagrangian immersion into Q^n given through a lift z: box -> V^{2n+1}
// (split layout, 2(n+2) reals) that need not be horizontal.
struct LagrangianPatch {
  std::string name;
  int n = 0;
  Box domain;
  VectorMap lift;
  Vec<double> base_point;
};

// Lift e^{i s(p)} (a + i b)/sqrt 2 of the Gauss map of `patch`, where the
// optional scalar map s scrambles the gauge.
inline LagrangianPatch gauss_lagrangian(const HypersurfacePatch& patch, VectorMap scramble = {}) {
  auto base = std::make_shared<const HypersurfacePatch>(patch);
  LagrangianPatch out;
  out.name = patch.name;
  out.n = patch.n;
  out.domain = patch.domain;
  out.base_point = patch.domain.center();
  out.lift = VectorMap(patch.n, 2 * (patch.n + 2), [base, scramble](const auto& p) {
    using S = scalar_of<decltype(p)>;
    auto z = gauss_lift_split(*base, p);
    if (!scramble) return z;
    using std::cos;
    using std::sin;
    const S phase = scramble(p)[0];
    const S c = cos(phase), s = sin(phase);
    const std::size_t m = z.size() / 2;
    Vec<S> out(z.size());
    for (std::size_t k = 0; k < m; ++k) {
      out[k] = c * z[k] - s * z[k + m];
      out[k + m] = s * z[k] + c * z[k + m];
    }
    return out;
  });
  return out;
}

// Gauge scramble p -> coefficient * p_1 * (p_2 if n >= 2 else 1).
inline VectorMap product_scramble(int n, double coefficient) {
  return VectorMap(n, 1, [n, coefficient](const auto& p) {
    using S = scalar_of<decltype(p)>;
    return Vec<S>{n >= 2 ? coefficient * p[0] * p[1] : coefficient * p[0]};
  });
}

// The conic w -> (1 - w^2, i(1 + w^2), 2w, 0) / (sqrt 2 (1 + |w|^2)) with
// w = p1 + i p2: a complex curve in Q^2, so its connection form is not closed.
inline LagrangianPatch holomorphic_conic(double half_width = 0.8) {
  LagrangianPatch out;
  out.name = "holomorphic conic";
  out.n = 2;
  out.domain = Box{{-half_width, -half_width}, {half_width, half_width}};
  out.base_point = out.domain.center();
  out.lift = VectorMap(2, 8, [](const auto& p) {
    using S = scalar_of<decltype(p)>;
    const S x = p[0], y = p[1];
    const S r2 = x * x + y * y;
    const S scale = 1.0 / (std::sqrt(2.0) * (1.0 + r2));
    const S wre = x * x - y * y, wim = 2.0 * x * y;  // w^2
    return Vec<S>{(1.0 - wre) * scale, -wim * scale,       2.0 * x * scale, S(0.0),
                  -wim * scale,        (1.0 + wre) * scale, 2.0 * y * scale, S(0.0)};
  });
  return out;
}

// Connection form component omega(v) = Im herm(dz v, z) of a lift, evaluated
// on any scalar type.
template <class S>
S connection_form(const VectorMap& lift, const Vec<S>& p, const Vec<double>& v) {
  auto y = lift(seed_direction(p, v));
  const std::size_t m = y.size() / 2;
  S w(0.0);
  for (std::size_t k = 0; k < m; ++k) w += y[k + m].d * y[k].v - y[k].d * y[k + m].v;
  return w;
}

// Tensor grid with row-major flattening (last axis fastest).
struct Grid {
  std::vector<std::vector<double>> axes;

  static Grid uniform(const Box& box, int resolution) {
    if (resolution < 2) throw EmptyGrid("grid resolution must be at least 2");
    Grid g;
    for (int k = 0; k < box.dim(); ++k) {
      std::vector<double> ax(static_cast<std::size_t>(resolution));
      for (int i = 0; i < resolution; ++i)
        ax[i] = box.lo[k] + (box.hi[k] - box.lo[k]) * static_cast<double>(i) / (resolution - 1);
      g.axes.push_back(std::move(ax));
    }
    return g;
  }

  int dim() const { return static_cast<int>(axes.size()); }
  std::size_t extent(int k) const { return axes[k].size(); }

  std::size_t size() const {
    std::size_t s = 1;
    for (const auto& a : axes) s *= a.size();
    return axes.empty() ? 0 : s;
  }

  std::size_t stride(int k) const {
    std::size_t s = 1;
    for (int j = dim() - 1; j > k; --j) s *= axes[j].size();
    return s;
  }

  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(axes.size());
    for (int k = dim() - 1; k >= 0; --k) {
      idx[k] = flat % axes[k].size();
      flat /= axes[k].size();
    }
    return idx;
  }

  std::size_t flatten(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (int k = 0; k < dim(); ++k) flat = flat * axes[k].size() + idx[k];
    return flat;
  }

  Vec<double> point(std::size_t flat) const {
    auto idx = unflatten(flat);
    Vec<double> p(axes.size());
    for (int k = 0; k < dim(); ++k) p[k] = axes[k][idx[k]];
    return p;
  }

  std::size_t nearest(const Vec<double>& p) const {
    std::vector<std::size_t> idx(axes.size());
    for (int k = 0; k < dim(); ++k) {
      const auto& ax = axes[k];
      auto it = std::lower_bound(ax.begin(), ax.end(), p[k]);
      std::size_t i = static_cast<std::size_t>(it - ax.begin());
      if (i == ax.size()) i = ax.size() - 1;
      if (i > 0 && std::abs(ax[i - 1] - p[k]) <= std::abs(ax[i] - p[k])) --i;
      idx[k] = i;
    }
    return flatten(idx);
  }
};

namespace detail {

// Fornberg's algorithm: weights of the first derivative at x0 on `nodes`.
inline std::vector<double> fd_weights(double x0, const std::vector<double>& nodes) {
  const std::size_t m = nodes.size();
  std::vector<std::vector<double>> c(m, std::vector<double>(2, 0.0));
  double c1 = 1.0, c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < m; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = c[i][1];
  return w;
}

// Weights integrating the interpolant through `nodes` over [a, b].
inline std::vector<double> interval_weights(double a, double b, const std::vector<double>& nodes) {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  const double h = b - a;
  RMat V(m, m);
  RVec moments(m);
  for (Eigen::Index p = 0; p < m; ++p) {
    for (Eigen::Index k = 0; k < m; ++k) V(p, k) = std::pow((nodes[k] - a) / h, static_cast<double>(p));
    moments[p] = h / static_cast<double>(p + 1);
  }
  const RVec w = V.fullPivLu().solve(moments);
  return from_eigen(w);
}

struct Stencil {
  std::size_t start = 0;
  std::vector<double> weights;
};

// Stencils of `width` consecutive nodes, centered where the axis allows.
inline std::size_t stencil_start(std::size_t center, std::size_t width, std::size_t extent) {
  const std::size_t half = width / 2;
  std::size_t s = center > half ? center - half : 0;
  if (s + width > extent) s = extent - width;
  return s;
}

inline std::vector<Stencil> derivative_stencils(const std::vector<double>& axis, std::size_t width) {
  std::vector<Stencil> out(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    out[i].start = stencil_start(i, width, axis.size());
    std::vector<double> nodes(axis.begin() + static_cast<std::ptrdiff_t>(out[i].start),
                              axis.begin() + static_cast<std::ptrdiff_t>(out[i].start + width));
    out[i].weights = fd_weights(axis[i], nodes);
  }
  return out;
}

// One stencil per interval [x_i, x_{i+1}].
inline std::vector<Stencil> quadrature_stencils(const std::vector<double>& axis, std::size_t width) {
  std::vector<Stencil> out(axis.size() - 1);
  for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
    const std::size_t half = width / 2;
    std::size_t s = i + 1 > half ? i + 1 - half : 0;
    if (s + width > axis.size()) s = axis.size() - width;
    out[i].start = s;
    std::vector<double> nodes(axis.begin() + static_cast<std::ptrdiff_t>(s),
                              axis.begin() + static_cast<std::ptrdiff_t>(s + width));
    out[i].weights = interval_weights(axis[i], axis[i + 1], nodes);
  }
  return out;
}

}  // namespace detail

inline constexpr std::size_t kDerivativeStencil = 13;  // twelfth order
inline constexpr std::size_t kQuadratureStencil = 8;   // eighth order per interval

// Lift values and derivative columns at every grid node.
struct LiftSamples {
  Grid grid;
  std::vector<CVec> z;
  std::vector<std::vector<CVec>> dz;  // dz[node][axis]
  std::size_t base_index = 0;
  bool exact_derivatives = true;
};

inline LiftSamples sample_lift(const LagrangianPatch& patch, const Grid& grid) {
  LiftSamples s;
  s.grid = grid;
  s.base_index = grid.nearest(patch.base_point);
  s.z.resize(grid.size());
  s.dz.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto [value, cols] = jet1(patch.lift, grid.point(i));
    s.z[i] = cvec_from_split(value);
    for (const auto& c : cols) s.dz[i].push_back(cvec_from_split(c));
  }
  return s;
}

// Lift samples from values only; derivatives by eighth-order finite
// differences along each axis.
inline LiftSamples lift_samples_from_values(const Grid& grid, std::vector<CVec> values, std::size_t base_index) {
  if (values.size() != grid.size()) throw InvalidParameter("lift sample count does not match the grid");
  for (int k = 0; k < grid.dim(); ++k)
    if (grid.extent(k) < kDerivativeStencil)
      throw EmptyGrid("each grid axis needs at least " + std::to_string(kDerivativeStencil) + " nodes");
  if (base_index >= grid.size()) throw InvalidParameter("base point index outside the grid");
  LiftSamples s;
  s.grid = grid;
  s.base_index = base_index;
  s.z = std::move(values);
  s.exact_derivatives = false;
  s.dz.assign(grid.size(), std::vector<CVec>(static_cast<std::size_t>(grid.dim())));
  for (int k = 0; k < grid.dim(); ++k) {
    const auto st = detail::derivative_stencils(grid.axes[k], kDerivativeStencil);
    const std::size_t stride = grid.stride(k);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto idx = grid.unflatten(i);
      const auto& sk = st[idx[k]];
      const std::size_t first = i - idx[k] * stride + sk.start * stride;
      CVec d = CVec::Zero(s.z[i].size());
      for (std::size_t m = 0; m < sk.weights.size(); ++m) d += sk.weights[m] * s.z[first + m * stride];
      s.dz[i][k] = std::move(d);
    }
  }
  return s;
}

struct HorizontalizationResult {
  LiftSamples samples;
  std::vector<double> phi;               // gauge at every node, phi(base) = 0
  std::vector<CVec> lift0;               // e^{i phi} z
  std::vector<std::vector<CVec>> dlift0; // horizontal derivative columns of lift0
  double loop_residual = 0.0;            // max |loop integral of omega|
  double horizontality_residual = 0.0;   // max |d phi + omega| with d phi from the grid values
};

struct HorizontalizeOptions {
  int loops = 20;
  double loop_tol = 1e-6;
  std::uint64_t seed = 0;
};

// Integrates d phi = -omega along axis-aligned polylines from the base node
// (axis 0 first) with an eighth-order node quadrature, then certifies path
// independence on random grid rectangles.
inline HorizontalizationResult horizontalize(LiftSamples samples, const HorizontalizeOptions& opt = {}) {
  const Grid& grid = samples.grid;
  const int n = grid.dim();
  const std::size_t N = grid.size();
  if (N == 0) throw EmptyGrid("empty grid");
  for (int k = 0; k < n; ++k)
    if (grid.extent(k) < kQuadratureStencil)
      throw EmptyGrid("each grid axis needs at least " + std::to_string(kQuadratureStencil) + " nodes");

  // omega[node][axis]
  std::vector<std::vector<double>> omega(N, std::vector<double>(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < N; ++i)
    for (int k = 0; k < n; ++k) omega[i][k] = herm(samples.dz[i][k], samples.z[i]).imag();

  std::vector<std::vector<detail::Stencil>> quad(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) quad[k] = detail::quadrature_stencils(grid.axes[k], kQuadratureStencil);

  // Integral of omega_k over interval [i, i+1] of the axis-k line through `line_node`.
  auto interval = [&](int k, std::size_t line_node, std::size_t i) {
    const std::size_t stride = grid.stride(k);
    const auto idx = grid.unflatten(line_node);
    const std::size_t origin = line_node - idx[k] * stride;
    const auto& st = quad[k][i];
    double s = 0.0;
    for (std::size_t m = 0; m < st.weights.size(); ++m) s += st.weights[m] * omega[origin + (st.start + m) * stride][k];
    return s;
  };
  // Integral along the axis-k line through `line_node` from index i0 to i1.
  auto along = [&](int k, std::size_t line_node, std::size_t i0, std::size_t i1) {
    double s = 0.0;
    if (i1 >= i0) {
      for (std::size_t i = i0; i < i1; ++i) s += interval(k, line_node, i);
    } else {
      for (std::size_t i = i1; i < i0; ++i) s -= interval(k, line_node, i);
    }
    return s;
  };

  const auto base = grid.unflatten(samples.base_index);
  HorizontalizationResult out;
  out.phi.assign(N, 0.0);
  // Cumulative integrals per axis line, keyed by the flat index of the line's
  // node at the base coordinate.
  std::vector<std::vector<double>> cumulative(static_cast<std::size_t>(n), std::vector<double>(N, 0.0));
  for (int k = 0; k < n; ++k) {
    const std::size_t stride = grid.stride(k);
    for (std::size_t i = 0; i < N; ++i) {
      const auto idx = grid.unflatten(i);
      if (idx[k] != base[k]) continue;
      const std::size_t origin = i - idx[k] * stride;
      auto& cum = cumulative[k];
      cum[i] = 0.0;
      for (std::size_t j = base[k] + 1; j < grid.extent(k); ++j)
        cum[origin + j * stride] = cum[origin + (j - 1) * stride] + interval(k, i, j - 1);
      for (std::size_t j = base[k]; j-- > 0;)
        cum[origin + j * stride] = cum[origin + (j + 1) * stride] - interval(k, i, j);
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    const auto idx = grid.unflatten(i);
    double total = 0.0;
    std::vector<std::size_t> corner = base;
    for (int k = 0; k < n; ++k) {
      corner[k] = idx[k];
      total += cumulative[k][grid.flatten(corner)];
    }
    out.phi[i] = -total;
  }

  SplitRng rng = SplitRng(opt.seed).split(0x100b);
  for (int l = 0; l < opt.loops && n >= 2; ++l) {
    const int k = static_cast<int>(rng.engine()() % static_cast<std::uint64_t>(n));
    int m = static_cast<int>(rng.engine()() % static_cast<std::uint64_t>(n - 1));
    if (m >= k) ++m;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) idx[a] = rng.engine()() % grid.extent(a);
    auto pick_pair = [&](int axis) {
      const std::size_t ext = grid.extent(axis);
      std::size_t i0 = rng.engine()() % ext, i1 = rng.engine()() % ext;
      while (i1 == i0) i1 = rng.engine()() % ext;
      return std::pair{std::min(i0, i1), std::max(i0, i1)};
    };
    const auto [k0, k1] = pick_pair(k);
    const auto [m0, m1] = pick_pair(m);
    auto node = [&](std::size_t ik, std::size_t im) {
      auto c = idx;
      c[k] = ik;
      c[m] = im;
      return grid.flatten(c);
    };
    const double loop = along(k, node(k0, m0), k0, k1) + along(m, node(k1, m0), m0, m1) +
                        along(k, node(k1, m1), k1, k0) + along(m, node(k0, m1), m1, m0);
    out.loop_residual = std::max(out.loop_residual, std::abs(loop));
  }
  if (out.loop_residual > opt.loop_tol)
    throw NotLagrangian("not Lagrangian or under-resolved: loop integral " + std::to_string(out.loop_residual));

  for (int k = 0; k < n && grid.extent(k) >= kDerivativeStencil; ++k) {
    const auto st = detail::derivative_stencils(grid.axes[k], kDerivativeStencil);
    const std::size_t stride = grid.stride(k);
    for (std::size_t i = 0; i < N; ++i) {
      const auto idx = grid.unflatten(i);
      const auto& sk = st[idx[k]];
      const std::size_t first = i - idx[k] * stride + sk.start * stride;
      double dphi = 0.0;
      for (std::size_t q = 0; q < sk.weights.size(); ++q) dphi += sk.weights[q] * out.phi[first + q * stride];
      out.horizontality_residual = std::max(out.horizontality_residual, std::abs(dphi + omega[i][k]));
    }
  }

  out.lift0.resize(N);
  out.dlift0.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Complex gauge = std::exp(kI * out.phi[i]);
    out.lift0[i] = gauge * samples.z[i];
    for (int k = 0; k < n; ++k) {
      const CVec& d = samples.dz[i][k];
      out.dlift0[i].push_back(gauge * (d - herm(d, samples.z[i]) * samples.z[i]));
    }
  }
  out.samples = std::move(samples);
  return out;
}

inline HorizontalizationResult horizontalize(const LagrangianPatch& patch, int resolution,
                                             const HorizontalizeOptions& opt = {}) {
  return horizontalize(sample_lift(patch, Grid::uniform(patch.domain, resolution)), opt);
}

// Lift family e^{it} f0 of a horizontal lift.
inline CVec lift_family(const CVec& lift0, double t) { return std::exp(kI * t) * lift0; }

// (a_t, b_t) = sqrt 2 (Re, Im) of a horizontal lift.
inline std::pair<Vec<double>, Vec<double>> split_lift(const CVec& lift) {
  const double r = std::sqrt(2.0);
  return {from_eigen(r * lift.real()), from_eigen(r * lift.imag())};
}

struct LiftAngles {
  std::vector<double> thetas;
  RMat frame;  // chart-coordinate columns
  double residual = 0.0;
};

// Angle functions of a horizontal lift with derivative columns F, for the
// structure of gauge phi built from this lift.  The adapted frame
// simultaneously diagonalizes Re(F^T F) and Im(F^T F) against Re(F^* F).
inline LiftAngles lift_angles(const std::vector<CVec>& F, double phi = 0.0) {
  const auto n = static_cast<Eigen::Index>(F.size());
  RMat G(n, n);
  CMat B(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      G(j, k) = re_inner(F[j], F[k]);
      B(j, k) = bil(F[j], F[k]);
    }
  SymEigResult best;
  double best_gap = -1.0;
  for (double kappa : {0.0, 0.6180339887, -1.3247179572, 2.7182818285}) {
    const RMat C = B.real() + kappa * B.imag();
    auto eig = generalized_sym_eig(C, G);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < eig.eigenvalues.size(); ++j)
      gap = std::min(gap, eig.eigenvalues[j - 1] - eig.eigenvalues[j]);
    if (gap > best_gap + 1e-12) {
      best_gap = gap;
      best = std::move(eig);
    }
  }
  LiftAngles out;
  out.frame = best.eigenvectors;
  for (Eigen::Index j = 0; j < n; ++j) {
    CVec w = CVec::Zero(F[0].size());
    for (Eigen::Index k = 0; k < n; ++k) w += out.frame(k, j) * F[k];
    const CVec Aw = -std::exp(kI * phi) * w.conjugate();
    const auto d = decompose_angle(Aw, w);
    out.thetas.push_back(d.theta);
    out.residual = std::max(out.residual, d.residual);
  }
  return out;
}

// min over nodes and j of dist(theta_j + t, pi Z).
inline double parameter_margin(const std::vector<std::vector<double>>& thetas, double t) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& th : thetas)
    for (double v : th) m = std::min(m, distance_to_pi_multiple(v + t));
  return m;
}

struct TChoice {
  double t = 0.0;
  double margin = 0.0;
};

inline constexpr int kTScan = 360;

// Scans kTScan values of t in [0, pi) and refines the best once by
// golden-section search on the neighbouring bracket.
inline TChoice choose_t(const std::vector<std::vector<double>>& thetas) {
  if (thetas.empty()) throw EmptyGrid("choose_t: empty grid");
  const double pi = std::numbers::pi;
  TChoice best{0.0, -1.0};
  for (int i = 0; i < kTScan; ++i) {
    const double t = pi * i / kTScan;
    const double m = parameter_margin(thetas, t);
    if (m > best.margin) best = {t, m};
  }
  const double step = pi / kTScan;
  double lo = best.t - step, hi = best.t + step;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = parameter_margin(thetas, x1), f2 = parameter_margin(thetas, x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = parameter_margin(thetas, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = parameter_margin(thetas, x1);
    }
  }
  const double tr = 0.5 * (lo + hi);
  const double mr = parameter_margin(thetas, tr);
  if (mr > best.margin + 1e-15) best = {std::fmod(tr + pi, pi), mr};
  return best;
}

inline constexpr double kDegenerateMargin = 1e-3;

struct ReconstructedSurface {
  double t = 0.0;
  double margin = 0.0;                // parameter margin of t on the grid
  std::vector<Vec<double>> a, b;      // a_t, b_t at every node
  double min_immersion = 0.0;         // smallest immersion margin on the grid
  double normal_residual = 0.0;       // |b_t - geometric normal of a_t|
  double projector_fidelity = 0.0;    // max distance of [a_t + i b] to the input [z]
};

struct Reconstruction {
  HorizontalizationResult horizontal;
  std::vector<std::vector<double>> thetas;  // theta^{(0)} per node
  double angle_residual = 0.0;
  TChoice auto_choice;
  std::vector<ReconstructedSurface> surfaces;
};

// Builds the hypersurface a_t = sqrt 2 Re(e^{it} f0) on the grid and checks
// that it is an immersion whose Gauss map is the input.
inline ReconstructedSurface build_surface(const HorizontalizationResult& h,
                                          const std::vector<std::vector<double>>& thetas, double t) {
  const Grid& grid = h.samples.grid;
  const int n = grid.dim();
  ReconstructedSurface s;
  s.t = t;
  s.margin = parameter_margin(thetas, t);
  s.min_immersion = std::numeric_limits<double>::infinity();
  const Complex phase = std::exp(kI * t);
  const double r2 = std::sqrt(2.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CVec f = phase * h.lift0[i];
    auto [a, b] = split_lift(f);
    Columns<double> da;
    RMat ref(n, n);
    for (int j = 0; j < n; ++j) {
      da.push_back(from_eigen(r2 * (phase * h.dlift0[i][j]).real()));
      for (int k = 0; k < n; ++k) ref(j, k) = 2.0 * re_inner(h.dlift0[i][j], h.dlift0[i][k]);
    }
    const RMat D = columns_matrix(da);
    const auto eig = generalized_sym_eig(D.transpose() * D, ref);
    s.min_immersion = std::min(s.min_immersion, std::sqrt(std::max(0.0, eig.eigenvalues.back())));

    Vec<double> bg;
    try {
      bg = normal_from_frame(a, da);
    } catch (const NotAnImmersion&) {
      s.min_immersion = 0.0;
      bg = b;
    }
    if (dot(bg, b) < 0) bg = scaled(bg, -1.0);
    double nr = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) nr = std::max(nr, std::abs(bg[k] - b[k]));
    s.normal_residual = std::max(s.normal_residual, nr);
    const CVec zg = make_cvec(to_eigen(a), to_eigen(bg)) / r2;
    const CMat Pg = zg * zg.adjoint() / zg.squaredNorm();
    const CVec& zin = h.samples.z[i];
    const CMat Pin = zin * zin.adjoint() / zin.squaredNorm();
    s.projector_fidelity = std::max(s.projector_fidelity, (Pg - Pin).norm());
    s.a.push_back(std::move(a));
    s.b.push_back(std::move(b));
  }
  return s;
}

struct ReconstructOptions {
  HorizontalizeOptions horizontalize;
  std::vector<double> ts;  // empty: AUTO
  double degenerate_margin = kDegenerateMargin;
};

inline Reconstruction reconstruct(LiftSamples samples, const ReconstructOptions& opt = {}) {
  Reconstruction rec;
  rec.horizontal = horizontalize(std::move(samples), opt.horizontalize);
  const auto& h = rec.horizontal;
  rec.thetas.reserve(h.lift0.size());
  for (std::size_t i = 0; i < h.lift0.size(); ++i) {
    auto la = lift_angles(h.dlift0[i]);
    rec.angle_residual = std::max(rec.angle_residual, la.residual);
    rec.thetas.push_back(std::move(la.thetas));
  }
  rec.auto_choice = choose_t(rec.thetas);
  std::vector<double> ts = opt.ts;
  if (ts.empty()) ts.push_back(rec.auto_choice.t);
  for (double t : ts) {
    const double m = parameter_margin(rec.thetas, t);
    if (m < opt.degenerate_margin)
      throw DegenerateParameter("degenerate parameter t = " + std::to_string(t) + " (margin " + std::to_string(m) +
                                "); use AUTO");
    auto s = build_surface(h, rec.thetas, t);
    if (!(s.min_immersion > kImmersionThreshold))
      throw NotAnImmersion("reconstructed hypersurface is not an immersion on the grid");
    rec.surfaces.push_back(std::move(s));
  }
  return rec;
}

// Chart-level hypersurface a_t = sqrt 2 Re(e^{i(t + phi)} z) for an analytic
// Lagrangian patch.  Away from grid nodes phi is continued from the nearest
// node by integrating -omega along an axis-aligned polyline, so the map can
// be differentiated with dual numbers.
inline HypersurfacePatch reconstructed_patch(const LagrangianPatch& patch, const HorizontalizationResult& h, double t) {
  struct State {
    LagrangianPatch patch;
    Grid grid;
    std::vector<double> phi;
    double t;
  };
  auto st = std::make_shared<const State>(State{patch, h.samples.grid, h.phi, t});
  auto phase = [st](const auto& p) {
    using S = scalar_of<decltype(p)>;
    const int n = st->patch.n;
    Vec<double> pv(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) pv[k] = value_of(p[k]);
    const std::size_t q = st->grid.nearest(pv);
    const Vec<double> qp = st->grid.point(q);
    S phi(st->phi[q]);
    // Three-point Gauss-Legendre on each segment.
    static constexpr double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    Vec<S> x(p.size());
    for (int k = 0; k < n; ++k) x[k] = S(qp[k]);
    for (int k = 0; k < n; ++k) {
      const S a(qp[k]);
      const S b = p[k];
      const S half = 0.5 * (b - a), mid = 0.5 * (a + b);
      const auto e = unit_vector(n, k);
      for (int g = 0; g < 3; ++g) {
        x[k] = mid + nodes[g] * half;
        phi -= weights[g] * half * connection_form(st->patch.lift, x, e);
      }
      x[k] = b;
    }
    return phi;
  };
  auto sheet = [st, phase](const auto& p, bool normal_part) {
    using S = scalar_of<decltype(p)>;
    using std::cos;
    using std::sin;
    const auto z = st->patch.lift(p);
    const S ang = phase(p) + st->t;
    const S c = cos(ang), s = sin(ang);
    const std::size_t m = z.size() / 2;
    const double r2 = std::sqrt(2.0);
    Vec<S> out(m);
    for (std::size_t k = 0; k < m; ++k)
      out[k] = normal_part ? r2 * (s * z[k] + c * z[k + m]) : r2 * (c * z[k] - s * z[k + m]);
    return out;
  };
  HypersurfacePatch out;
  out.name = patch.name + " (parallel hypersurface)";
  out.n = patch.n;
  out.domain = patch.domain;
  out.map = VectorMap(patch.n, patch.n + 2, [sheet](const auto& p) { return sheet(p, false); });
  out.normal = VectorMap(patch.n, patch.n + 2, [sheet](const auto& p) { return sheet(p, true); });
  out.reference_metric = [st](const Vec<double>& p) {
    auto [value, cols] = jet1(st->patch.lift, p);
    const CVec z = cvec_from_split(value);
    const auto n = static_cast<Eigen::Index>(cols.size());
    std::vector<CVec> F;
    for (const auto& c : cols) {
      const CVec d = cvec_from_split(c);
      F.push_back(d - herm(d, z) * z);
    }
    RMat ref(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) ref(j, k) = 2.0 * re_inner(F[j], F[k]);
    return ref;
  };
  return out;
}

// Full analytic pipeline: horizontalize on a grid, pick t (AUTO when
// `t` is empty), and return the chart-level hypersurface.
struct AnalyticReconstruction {
  Reconstruction grid;
  HypersurfacePatch surface;
};

inline AnalyticReconstruction reconstruct_hypersurface(const LagrangianPatch& patch, std::optional<double> t,
                                                       int resolution = 33, HorizontalizeOptions hopt = {}) {
  ReconstructOptions opt;
  opt.horizontalize = hopt;
  if (t) opt.ts = {*t};
  AnalyticReconstruction out;
  out.grid = reconstruct(sample_lift(patch, Grid::uniform(patch.domain, resolution)), opt);
  out.surface = reconstructed_patch(patch, out.grid.horizontal, out.grid.surfaces.front().t);
  return out;
}

struct SweepRecord {
  double t = 0.0;
  bool degenerate = false;
  double margin = 0.0;
  std::vector<double> lambdas;           // along the base principal frame
  std::vector<double> expected_lambdas;  // cot(theta0 + t)
  std::vector<double> thetas;            // theta^{(t)} along the base frame
  double curvature_residual = 0.0;       // |lambda^{(t)} - cot(theta0 + t)|
  double angle_residual = 0.0;           // dist(theta^{(t)} - theta0 - t, pi Z)
  double frame_residual = 0.0;           // off-diagonal second form in the base frame
  double projector_distance = 0.0;       // Gauss map of a_t vs a
};

// Curvatures and angles of the parallel hypersurfaces a_t at one point,
// compared with cot(theta0 + t) and theta0 + t.
inline std::vector<SweepRecord> parallel_sweep(const HypersurfacePatch& patch, const Vec<double>& p,
                                               const std::vector<double>& ts, DiffScheme scheme = DiffScheme::dual,
                                               double degenerate_margin = kDegenerateMargin) {
  const auto pd = principal_data(patch, p, scheme);
  const auto base = angle_spectrum(patch, pd, 0.0, scheme);
  const auto G0 = gauss_map(patch, p, scheme);
  std::vector<SweepRecord> out;
  for (double t : ts) {
    SweepRecord r;
    r.t = t;
    r.margin = std::numeric_limits<double>::infinity();
    for (double th : base.thetas) r.margin = std::min(r.margin, distance_to_pi_multiple(th + t));
    const auto at = parallel_patch(patch, t);
    r.projector_distance = projector_distance(G0, gauss_map(at, p, scheme));
    if (r.margin < degenerate_margin) {
      r.degenerate = true;
      out.push_back(std::move(r));
      continue;
    }
    const auto pt = principal_data(at, p, scheme);
    const auto ang = angles_along(at, p, pd.directions, 0.0, scheme);
    for (int j = 0; j < patch.n; ++j) {
      const RVec e = pd.directions.col(j);
      const double lam = e.dot(pt.second_form * e) / e.dot(pt.metric * e);
      const double expect = checked_cot(base.thetas[j] + t);
      r.lambdas.push_back(lam);
      r.expected_lambdas.push_back(expect);
      r.thetas.push_back(ang.thetas[j]);
      r.curvature_residual = std::max(r.curvature_residual, std::abs(lam - expect));
      r.angle_residual = std::max(r.angle_residual, distance_to_pi_multiple(ang.thetas[j] - base.thetas[j] - t));
      for (int k = 0; k < patch.n; ++k) {
        if (k == j) continue;
        const RVec f = pd.directions.col(k);
        r.frame_residual = std::max(r.frame_residual, std::abs(f.dot(pt.second_form * e)));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Largest |lambda^{(t)}_j - cot(theta0_j + t)| over a sweep; throws when a
// requested t is degenerate.
inline double parallel_curvature_law(const HypersurfacePatch& patch, const Vec<double>& p,
                                     const std::vector<double>& ts, DiffScheme scheme = DiffScheme::dual) {
  double worst = 0.0;
  for (const auto& r : parallel_sweep(patch, p, ts, scheme)) {
    if (r.degenerate) throw DegenerateParameter("degenerate t = " + std::to_string(r.t) + " in sweep");
    worst = std::max({worst, r.curvature_residual, r.angle_residual});
  }
  return worst;
}

}  // namespace qgauss
