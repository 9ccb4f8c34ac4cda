#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>

#include "qgauss/chart.hpp"
#include "qgauss/linalg.hpp"

namespace qgauss {

// A chart a: box in R^n -> S^{n+1}(1) in R^{n+2}.  The unit normal is either
// derived from the chart (Gram-Schmidt completion with a determinant sign
// convention) or supplied explicitly, as for parallel and reconstructed
// hypersurfaces whose normal is part of their definition.
struct HypersurfacePatch {
  std::string name;
  int n = 0;
  Box domain;
  VectorMap map;
  VectorMap normal;  // optional
  bool flip = false;
  // Metric used to normalize immersion_margin; identity when empty.
  std::function<RMat(const Vec<double>&)> reference_metric;

  int ambient_dim() const { return n + 2; }
};

template <class P>
using scalar_of = typename std::decay_t<P>::value_type;

// Unit vector orthogonal to the columns of `da` and to `a`, oriented so that
// det[da_1, ..., da_n, a, b] > 0.
template <class S>
Vec<S> normal_from_frame(const Vec<S>& a, const Columns<S>& da) {
  const std::size_t m = a.size();
  std::vector<Vec<S>> q;
  q.reserve(da.size() + 1);
  auto push = [&](const Vec<S>& v) {
    Vec<S> w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& qi : q) axpy(w, S(-1.0) * dot(qi, w), qi);
    S nw = norm(w);
    if (!(value_of(nw) > 1e-10 * std::max(value_of(norm(v)), 1e-300)))
      throw NotAnImmersion("chart jacobian is rank deficient");
    q.push_back(scaled(w, S(1.0) / nw));
  };
  for (const auto& c : da) push(c);
  push(a);

  std::size_t best = 0;
  double best_res = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    double r = 1.0;
    for (const auto& qi : q) r -= value_of(qi[k]) * value_of(qi[k]);
    if (r > best_res) {
      best_res = r;
      best = k;
    }
  }
  Vec<S> b(m, S(0.0));
  b[best] = S(1.0);
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& qi : q) axpy(b, S(-1.0) * dot(qi, b), qi);
  b = scaled(b, S(1.0) / norm(b));

  RMat M(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < da.size(); ++j)
    for (std::size_t k = 0; k < m; ++k) M(k, j) = value_of(da[j][k]);
  for (std::size_t k = 0; k < m; ++k) {
    M(k, da.size()) = value_of(a[k]);
    M(k, da.size() + 1) = value_of(b[k]);
  }
  if (determinant(M) < 0) b = scaled(b, S(-1.0));
  return b;
}

template <class S>
Vec<S> unit_normal(const HypersurfacePatch& patch, const Vec<S>& p) {
  Vec<S> b;
  if (patch.normal) {
    b = patch.normal(p);
  } else {
    auto [a, da] = jet1(patch.map, p);
    b = normal_from_frame(a, da);
  }
  if (patch.flip) b = scaled(b, S(-1.0));
  return b;
}

inline Vec<double> unit_normal(const HypersurfacePatch& patch, const Vec<double>& p, DiffScheme scheme) {
  if (scheme == DiffScheme::dual || patch.normal) return unit_normal<double>(patch, p);
  auto J = jacobian(patch.map, p, DiffScheme::fd);
  auto b = normal_from_frame(J.value, J.columns);
  if (patch.flip) b = scaled(b, -1.0);
  return b;
}

// Derivative columns of the unit normal.
inline Columns<double> normal_jacobian(const HypersurfacePatch& patch, const Vec<double>& p, DiffScheme scheme) {
  if (scheme == DiffScheme::dual) {
    auto f = [&patch](const auto& q) { return unit_normal(patch, q); };
    return jet1(f, p).second;
  }
  Columns<double> cols(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double h = fd_step2(p[j]);
    Vec<double> pp = p, pm = p;
    pp[j] += h;
    pm[j] -= h;
    auto bp = unit_normal(patch, pp, scheme);
    auto bm = unit_normal(patch, pm, scheme);
    cols[j].resize(bp.size());
    for (std::size_t k = 0; k < bp.size(); ++k) cols[j][k] = (bp[k] - bm[k]) / (pp[j] - pm[j]);
  }
  return cols;
}

struct PrincipalData {
  Vec<double> point;
  Vec<double> a;
  Vec<double> b;
  Columns<double> da;
  RMat metric;           // first fundamental form
  RMat second_form;      // <d_j d_k a, b>
  RMat second_form_alt;  // -<d_j b, d_k a>
  double form_discrepancy = 0.0;
  std::vector<double> lambdas;          // descending
  RMat directions;                      // chart-coordinate columns, metric-orthonormal
  Columns<double> ambient_directions;   // da * e_j, unit vectors in R^{n+2}
};

inline PrincipalData principal_data(const HypersurfacePatch& patch, const Vec<double>& p,
                                    DiffScheme scheme = DiffScheme::dual) {
  PrincipalData out;
  out.point = p;
  const int n = patch.n;
  auto J = jacobian(patch.map, p, scheme);
  out.a = J.value;
  out.da = J.columns;
  out.b = unit_normal(patch, p, scheme);
  auto H = hessian(patch.map, p, scheme);
  auto db = normal_jacobian(patch, p, scheme);

  out.metric.resize(n, n);
  out.second_form.resize(n, n);
  out.second_form_alt.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      out.metric(j, k) = dot(out.da[j], out.da[k]);
      out.second_form(j, k) = dot(H[j][k], out.b);
      out.second_form_alt(j, k) = -dot(db[j], out.da[k]);
    }
  }
  out.form_discrepancy = (out.second_form - out.second_form_alt).cwiseAbs().maxCoeff();

  SymEigResult eig;
  try {
    eig = generalized_sym_eig(out.second_form, out.metric);
  } catch (const DegenerateMetric& e) {
    throw NotAnImmersion(std::string("degenerate first fundamental form: ") + e.what());
  }
  out.lambdas = eig.eigenvalues;
  out.directions = eig.eigenvectors;
  const RMat Da = columns_matrix(out.da);
  for (int j = 0; j < n; ++j) out.ambient_directions.push_back(from_eigen(Da * out.directions.col(j)));
  return out;
}

// Member of the parallel family sharing the Gauss map of `patch`, with the
// parameter chosen so that its canonical Gauss lift is e^{it} times the lift
// of `patch`:
//   a_t = cos t a - sin t b,   b_t = sin t a + cos t b.
// This family coincides with p -> cos(s) a + sin(s) b at s = -t.
inline HypersurfacePatch parallel_patch(const HypersurfacePatch& patch, double t) {
  auto base = std::make_shared<const HypersurfacePatch>(patch);
  const double c = std::cos(t), s = std::sin(t);
  HypersurfacePatch out;
  out.name = patch.name;
  out.n = patch.n;
  out.domain = patch.domain;
  out.map = VectorMap(patch.n, patch.n + 2, [base, c, s](const auto& p) {
    using S = scalar_of<decltype(p)>;
    auto a = base->map(p);
    auto b = unit_normal(*base, p);
    Vec<S> y(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) y[k] = c * a[k] - s * b[k];
    return y;
  });
  out.normal = VectorMap(patch.n, patch.n + 2, [base, c, s](const auto& p) {
    using S = scalar_of<decltype(p)>;
    auto a = base->map(p);
    auto b = unit_normal(*base, p);
    Vec<S> y(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) y[k] = s * a[k] + c * b[k];
    return y;
  });
  if (patch.reference_metric) {
    out.reference_metric = patch.reference_metric;
  } else {
    out.reference_metric = [base](const Vec<double>& p) {
      const RMat D = columns_matrix(jacobian(base->map, p).columns);
      return RMat(D.transpose() * D);
    };
  }
  return out;
}

// Smallest singular value of the chart jacobian measured against the
// reference metric (identity when the patch has none).  Zero means the chart
// is not an immersion at p.
inline double immersion_margin(const HypersurfacePatch& patch, const Vec<double>& p,
                               DiffScheme scheme = DiffScheme::dual) {
  const RMat D = columns_matrix(jacobian(patch.map, p, scheme).columns);
  const RMat JtJ = D.transpose() * D;
  const RMat ref = patch.reference_metric ? patch.reference_metric(p) : RMat::Identity(patch.n, patch.n);
  auto eig = generalized_sym_eig(JtJ, ref);
  return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

inline constexpr double kImmersionThreshold = 1e-8;

}  // namespace qgauss
