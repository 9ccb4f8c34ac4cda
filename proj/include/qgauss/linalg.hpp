#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "qgauss/chart.hpp"
#include "qgauss/errors.hpp"

namespace qgauss {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// --- templated real vector helpers (usable on dual numbers) ---------------

template <class S>
S dot(const Vec<S>& x, const Vec<S>& y) {
  S s(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

template <class S>
S norm(const Vec<S>& x) {
  using std::sqrt;
  return sqrt(dot(x, x));
}

template <class S>
void axpy(Vec<S>& y, const S& alpha, const Vec<S>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

template <class S>
Vec<S> scaled(const Vec<S>& x, const S& alpha) {
  Vec<S> y(x);
  for (auto& v : y) v = v * alpha;
  return y;
}

inline RVec to_eigen(const Vec<double>& v) { return Eigen::Map<const RVec>(v.data(), static_cast<Eigen::Index>(v.size())); }
inline Vec<double> from_eigen(const RVec& v) { return {v.data(), v.data() + v.size()}; }

// Columns as an (m x n) matrix.
inline RMat columns_matrix(const Columns<double>& cols) {
  const auto n = static_cast<Eigen::Index>(cols.size());
  const auto m = n == 0 ? 0 : static_cast<Eigen::Index>(cols[0].size());
  RMat out(m, n);
  for (Eigen::Index j = 0; j < n; ++j) out.col(j) = to_eigen(cols[j]);
  return out;
}

// --- complex inner products on C^{n+2} -----------------------------------

// Hermitian product, linear in w: sum_k w_k conj(z_k).
inline Complex herm(const CVec& w, const CVec& z) { return z.dot(w); }

// Complex bilinear product: sum_k w_k z_k.
inline Complex bil(const CVec& w, const CVec& z) { return (w.array() * z.array()).sum(); }

// Real part of herm; the Euclidean product on R^{2n+4}.
inline double re_inner(const CVec& w, const CVec& z) { return herm(w, z).real(); }

inline CVec make_cvec(const RVec& re, const RVec& im) { return re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>(); }

// Layout shared by lift maps: first n+2 entries real parts, then imaginary parts.
inline CVec cvec_from_split(const Vec<double>& split) {
  const auto m = static_cast<Eigen::Index>(split.size() / 2);
  CVec z(m);
  for (Eigen::Index k = 0; k < m; ++k) z[k] = Complex(split[k], split[k + m]);
  return z;
}

inline Vec<double> split_from_cvec(const CVec& z) {
  Vec<double> out(static_cast<std::size_t>(2 * z.size()));
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    out[k] = z[k].real();
    out[k + z.size()] = z[k].imag();
  }
  return out;
}

// --- generalized symmetric eigenproblem -----------------------------------

struct SymEigResult {
  std::vector<double> eigenvalues;  // descending
  RMat eigenvectors;                // columns, G-orthonormal
};

namespace detail {

// First component with |v_i| above the threshold made positive.
inline void fix_sign(Eigen::Ref<RVec> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-10 * scale) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

inline bool lex_greater(const RVec& a, const RVec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-12) return a[i] > b[i];
  }
  return false;
}

// Replace a basis of an eigenspace with the G-orthonormalized projections of
// the standard basis vectors, which does not depend on how the solver
// happened to pick the basis.
inline RMat canonical_cluster_basis(const RMat& V, const RMat& G) {
  const Eigen::Index n = V.rows();
  const Eigen::Index k = V.cols();
  const RMat P = V * V.transpose() * G;  // G-orthogonal projector onto span(V)
  RMat out(n, k);
  Eigen::Index filled = 0;
  for (Eigen::Index i = 0; i < n && filled < k; ++i) {
    RVec c = P.col(i);
    for (Eigen::Index m = 0; m < filled; ++m) c -= (out.col(m).dot(G * c)) * out.col(m);
    const double nn = std::sqrt(std::max(0.0, c.dot(G * c)));
    if (nn > 1e-6) out.col(filled++) = c / nn;
  }
  if (filled < k) return V;
  return out;
}

}  // namespace detail

// Solves S v = lambda G v for symmetric S and SPD G.  Eigenvalues come out
// descending; within a numerically repeated eigenvalue the basis is made
// canonical, then each vector gets the sign convention "first nonzero
// component positive" and ties are ordered lexicographically descending.
inline SymEigResult generalized_sym_eig(const RMat& S, const RMat& G, double metric_floor = 1e-13) {
  const Eigen::Index n = S.rows();
  if (S.cols() != n || G.rows() != n || G.cols() != n) throw InvalidParameter("generalized_sym_eig: shape mismatch");
  SymEigResult out;
  if (n == 0) return out;

  Eigen::SelfAdjointEigenSolver<RMat> gsolve(G, Eigen::EigenvaluesOnly);
  const double gmax = gsolve.eigenvalues().cwiseAbs().maxCoeff();
  if (!(gsolve.eigenvalues()[0] > metric_floor * std::max(gmax, 1e-300)))
    throw DegenerateMetric("metric is not positive definite");

  Eigen::GeneralizedSelfAdjointEigenSolver<RMat> solver(S, G);
  if (solver.info() != Eigen::Success) throw DegenerateMetric("generalized eigensolver failed");

  RVec vals = solver.eigenvalues().reverse();
  RMat vecs = solver.eigenvectors().rowwise().reverse();

  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  const double tie = 1e-9 * scale;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && std::abs(vals[end] - vals[start]) <= tie) ++end;
    const Eigen::Index k = end - start;
    if (k > 1) {
      RMat block = detail::canonical_cluster_basis(vecs.middleCols(start, k), G);
      for (Eigen::Index c = 0; c < k; ++c) detail::fix_sign(block.col(c));
      std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return detail::lex_greater(block.col(a), block.col(b));
      });
      for (Eigen::Index c = 0; c < k; ++c) vecs.col(start + c) = block.col(order[c]);
    } else {
      detail::fix_sign(vecs.col(start));
    }
    start = end;
  }
  out.eigenvalues.assign(vals.data(), vals.data() + n);
  out.eigenvectors = std::move(vecs);
  return out;
}

// Re-aligns a frame to a previous one along a parameter sweep: inside every
// eigenvalue cluster the previous vectors are projected onto the new
// eigenspace and G-orthonormalized; isolated vectors only get their sign
// matched.
inline RMat align_frame(const RMat& previous, const SymEigResult& current, const RMat& G, double tie = 1e-9) {
  RMat out = current.eigenvectors;
  const auto& vals = current.eigenvalues;
  const Eigen::Index n = out.cols();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && std::abs(vals[end] - vals[start]) <= tie * std::max(1.0, std::abs(vals[start]))) ++end;
    const Eigen::Index k = end - start;
    const RMat V = current.eigenvectors.middleCols(start, k);
    const RMat P = V * V.transpose() * G;
    for (Eigen::Index c = 0; c < k; ++c) {
      RVec v = P * previous.col(start + c);
      for (Eigen::Index m = 0; m < c; ++m) v -= out.col(start + m).dot(G * v) * out.col(start + m);
      const double nn = std::sqrt(std::max(0.0, v.dot(G * v)));
      if (nn > 1e-8) {
        out.col(start + c) = v / nn;
      } else {
        out.col(start + c) = V.col(c);
      }
    }
    start = end;
  }
  return out;
}

// Real determinant with partial pivoting.
inline double determinant(const RMat& M) { return M.fullPivLu().determinant(); }

}  // namespace qgauss
