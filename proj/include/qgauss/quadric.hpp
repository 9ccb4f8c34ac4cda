#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "qgauss/errors.hpp"
#include "qgauss/linalg.hpp"
#include "qgauss/random.hpp"

namespace qgauss {

using CMat = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

// A point u + iv of the Stiefel manifold V^{2n+1} in C^{n+2}:
// <u,u> = <v,v> = 1/2 and <u,v> = 0, i.e. |z| = 1 and bil(z,z) = 0.
class StiefelPoint {
 public:
  explicit StiefelPoint(CVec z, double tol = 1e-12) : z_(std::move(z)) {
    if (z_.size() < 3) throw NotOnStiefel("need at least three complex coordinates");
    const RVec u = z_.real(), v = z_.imag();
    const double err = std::max({std::abs(u.squaredNorm() - 0.5), std::abs(v.squaredNorm() - 0.5), std::abs(u.dot(v))});
    if (!(err <= tol)) throw NotOnStiefel("point violates the Stiefel constraints by " + std::to_string(err));
  }

  const CVec& z() const { return z_; }
  RVec u() const { return z_.real(); }
  RVec v() const { return z_.imag(); }
  // Complex dimension n of the quadric this point lies over.
  int n() const { return static_cast<int>(z_.size()) - 2; }

  StiefelPoint rotated(double t) const { return StiefelPoint(std::exp(kI * t) * z_); }

 private:
  CVec z_;
};

inline bool same_representative(const StiefelPoint& a, const StiefelPoint& b, double tol = 1e-12) {
  return a.z().size() == b.z().size() && (a.z() - b.z()).norm() <= tol;
}

// [z] in Q^n stored as the rank-one projector z z^* / |z|^2, which does not
// depend on the representative.  One representative is kept for building
// horizontal lifts.
struct QuadricPoint {
  CMat projector;
  StiefelPoint representative;
};

inline QuadricPoint hopf_project(const StiefelPoint& z) {
  const CVec& v = z.z();
  CMat P = v * v.adjoint() / v.squaredNorm();
  return {std::move(P), z};
}

inline double projector_distance(const QuadricPoint& a, const QuadricPoint& b) {
  return (a.projector - b.projector).norm();
}

// Horizontal lift w of a tangent vector to Q^n at [z]: herm(w, z) = 0 and
// bil(z, w) = 0.
struct QuadricTangent {
  StiefelPoint base;
  CVec w;
};

// Distance of a lift from the horizontal tangent space of Q^n at its base.
inline double tangent_residual(const QuadricTangent& X) {
  return std::max(std::abs(herm(X.w, X.base.z())), std::abs(bil(X.base.z(), X.w)));
}

// Implements d(pi) on ambient vectors: removes the component along z (radial
// and vertical) and along conj(z), which spans the normal space of Q^n in
// CP^{n+1}.
inline QuadricTangent horizontal_project(const StiefelPoint& z, const CVec& w_raw) {
  const CVec& zz = z.z();
  const CVec zc = zz.conjugate();
  CVec w = w_raw - herm(w_raw, zz) * zz;
  w -= herm(w, zc) * zc;
  return {z, std::move(w)};
}

inline double g(const QuadricTangent& X, const QuadricTangent& Y) { return re_inner(X.w, Y.w); }

inline QuadricTangent apply_J(const QuadricTangent& X) { return {X.base, kI * X.w}; }

// Selects A = cos(phi) A0 + sin(phi) J A0 in the family of almost product
// structures, where A0 is the shape operator belonging to the normal
// zeta = d(pi)(conj z) of the stored representative.
struct ProductStructureChoice {
  StiefelPoint base;
  double phi = 0.0;
};

inline void require_base(const ProductStructureChoice& choice, const QuadricTangent& X) {
  if (!same_representative(choice.base, X.base)) throw BaseMismatch("tangent vector is based at a different representative");
}

// A0 acts on horizontal lifts by w -> -conj(w); the gauge rotation turns
// this into w -> -e^{i phi} conj(w).
inline QuadricTangent apply_A(const ProductStructureChoice& choice, const QuadricTangent& X) {
  require_base(choice, X);
  return {X.base, -std::exp(kI * choice.phi) * X.w.conjugate()};
}

struct Lemma1Residuals {
  double involution = 0.0;       // |A^2 X - X|
  double symmetry = 0.0;         // |g(AX,Y) - g(X,AY)|
  double anticommutation = 0.0;  // |AJX + JAX|

  double max() const { return std::max({involution, symmetry, anticommutation}); }
};

inline Lemma1Residuals check_lemma1(const ProductStructureChoice& choice, const QuadricTangent& X,
                                    const QuadricTangent& Y) {
  require_base(choice, Y);
  Lemma1Residuals r;
  const auto AX = apply_A(choice, X);
  r.involution = (apply_A(choice, AX).w - X.w).norm();
  r.symmetry = std::abs(g(AX, Y) - g(X, apply_A(choice, Y)));
  r.anticommutation = (apply_A(choice, apply_J(X)).w + apply_J(AX).w).norm();
  return r;
}

// Riemann-Christoffel tensor of Q^n, term by term:
//   R(X,Y)Z = g(Y,Z)X - g(X,Z)Y + g(JY,Z)JX - g(JX,Z)JY - 2g(JX,Y)JZ
//           + g(AY,Z)AX - g(AX,Z)AY + g(JAY,Z)JAX - g(JAX,Z)JAY
inline QuadricTangent curvature_R(const ProductStructureChoice& choice, const QuadricTangent& X,
                                  const QuadricTangent& Y, const QuadricTangent& Z) {
  require_base(choice, X);
  require_base(choice, Y);
  require_base(choice, Z);
  const auto JX = apply_J(X), JY = apply_J(Y), JZ = apply_J(Z);
  const auto AX = apply_A(choice, X), AY = apply_A(choice, Y);
  const auto JAX = apply_J(AX), JAY = apply_J(AY);
  CVec r = g(Y, Z) * X.w - g(X, Z) * Y.w;
  r += g(JY, Z) * JX.w - g(JX, Z) * JY.w - 2.0 * g(JX, Y) * JZ.w;
  r += g(AY, Z) * AX.w - g(AX, Z) * AY.w;
  r += g(JAY, Z) * JAX.w - g(JAX, Z) * JAY.w;
  return {X.base, std::move(r)};
}

inline double sectional_curvature(const ProductStructureChoice& choice, const QuadricTangent& X,
                                  const QuadricTangent& Y) {
  const double area2 = g(X, X) * g(Y, Y) - g(X, Y) * g(X, Y);
  if (!(area2 > 0)) throw InvalidParameter("sectional curvature of a degenerate plane");
  return g(curvature_R(choice, X, Y, Y), X) / area2;
}

// Real g-orthonormal basis {v_1, i v_1, ..., v_n, i v_n} of the horizontal
// tangent space at z.
inline std::vector<QuadricTangent> tangent_basis(const StiefelPoint& z) {
  const Eigen::Index m = z.z().size();
  std::vector<CVec> span{z.z(), z.z().conjugate()};
  std::vector<CVec> basis;
  for (Eigen::Index k = 0; k < m && static_cast<int>(basis.size()) < z.n(); ++k) {
    CVec e = CVec::Zero(m);
    e[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& s : span) e -= herm(e, s) * s;
      for (const auto& b : basis) e -= herm(e, b) * b;
    }
    const double nn = e.norm();
    if (nn > 1e-6) basis.push_back(e / nn);
  }
  std::vector<QuadricTangent> out;
  for (const auto& b : basis) {
    out.push_back({z, b});
    out.push_back({z, kI * b});
  }
  return out;
}

inline StiefelPoint random_stiefel(int n, SplitRng& rng) {
  const int m = n + 2;
  RVec u(m), v(m);
  for (int k = 0; k < m; ++k) u[k] = rng.normal();
  for (int k = 0; k < m; ++k) v[k] = rng.normal();
  u.normalize();
  v -= v.dot(u) * u;
  v.normalize();
  return StiefelPoint(make_cvec(u, v) / std::sqrt(2.0));
}

inline QuadricTangent random_tangent(const StiefelPoint& z, SplitRng& rng) {
  const Eigen::Index m = z.z().size();
  CVec w(m);
  for (Eigen::Index k = 0; k < m; ++k) w[k] = Complex(rng.normal(), rng.normal());
  return horizontal_project(z, w);
}

struct RicciReport {
  double einstein_constant = 0.0;
  double residual = 0.0;  // max |Ric - c g| over the orthonormal basis
  RMat ricci;
};

// Ric(Y,Z) = sum_i g(R(E_i,Y)Z, E_i) on a g-orthonormalized copy of `basis`;
// the best-fit constant is trace / dim.
inline RicciReport ricci_check(const ProductStructureChoice& choice, std::vector<QuadricTangent> basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    require_base(choice, basis[i]);
    for (std::size_t j = 0; j < i; ++j) basis[i].w -= g(basis[i], basis[j]) * basis[j].w;
    const double nn = std::sqrt(g(basis[i], basis[i]));
    if (!(nn > 1e-10)) throw InvalidParameter("ricci_check: degenerate basis");
    basis[i].w /= nn;
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  RicciReport rep;
  rep.ricci = RMat::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index i = 0; i < d; ++i)
        rep.ricci(a, b) += g(curvature_R(choice, basis[i], basis[a], basis[b]), basis[i]);
  rep.einstein_constant = rep.ricci.trace() / static_cast<double>(d);
  rep.residual = (rep.ricci - rep.einstein_constant * RMat::Identity(d, d)).cwiseAbs().maxCoeff();
  return rep;
}

struct SectionalRange {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sampled_min = std::numeric_limits<double>::infinity();
  double sampled_max = -std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  std::size_t evaluations = 0;
};

// Sectional curvatures of planes spanned by pairs of independent Gaussian
// vectors in an orthonormal tangent frame (uniform on the Grassmannian).
// sampled_min/sampled_max are the raw extremes; min/max additionally include
// a local search started from the extremal samples (`polish_steps` random
// perturbations each, step shrinking on rejection).
inline SectionalRange sectional_range(const ProductStructureChoice& choice, std::size_t samples, SplitRng& rng,
                                      int polish_steps = 2000) {
  const auto frame = tangent_basis(choice.base);
  const std::size_t dim = frame.size();
  auto plane = [&](const std::vector<double>& cx, const std::vector<double>& cy) {
    QuadricTangent X{choice.base, CVec::Zero(choice.base.z().size())};
    QuadricTangent Y = X;
    for (std::size_t k = 0; k < dim; ++k) {
      X.w += cx[k] * frame[k].w;
      Y.w += cy[k] * frame[k].w;
    }
    return sectional_curvature(choice, X, Y);
  };
  SectionalRange out;
  std::vector<double> cx(dim), cy(dim), best_x, best_y, worst_x, worst_y;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < dim; ++k) {
      cx[k] = rng.normal();
      cy[k] = rng.normal();
    }
    const double k = plane(cx, cy);
    if (k < out.sampled_min) {
      out.sampled_min = k;
      worst_x = cx;
      worst_y = cy;
    }
    if (k > out.sampled_max) {
      out.sampled_max = k;
      best_x = cx;
      best_y = cy;
    }
    ++out.samples;
  }
  out.min = out.sampled_min;
  out.max = out.sampled_max;
  out.evaluations = out.samples;
  if (samples == 0) return out;

  auto polish = [&](std::vector<double> x, std::vector<double> y, double value, double sign) {
    double sigma = 0.1;
    for (int it = 0; it < polish_steps && sigma > 1e-12; ++it) {
      auto tx = x, ty = y;
      for (std::size_t k = 0; k < dim; ++k) {
        tx[k] += sigma * rng.normal();
        ty[k] += sigma * rng.normal();
      }
      const double k = plane(tx, ty);
      ++out.evaluations;
      out.min = std::min(out.min, k);
      out.max = std::max(out.max, k);
      if (sign * k > sign * value) {
        value = k;
        x = std::move(tx);
        y = std::move(ty);
      } else {
        sigma *= 0.97;
      }
    }
  };
  polish(best_x, best_y, out.sampled_max, 1.0);
  polish(worst_x, worst_y, out.sampled_min, -1.0);
  return out;
}

struct Lemma2Report {
  double s = 0.0;              // coefficient on J zeta
  double a_coefficient = 0.0;  // coefficient on -A X (expected 1)
  double rest = 0.0;           // norm of the component outside span{AX, J zeta}
  double speed = 0.0;          // |X|
};

using StiefelCurve = std::function<CVec(double)>;

// Differentiates zeta = d(pi)(conj z) along the curve with central differences
// and the Levi-Civita connection of CP^{n+1}: ambient derivative, projection
// to the horizontal space at z, plus the correction for the curve's motion
// along the fibre (the lift of a vector field transforms with e^{it}).
// Decomposes the result as -c AX + s J zeta + rest.
inline Lemma2Report check_lemma2(const StiefelCurve& curve, double tau, double step = 1e-5) {
  if (!(step > 0) || tau + step == tau) throw StepUnderflow("check_lemma2: step size underflow");
  const StiefelPoint z(curve(tau), 1e-10);
  const CVec zp = curve(tau + step), zm = curve(tau - step);
  const CVec zdot = (zp - zm) / (2.0 * step);
  const CVec zeta_dot = (zp.conjugate() - zm.conjugate()) / (2.0 * step);

  const CVec& zz = z.z();
  const CVec zc = zz.conjugate();
  const double fibre_speed = herm(zdot, zz).imag();
  CVec nabla = zeta_dot - herm(zeta_dot, zz) * zz;
  nabla -= kI * fibre_speed * zc;

  const auto X = horizontal_project(z, zdot);
  const ProductStructureChoice choice{z, 0.0};
  const CVec AX = apply_A(choice, X).w;
  const CVec Jzeta = kI * zc;

  Lemma2Report rep;
  rep.speed = X.w.norm();
  rep.s = re_inner(nabla, Jzeta);
  CVec rest = nabla - rep.s * Jzeta;
  if (rep.speed > 0) {
    rep.a_coefficient = -re_inner(rest, AX) / AX.squaredNorm();
    rest += rep.a_coefficient * AX;
  }
  rep.rest = rest.norm();
  return rep;
}

// One-parameter subgroup curve exp(tau K) z0 for a real skew-symmetric K;
// stays in V^{2n+1} and in general moves along the fibres.
inline StiefelCurve rotation_curve(const StiefelPoint& z0, const RMat& K) {
  return [z0 = z0.z(), K](double tau) -> CVec {
    const RMat R = (tau * K).exp();
    return R.cast<Complex>() * z0;
  };
}

inline RMat random_skew(int m, SplitRng& rng) {
  RMat K = RMat::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      K(i, j) = rng.normal();
      K(j, i) = -K(i, j);
    }
  return K;
}

}  // namespace qgauss
