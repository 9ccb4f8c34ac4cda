#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qgauss/quadric.hpp"
#include "qgauss/sphere.hpp"

namespace qgauss {

// (a + i b) / sqrt(2) in split layout (real parts, then imaginary parts).
template <class S>
Vec<S> gauss_lift_split(const HypersurfacePatch& patch, const Vec<S>& p) {
  const auto a = patch.map(p);
  const auto b = unit_normal(patch, p);
  const double r = 1.0 / std::sqrt(2.0);
  Vec<S> out(2 * a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    out[k] = r * a[k];
    out[k + a.size()] = r * b[k];
  }
  return out;
}

inline StiefelPoint gauss_lift(const HypersurfacePatch& patch, const Vec<double>& p,
                               DiffScheme scheme = DiffScheme::dual) {
  const auto a = to_eigen(patch.map(p));
  const auto b = to_eigen(unit_normal(patch, p, scheme));
  return StiefelPoint(make_cvec(a, b) / std::sqrt(2.0), 1e-10);
}

inline QuadricPoint gauss_map(const HypersurfacePatch& patch, const Vec<double>& p,
                              DiffScheme scheme = DiffScheme::dual) {
  return hopf_project(gauss_lift(patch, p, scheme));
}

// d(Ghat)(v), returned unprojected so callers can measure how horizontal it is.
inline QuadricTangent gauss_differential(const HypersurfacePatch& patch, const Vec<double>& p, const Vec<double>& v,
                                         DiffScheme scheme = DiffScheme::dual) {
  const StiefelPoint z = gauss_lift(patch, p, scheme);
  if (scheme == DiffScheme::dual) {
    auto f = [&patch](const auto& q) { return gauss_lift_split(patch, q); };
    return {z, cvec_from_split(directional_derivative(f, p, v))};
  }
  double pmax = 0.0, vmax = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    pmax = std::max(pmax, std::abs(p[i]));
    vmax = std::max(vmax, std::abs(v[i]));
  }
  const double h = fd_step1(pmax) / std::max(vmax, 1e-300);
  Vec<double> pp = p, pm = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    pp[i] += h * v[i];
    pm[i] -= h * v[i];
  }
  const CVec zp = gauss_lift(patch, pp, scheme).z();
  const CVec zm = gauss_lift(patch, pm, scheme).z();
  return {z, (zp - zm) / (2.0 * h)};
}

inline Vec<double> column(const RMat& M, Eigen::Index j) { return from_eigen(M.col(j)); }

// max_j |dGhat e_j - (1 - i lambda_j) E_j / sqrt 2| over the principal frame,
// where E_j is e_j pushed into R^{n+2}.
inline double lift_principal_residual(const HypersurfacePatch& patch, const PrincipalData& pd,
                                      DiffScheme scheme = DiffScheme::dual) {
  double worst = 0.0;
  for (int j = 0; j < patch.n; ++j) {
    const auto W = gauss_differential(patch, pd.point, column(pd.directions, j), scheme);
    const CVec expected = Complex(1.0, -pd.lambdas[j]) * to_eigen(pd.ambient_directions[j]).cast<Complex>() / std::sqrt(2.0);
    worst = std::max(worst, (W.w - expected).norm());
  }
  return worst;
}

struct LagrangianReport {
  double lagrangian = 0.0;     // max_{j,k} |re_inner(i dG e_j, dG e_k)|
  double horizontality = 0.0;  // max_j |herm(dG e_j, Ghat)|
};

inline LagrangianReport check_lagrangian(const HypersurfacePatch& patch, const PrincipalData& pd,
                                         DiffScheme scheme = DiffScheme::dual) {
  std::vector<QuadricTangent> W;
  for (int j = 0; j < patch.n; ++j) W.push_back(gauss_differential(patch, pd.point, column(pd.directions, j), scheme));
  LagrangianReport rep;
  for (int j = 0; j < patch.n; ++j) {
    rep.horizontality = std::max(rep.horizontality, std::abs(herm(W[j].w, W[j].base.z())));
    for (int k = 0; k < patch.n; ++k)
      rep.lagrangian = std::max(rep.lagrangian, std::abs(re_inner(kI * W[j].w, W[k].w)));
  }
  return rep;
}

inline LagrangianReport check_lagrangian(const HypersurfacePatch& patch, const Vec<double>& p,
                                         DiffScheme scheme = DiffScheme::dual) {
  return check_lagrangian(patch, principal_data(patch, p, scheme), scheme);
}

// Folds an angle into (0, pi].
inline double fold_angle(double theta) {
  const double pi = std::numbers::pi;
  theta = std::fmod(theta, pi);
  if (theta <= 0) theta += pi;
  return theta;
}

// Distance from x to the nearest integer multiple of pi.
inline double distance_to_pi_multiple(double x) {
  const double pi = std::numbers::pi;
  const double r = std::remainder(x, pi);
  return std::abs(r);
}

// Shifts `theta` by a multiple of pi to be closest to `previous`.
inline double unwrap_angle(double theta, double previous) {
  const double pi = std::numbers::pi;
  return theta + pi * std::round((previous - theta) / pi);
}

struct AngleDecomposition {
  double theta = 0.0;      // in (0, pi]
  double cos2 = 0.0;       // coefficient on w
  double jcoef = 0.0;      // coefficient on J w (= -sin 2 theta)
  double residual = 0.0;   // relative norm of the remaining component
};

// Writes A w = cos(2 theta) w - sin(2 theta) J w + rest.
inline AngleDecomposition decompose_angle(const CVec& Aw, const CVec& w) {
  const double w2 = w.squaredNorm();
  if (!(w2 > 0)) throw NotAnImmersion("zero tangent vector in angle decomposition");
  AngleDecomposition d;
  d.cos2 = re_inner(Aw, w) / w2;
  d.jcoef = re_inner(Aw, kI * w) / w2;
  d.residual = (Aw - d.cos2 * w - d.jcoef * (kI * w)).norm() / std::sqrt(w2);
  d.theta = fold_angle(0.5 * std::atan2(-d.jcoef, d.cos2));
  return d;
}

struct AngleSpectrum {
  std::vector<double> thetas;
  std::vector<double> lambdas;  // principal curvatures along the same frame
  RMat frame;                   // chart-coordinate directions
  double gauge = 0.0;
  double residual = 0.0;        // worst decomposition residual
};

inline constexpr double kDecompositionTol = 1e-8;

// Angle functions along the given chart directions of the Gauss map, for the
// structure A = cos(phi) A0 + sin(phi) J A0 built from the canonical lift.
inline AngleSpectrum angles_along(const HypersurfacePatch& patch, const Vec<double>& p, const RMat& frame, double phi,
                                  DiffScheme scheme = DiffScheme::dual) {
  AngleSpectrum out;
  out.frame = frame;
  out.gauge = phi;
  for (Eigen::Index j = 0; j < frame.cols(); ++j) {
    const auto W = gauss_differential(patch, p, column(frame, j), scheme);
    const auto AW = apply_A({W.base, phi}, W);
    const auto d = decompose_angle(AW.w, W.w);
    out.thetas.push_back(d.theta);
    out.residual = std::max(out.residual, d.residual);
  }
  return out;
}

inline AngleSpectrum angle_spectrum(const HypersurfacePatch& patch, const PrincipalData& pd, double phi,
                                    DiffScheme scheme = DiffScheme::dual, double tol = kDecompositionTol) {
  auto out = angles_along(patch, pd.point, pd.directions, phi, scheme);
  out.lambdas = pd.lambdas;
  if (out.residual > tol)
    throw FrameNotAdapted("principal frame does not decompose the almost product structure (residual " +
                          std::to_string(out.residual) + ")");
  return out;
}

inline AngleSpectrum angle_spectrum(const HypersurfacePatch& patch, const Vec<double>& p, double phi,
                                    DiffScheme scheme = DiffScheme::dual, double tol = kDecompositionTol) {
  return angle_spectrum(patch, principal_data(patch, p, scheme), phi, scheme, tol);
}

inline double checked_cot(double theta) {
  if (!(std::abs(std::sin(theta)) > 1e-12)) throw UndefinedCot("angle at a multiple of pi; cot undefined");
  return std::cos(theta) / std::sin(theta);
}

// max_j |lambda_j - cot theta_j| in the canonical gauge.
inline double verify_theorem1(const AngleSpectrum& spec) {
  double worst = 0.0;
  for (std::size_t j = 0; j < spec.thetas.size(); ++j)
    worst = std::max(worst, std::abs(spec.lambdas[j] - checked_cot(spec.thetas[j])));
  return worst;
}

inline double verify_theorem1(const HypersurfacePatch& patch, const Vec<double>& p,
                              DiffScheme scheme = DiffScheme::dual, double tol = kDecompositionTol) {
  return verify_theorem1(angle_spectrum(patch, p, 0.0, scheme, tol));
}

// max_j dist(theta_j(phi) - (theta_j(0) - phi/2), pi Z).
inline double gauge_shift_check(const HypersurfacePatch& patch, const PrincipalData& pd, double phi,
                                DiffScheme scheme = DiffScheme::dual) {
  const auto base = angles_along(patch, pd.point, pd.directions, 0.0, scheme);
  const auto shifted = angles_along(patch, pd.point, pd.directions, phi, scheme);
  double worst = 0.0;
  for (std::size_t j = 0; j < base.thetas.size(); ++j)
    worst = std::max(worst, distance_to_pi_multiple(shifted.thetas[j] - (base.thetas[j] - 0.5 * phi)));
  return worst;
}

inline double gauge_shift_check(const HypersurfacePatch& patch, const Vec<double>& p, double phi,
                                DiffScheme scheme = DiffScheme::dual) {
  return gauge_shift_check(patch, principal_data(patch, p, scheme), phi, scheme);
}

struct InvariantValue {
  double cot_difference = 0.0;   // cot(theta_j - theta_k)
  double curvature_ratio = 0.0;  // (lambda_j lambda_k + 1) / (lambda_j - lambda_k)
  int sign = +1;                 // which sign of the +- matched
  double residual = 0.0;
};

inline constexpr double kDistinctCurvatureMargin = 1e-6;

inline InvariantValue angle_difference_invariant(const AngleSpectrum& spec, int j, int k) {
  const double lj = spec.lambdas.at(j), lk = spec.lambdas.at(k);
  if (!(std::abs(lj - lk) > kDistinctCurvatureMargin))
    throw InvariantUndefined("principal curvatures coincide; invariant undefined");
  InvariantValue v;
  v.cot_difference = checked_cot(spec.thetas.at(j) - spec.thetas.at(k));
  v.curvature_ratio = (lj * lk + 1.0) / (lj - lk);
  const double plus = std::abs(v.cot_difference - v.curvature_ratio);
  const double minus = std::abs(v.cot_difference + v.curvature_ratio);
  v.sign = plus <= minus ? +1 : -1;
  v.residual = std::min(plus, minus);
  return v;
}

inline InvariantValue angle_difference_invariant(const HypersurfacePatch& patch, const Vec<double>& p, int j, int k,
                                                 double phi = 0.0, DiffScheme scheme = DiffScheme::dual) {
  const auto pd = principal_data(patch, p, scheme);
  auto spec = angles_along(patch, p, pd.directions, phi, scheme);
  spec.lambdas = pd.lambdas;
  return angle_difference_invariant(spec, j, k);
}

}  // namespace qgauss
