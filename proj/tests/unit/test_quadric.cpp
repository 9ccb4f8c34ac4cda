#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qgauss/catalog.hpp"
#include "qgauss/gaussmap.hpp"
#include "qgauss/quadric.hpp"

using namespace qgauss;

namespace {

constexpr double pi = std::numbers::pi;
const double r2 = std::sqrt(2.0);

CVec cvec(std::initializer_list<Complex> xs) {
  CVec z(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (auto x : xs) z[k++] = x;
  return z;
}

StiefelPoint z_ref() { return StiefelPoint(cvec({1.0, kI, 0.0, 0.0}) / r2); }

QuadricTangent at_ref(std::initializer_list<Complex> xs) { return {z_ref(), cvec(xs)}; }

}  // namespace

TEST(Stiefel, RejectsPointsOffTheManifold) {
  EXPECT_THROW(StiefelPoint(cvec({1.0, 0.0, 0.0, 0.0})), NotOnStiefel);
  EXPECT_THROW(StiefelPoint(cvec({1.0, 1.0, 0.0, 0.0}) / r2), NotOnStiefel);
  EXPECT_NO_THROW(z_ref());
}

TEST(HopfProject, ProjectorEntries) {
  const auto P = hopf_project(z_ref()).projector;
  EXPECT_NEAR(std::abs(P(0, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(P(0, 1) - Complex(0, -0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(P(1, 0) - Complex(0, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(P(1, 1) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(P.block(2, 0, 2, 4).norm() + P.block(0, 2, 4, 2).norm(), 0.0, 1e-15);
}

TEST(HopfProject, FibreInvarianceAndProjectorAxioms) {
  SplitRng rng(1);
  for (int n : {2, 3, 5}) {
    const auto z = random_stiefel(n, rng);
    const auto P = hopf_project(z).projector;
    for (double t : {pi / 3, 1.234, -2.0})
      EXPECT_LE((hopf_project(z.rotated(t)).projector - P).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((P - P.adjoint()).norm(), 1e-12);
    EXPECT_LE((P * P - P).norm(), 1e-12);
    EXPECT_NEAR(P.trace().real(), 1.0, 1e-12);
  }
}

TEST(HopfProject, OrthogonalPlanesAreSqrtTwoApart) {
  const StiefelPoint w(cvec({0.0, 0.0, 1.0, kI}) / r2);
  EXPECT_NEAR(projector_distance(hopf_project(z_ref()), hopf_project(w)), r2, 1e-15);
}

TEST(HorizontalProject, Examples) {
  const auto z = z_ref();
  const CVec e3 = cvec({0.0, 0.0, 1.0, 0.0});
  EXPECT_LE((horizontal_project(z, e3).w - e3).norm(), 1e-15);
  EXPECT_LE(horizontal_project(z, kI * z.z()).w.norm(), 1e-15);
  EXPECT_LE(horizontal_project(z, z.z().conjugate()).w.norm(), 1e-15);
  SplitRng rng(2);
  for (int s = 0; s < 20; ++s) EXPECT_LE(tangent_residual(random_tangent(random_stiefel(3, rng), rng)), 1e-12);
}

TEST(ComplexStructure, Examples) {
  const auto X = at_ref({0.0, 0.0, 1.0, 0.0});
  EXPECT_LE((apply_J(X).w - cvec({0.0, 0.0, kI, 0.0})).norm(), 0.0);
  EXPECT_LE((apply_J(apply_J(X)).w + X.w).norm(), 0.0);
  SplitRng rng(3);
  const auto z = random_stiefel(3, rng);
  const auto W = random_tangent(z, rng), V = random_tangent(z, rng);
  EXPECT_NEAR(g(apply_J(W), W), 0.0, 1e-15);
  EXPECT_NEAR(g(apply_J(W), apply_J(V)), g(W, V), 1e-14);
}

TEST(ProductStructure, Examples) {
  const auto X = at_ref({0.0, 0.0, 1.0, 0.0});
  const auto Y = at_ref({0.0, 0.0, kI, 0.0});
  const ProductStructureChoice a0{z_ref(), 0.0}, api{z_ref(), pi};
  EXPECT_LE((apply_A(a0, X).w - cvec({0.0, 0.0, -1.0, 0.0})).norm(), 0.0);
  EXPECT_LE((apply_A(a0, Y).w - cvec({0.0, 0.0, kI, 0.0})).norm(), 0.0);
  EXPECT_LE((apply_A(api, X).w + apply_A(a0, X).w).norm(), 1e-15);
  EXPECT_LE(tangent_residual(apply_A(a0, X)), 1e-15);
}

TEST(ProductStructure, BaseMismatchIsRejected) {
  SplitRng rng(4);
  const auto z = random_stiefel(2, rng);
  const auto X = random_tangent(z, rng);
  EXPECT_THROW(apply_A({z.rotated(0.1), 0.0}, X), BaseMismatch);
}

TEST(ProductStructure, GaugeCovarianceAndIsometry) {
  SplitRng rng(5);
  for (int s = 0; s < 100; ++s) {
    const auto z = random_stiefel(3, rng);
    const double phi = rng.uniform(0, 2 * pi);
    const ProductStructureChoice A{z, phi}, A0{z, 0.0};
    const auto X = random_tangent(z, rng), Y = random_tangent(z, rng);
    const auto A0X = apply_A(A0, X);
    const CVec expect = std::cos(phi) * A0X.w + std::sin(phi) * apply_J(A0X).w;
    EXPECT_LE((apply_A(A, X).w - expect).norm(), 1e-14);
    EXPECT_NEAR(g(apply_A(A, X), apply_A(A, Y)), g(X, Y), 1e-12);
  }
}

TEST(ProductStructure, FamilyIsIndependentOfRepresentative) {
  // At e^{it} z the structure with gauge phi is the one with gauge phi - 2t at z.
  SplitRng rng(6);
  for (int s = 0; s < 20; ++s) {
    const auto z = random_stiefel(2, rng);
    const double t = rng.uniform(-pi, pi), phi = rng.uniform(0, 2 * pi);
    const auto X = random_tangent(z, rng), Y = random_tangent(z, rng);
    const auto zt = z.rotated(t);
    const Complex e = std::exp(kI * t);
    const QuadricTangent Xt{zt, e * X.w}, Yt{zt, e * Y.w};
    EXPECT_NEAR(g(Xt, Yt), g(X, Y), 1e-14);
    EXPECT_LE((apply_A({zt, phi}, Xt).w - e * apply_A({z, phi - 2 * t}, X).w).norm(), 1e-14);
    const auto Z = random_tangent(z, rng);
    const QuadricTangent Zt{zt, e * Z.w};
    EXPECT_LE((curvature_R({zt, phi}, Xt, Yt, Zt).w - e * curvature_R({z, phi}, X, Y, Z).w).norm(), 1e-12);
  }
}

TEST(Lemma1, RandomPointsAndGauges) {
  SplitRng rng(7);
  for (int n : {2, 3, 4})
    for (int s = 0; s < 200; ++s) {
      const auto z = random_stiefel(n, rng);
      const auto X = random_tangent(z, rng), Y = random_tangent(z, rng);
      EXPECT_LE(check_lemma1({z, rng.uniform(0, 2 * pi)}, X, Y).max(), 1e-12);
      EXPECT_LE(check_lemma1({z, 0.0}, apply_J(X), Y).anticommutation, 1e-12);
    }
  EXPECT_LE(check_lemma1({z_ref(), 0.0}, at_ref({0.0, 0.0, 1.0, 0.0}), at_ref({0.0, 0.0, 0.3, kI})).max(), 1e-12);
}

TEST(Curvature, VanishesOnEqualArguments) {
  SplitRng rng(8);
  const auto z = random_stiefel(3, rng);
  const auto X = random_tangent(z, rng), Z = random_tangent(z, rng);
  EXPECT_EQ(curvature_R({z, 0.4}, X, X, Z).w.norm(), 0.0);
}

TEST(Curvature, HandEvaluatedPlanes) {
  const ProductStructureChoice A{z_ref(), 0.0};
  const auto e3 = at_ref({0.0, 0.0, 1.0, 0.0});
  const auto ie3 = at_ref({0.0, 0.0, kI, 0.0});
  const auto e4 = at_ref({0.0, 0.0, 0.0, 1.0});
  const auto ie4 = at_ref({0.0, 0.0, 0.0, kI});
  // Holomorphic plane with A e3 = -e3: R(X,JX)X = -2 JX.
  EXPECT_LE((curvature_R(A, e3, ie3, e3).w + 2.0 * ie3.w).norm(), 1e-15);
  EXPECT_NEAR(g(curvature_R(A, e3, ie3, e3), ie3), -2.0, 1e-15);
  EXPECT_NEAR(sectional_curvature(A, e3, ie3), 2.0, 1e-15);
  // A(i e3) = i e3: holomorphic plane of an A-eigenvector, also 2.
  EXPECT_NEAR(sectional_curvature(A, ie3, apply_J(ie3)), 2.0, 1e-15);
  // Holomorphic plane with AX orthogonal to X and JX attains the maximum 4.
  const auto w = at_ref({0.0, 0.0, 1.0 / r2, kI / r2});
  EXPECT_NEAR(sectional_curvature(A, w, apply_J(w)), 4.0, 1e-14);
  // Totally real planes.
  EXPECT_NEAR(sectional_curvature(A, e3, e4), 2.0, 1e-15);
  EXPECT_NEAR(sectional_curvature(A, e3, ie4), 0.0, 1e-15);
}

TEST(Curvature, HolomorphicCurvatureFormula) {
  // K(X, JX) = 4 - 2 g(AX,X)^2 - 2 g(AX,JX)^2 for unit X
  SplitRng rng(9);
  for (int s = 0; s < 50; ++s) {
    const auto z = random_stiefel(3, rng);
    auto X = random_tangent(z, rng);
    X.w /= X.w.norm();
    const ProductStructureChoice A{z, rng.uniform(0, 2 * pi)};
    const auto AX = apply_A(A, X);
    const double expect = 4.0 - 2.0 * std::pow(g(AX, X), 2) - 2.0 * std::pow(g(AX, apply_J(X)), 2);
    EXPECT_NEAR(sectional_curvature(A, X, apply_J(X)), expect, 1e-12);
  }
}

TEST(Curvature, AlgebraicSymmetries) {
  SplitRng rng(10);
  for (int n : {2, 3, 4})
    for (int s = 0; s < 100; ++s) {
      const auto z = random_stiefel(n, rng);
      const ProductStructureChoice A{z, rng.uniform(0, 2 * pi)};
      const auto X = random_tangent(z, rng), Y = random_tangent(z, rng), Z = random_tangent(z, rng),
                 W = random_tangent(z, rng);
      const double r = g(curvature_R(A, X, Y, Z), W);
      EXPECT_NEAR(r + g(curvature_R(A, Y, X, Z), W), 0.0, 1e-12);
      EXPECT_NEAR(r, g(curvature_R(A, Z, W, X), Y), 1e-12);
      EXPECT_NEAR(r, -g(curvature_R(A, X, Y, W), Z), 1e-12);
      const CVec b = curvature_R(A, X, Y, Z).w + curvature_R(A, Y, Z, X).w + curvature_R(A, Z, X, Y).w;
      EXPECT_LE(b.norm(), 1e-12);
      EXPECT_LE(tangent_residual(curvature_R(A, X, Y, Z)), 1e-12);
    }
}

TEST(Ricci, EinsteinConstantIsTwoN) {
  SplitRng rng(11);
  for (int n : {2, 3, 4}) {
    for (int s = 0; s < 3; ++s) {
      const auto z = random_stiefel(n, rng);
      const auto rep = ricci_check({z, rng.uniform(0, 2 * pi)}, tangent_basis(z));
      EXPECT_NEAR(rep.einstein_constant, 2.0 * n, 1e-8);
      EXPECT_LE(rep.residual, 1e-10);
    }
  }
}

TEST(Ricci, NonOrthonormalBasisIsOrthonormalized) {
  SplitRng rng(12);
  const auto z = random_stiefel(2, rng);
  std::vector<QuadricTangent> basis;
  for (int k = 0; k < 4; ++k) basis.push_back(random_tangent(z, rng));
  EXPECT_NEAR(ricci_check({z, 0.0}, basis).einstein_constant, 4.0, 1e-8);
  basis[3] = basis[2];
  EXPECT_THROW(ricci_check({z, 0.0}, basis), InvalidParameter);
}

TEST(Sectional, RangeOfQ2) {
  SplitRng rng(13);
  const auto z = random_stiefel(2, rng);
  const auto r = sectional_range({z, 0.0}, 100000, rng);
  EXPECT_EQ(r.samples, 100000u);
  EXPECT_GE(r.sampled_min, -1e-9);
  EXPECT_LE(r.sampled_max, 4.0 + 1e-9);
  EXPECT_GE(r.min, -1e-9);
  EXPECT_LE(r.max, 4.0 + 1e-9);
  EXPECT_GE(r.max, 4.0 - 1e-2);
  EXPECT_LE(r.min, 1e-2);
  EXPECT_LE(r.min, r.sampled_min);
  EXPECT_GE(r.max, r.sampled_max);
}

TEST(Lemma2, StationaryCurve) {
  SplitRng rng(14);
  const auto z0 = random_stiefel(2, rng);
  const auto rep = check_lemma2([z = z0.z()](double) { return z; }, 0.0);
  EXPECT_EQ(rep.s, 0.0);
  EXPECT_EQ(rep.rest, 0.0);
  EXPECT_EQ(rep.speed, 0.0);
}

TEST(Lemma2, RotationCurvesDecomposeWithNonzeroS) {
  SplitRng rng(15);
  double max_s = 0.0;
  for (int c = 0; c < 20; ++c) {
    const int n = 2 + c % 3;
    const auto curve = rotation_curve(random_stiefel(n, rng), random_skew(n + 2, rng));
    const auto rep = check_lemma2(curve, rng.uniform(-1, 1));
    EXPECT_LE(rep.rest, 1e-5);
    EXPECT_NEAR(rep.a_coefficient, 1.0, 1e-5);
    max_s = std::max(max_s, std::abs(rep.s));
  }
  EXPECT_GT(max_s, 1e-3);
}

TEST(Lemma2, HorizontalCurveHasZeroS) {
  const auto e = clifford_torus(pi / 3);
  const StiefelCurve curve = [&e](double tau) { return gauss_lift(e.patch, {0.2 + tau, -0.4 + 0.5 * tau}).z(); };
  const auto rep = check_lemma2(curve, 0.0);
  EXPECT_LE(rep.rest, 1e-5);
  EXPECT_LE(std::abs(rep.s), 1e-8);
}

TEST(Lemma2, ZeroStepUnderflows) {
  const auto z = z_ref();
  EXPECT_THROW(check_lemma2([zz = z.z()](double) { return zz; }, 0.0, 0.0), StepUnderflow);
}
