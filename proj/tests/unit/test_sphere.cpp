#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qgauss/catalog.hpp"
#include "qgauss/sphere.hpp"

using namespace qgauss;

namespace {

constexpr double pi = std::numbers::pi;

double sup_distance(const Vec<double>& a, const Vec<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace

TEST(UnitNormal, GreatSphereNormalIsConstantPole) {
  const auto e = great_sphere(3);
  SplitRng rng(1);
  for (int s = 0; s < 10; ++s) {
    const auto p = e.patch.domain.sample(rng);
    const auto b = unit_normal(e.patch, p, DiffScheme::dual);
    for (std::size_t k = 0; k + 1 < b.size(); ++k) EXPECT_NEAR(b[k], 0.0, 1e-14);
    EXPECT_NEAR(std::abs(b.back()), 1.0, 1e-14);
  }
}

TEST(UnitNormal, CliffordAtOrigin) {
  const auto e = clifford_torus(pi / 4);
  const auto b = unit_normal(e.patch, {0.0, 0.0}, DiffScheme::dual);
  const double r = 1.0 / std::sqrt(2.0);
  const Vec<double> expect{r, 0.0, -r, 0.0};
  EXPECT_LE(std::min(sup_distance(b, expect), sup_distance(b, scaled(expect, -1.0))), 1e-15);
}

TEST(UnitNormal, GeodesicSphereClosedForm) {
  const double rho = pi / 4;
  const auto e = geodesic_sphere(2, rho);
  SplitRng rng(2);
  for (int s = 0; s < 20; ++s) {
    const auto p = e.patch.domain.sample(rng);
    const auto a = e.patch.map(p);
    const auto b = unit_normal(e.patch, p, DiffScheme::dual);
    EXPECT_NEAR(dot(a, b), 0.0, 1e-14);
    // b = +-(cos rho * radial - sin rho * pole) with radial = a restricted to the first slots
    Vec<double> expect(a.size(), 0.0);
    for (std::size_t k = 0; k + 1 < a.size(); ++k) expect[k] = std::cos(rho) * a[k] / std::sin(rho);
    expect.back() = -std::sin(rho);
    EXPECT_LE(std::min(sup_distance(b, expect), sup_distance(b, scaled(expect, -1.0))), 1e-14);
  }
}

TEST(UnitNormal, OrthonormalAndPositivelyOriented) {
  SplitRng rng(3);
  for (const auto& e : catalog_list()) {
    const auto p = e.patch.domain.sample(rng);
    const auto pd = principal_data(e.patch, p, DiffScheme::dual);
    EXPECT_NEAR(norm(pd.b), 1.0, 1e-14);
    EXPECT_NEAR(dot(pd.a, pd.b), 0.0, 1e-14);
    for (const auto& c : pd.da) EXPECT_NEAR(dot(c, pd.b), 0.0, 1e-13);
    Columns<double> cols = pd.da;
    cols.push_back(pd.a);
    cols.push_back(pd.b);
    const double det = determinant(columns_matrix(cols));
    EXPECT_GT(e.patch.flip ? -det : det, 0.0) << e.label();
  }
}

TEST(UnitNormal, RankDeficientChartIsNotAnImmersion) {
  HypersurfacePatch patch;
  patch.n = 2;
  patch.domain = Box{{-1, -1}, {1, 1}};
  patch.map = VectorMap(2, 4, [](const auto& p) {
    using S = std::decay_t<decltype(p[0])>;
    using std::cos;
    using std::sin;
    return Vec<S>{cos(p[0]), sin(p[0]), S(0.0), S(0.0)};
  });
  EXPECT_THROW(unit_normal(patch, {0.2, 0.1}, DiffScheme::dual), NotAnImmersion);
  EXPECT_THROW(principal_data(patch, {0.2, 0.1}, DiffScheme::dual), NotAnImmersion);
}

TEST(PrincipalData, ClosedFormCurvatures) {
  SplitRng rng(4);
  const auto great = great_sphere(2);
  const auto geo = geodesic_sphere(3, pi / 3);
  const auto cliff = clifford_torus(pi / 4);
  for (int s = 0; s < 20; ++s) {
    for (double l : principal_data(great.patch, great.patch.domain.sample(rng)).lambdas) EXPECT_NEAR(l, 0.0, 1e-14);
    for (double l : principal_data(geo.patch, geo.patch.domain.sample(rng)).lambdas) EXPECT_NEAR(l, 0.5773503, 1e-7);
    const auto lc = principal_data(cliff.patch, cliff.patch.domain.sample(rng)).lambdas;
    EXPECT_NEAR(lc[0], 1.0, 1e-14);
    EXPECT_NEAR(lc[1], -1.0, 1e-14);
  }
}

TEST(PrincipalData, ShapeOperatorRelationAndFormAgreement) {
  SplitRng rng(5);
  for (const auto& e : catalog_list()) {
    for (int s = 0; s < 100; ++s) {
      const auto pd = principal_data(e.patch, e.patch.domain.sample(rng), DiffScheme::dual);
      ASSERT_LE(pd.form_discrepancy, 1e-6) << e.label();
      for (int j = 0; j < e.patch.n; ++j) {
        const RVec v = pd.directions.col(j);
        const RVec r = pd.second_form * v - pd.lambdas[j] * (pd.metric * v);
        ASSERT_LE(r.norm(), 1e-10) << e.label();
      }
      const RMat orth = pd.directions.transpose() * pd.metric * pd.directions;
      ASSERT_LE((orth - RMat::Identity(e.patch.n, e.patch.n)).norm(), 1e-10);
    }
  }
}

TEST(PrincipalData, FiniteDifferenceSchemeAgrees) {
  SplitRng rng(6);
  for (const auto& e : catalog_list()) {
    const auto p = e.patch.domain.sample(rng);
    const auto a = principal_data(e.patch, p, DiffScheme::dual);
    const auto b = principal_data(e.patch, p, DiffScheme::fd);
    for (int j = 0; j < e.patch.n; ++j) EXPECT_NEAR(a.lambdas[j], b.lambdas[j], 1e-4) << e.label();
  }
}

TEST(ParallelPatch, IdentityAtZero) {
  const auto e = clifford_torus(pi / 3);
  const auto p0 = parallel_patch(e.patch, 0.0);
  const Vec<double> p{0.4, -1.1};
  EXPECT_LE(sup_distance(p0.map(p), e.patch.map(p)), 1e-15);
  EXPECT_LE(sup_distance(p0.normal(p), unit_normal(e.patch, p, DiffScheme::dual)), 1e-15);
}

TEST(ParallelPatch, CliffordShiftedCurvatures) {
  const auto e = clifford_torus(pi / 4);
  const auto at = parallel_patch(e.patch, pi / 6);
  SplitRng rng(7);
  for (int s = 0; s < 10; ++s) {
    const auto l = principal_data(at, e.patch.domain.sample(rng)).lambdas;
    EXPECT_NEAR(l[0], 0.2679492, 1e-7);
    EXPECT_NEAR(l[1], -3.7320508, 1e-7);
  }
}

TEST(ParallelPatch, GeodesicSphereBecomesGreatSphere) {
  const auto e = geodesic_sphere(2, pi / 4);
  const auto at = parallel_patch(e.patch, pi / 4);
  for (double l : principal_data(at, {1.0, 0.5}).lambdas) EXPECT_NEAR(l, 0.0, 1e-14);
}

TEST(ParallelPatch, GroupLaw) {
  SplitRng rng(8);
  for (const auto& e : catalog_list()) {
    const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
    const auto twice = parallel_patch(parallel_patch(e.patch, s), t);
    const auto once = parallel_patch(e.patch, s + t);
    const auto p = e.patch.domain.sample(rng);
    EXPECT_LE(sup_distance(twice.map(p), once.map(p)), 1e-12);
    EXPECT_LE(sup_distance(twice.normal(p), once.normal(p)), 1e-12);
    EXPECT_NEAR(norm(once.map(p)), 1.0, 1e-14);
  }
}

TEST(ParallelPatch, CurvatureLawInClosedForm) {
  SplitRng rng(9);
  for (const auto& e : catalog_list()) {
    for (double t : {0.2, -0.45}) {
      const auto p = e.patch.domain.sample(rng);
      const auto base = principal_data(e.patch, p);
      const auto at = principal_data(parallel_patch(e.patch, t), p);
      std::vector<double> expect;
      for (double l : base.lambdas) expect.push_back(1.0 / std::tan(std::atan2(1.0, l) + t));
      std::sort(expect.begin(), expect.end(), std::greater<>());
      for (std::size_t j = 0; j < expect.size(); ++j) EXPECT_NEAR(at.lambdas[j], expect[j], 1e-6) << e.label();
    }
  }
}

TEST(Orientation, FlipNegatesNormalAndCurvatures) {
  SplitRng rng(10);
  for (const auto& e : catalog_list()) {
    auto flipped = e.patch;
    flipped.flip = !flipped.flip;
    const auto p = e.patch.domain.sample(rng);
    const auto a = principal_data(e.patch, p), b = principal_data(flipped, p);
    EXPECT_LE(sup_distance(a.b, scaled(b.b, -1.0)), 1e-15);
    for (int j = 0; j < e.patch.n; ++j) EXPECT_NEAR(a.lambdas[j], -b.lambdas[e.patch.n - 1 - j], 1e-12);
  }
}

TEST(ImmersionMargin, PositiveOnBaseAndVanishingAtDegenerateT) {
  const auto e = clifford_torus(pi / 4);
  const Vec<double> p{0.3, 1.2};
  EXPECT_GT(immersion_margin(e.patch, p), 0.5);
  EXPECT_LT(immersion_margin(parallel_patch(e.patch, 3 * pi / 4), p), 1e-7);
  // at t = pi/6 the margin is min_j |sin(theta_j + t)| / |sin theta_j| with theta = (pi/4, 3pi/4)
  const double expect = std::abs(std::sin(3 * pi / 4 + pi / 6)) / std::sin(pi / 4);
  EXPECT_NEAR(immersion_margin(parallel_patch(e.patch, pi / 6), p), expect, 1e-12);
}
