#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qgauss/catalog.hpp"
#include "qgauss/gaussmap.hpp"

using namespace qgauss;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Catalog, ChartsLieOnTheUnitSphere) {
  SplitRng rng(1);
  for (const auto& e : catalog_list())
    for (int s = 0; s < 50; ++s) {
      const auto p = e.patch.domain.sample(rng);
      EXPECT_NEAR(to_eigen(e.patch.map(p)).norm(), 1.0, 1e-14) << e.label();
    }
}

TEST(Catalog, ClosedFormCurvatures) {
  SplitRng rng(2);
  for (const auto& e : catalog_list()) {
    if (!e.isoparametric) continue;
    for (int s = 0; s < 100; ++s) {
      const auto p = e.patch.domain.sample(rng);
      const auto pd = principal_data(e.patch, p);
      const auto expect = e.expected_lambdas(p);
      for (int j = 0; j < e.patch.n; ++j) ASSERT_NEAR(pd.lambdas[j], expect[j], 1e-6) << e.label();
      EXPECT_GT(dot(pd.b, e.conventional_normal(p)), 0.0);
    }
  }
}

TEST(Catalog, AnglesAreArccotOfCurvatures) {
  SplitRng rng(3);
  for (const auto& e : catalog_list()) {
    if (!e.isoparametric) continue;
    const auto p = e.patch.domain.sample(rng);
    const auto s = angle_spectrum(e.patch, p, 0.0);
    const auto th = expected_thetas(e, p);
    for (int j = 0; j < e.patch.n; ++j) EXPECT_NEAR(s.thetas[j], th[j], 1e-8) << e.label();
  }
}

TEST(Catalog, SpecificValues) {
  const auto g = geodesic_sphere(2, pi / 4).expected_lambdas({1.0, 0.0});
  EXPECT_NEAR(g[0], 1.0, 1e-15);
  EXPECT_NEAR(g[1], 1.0, 1e-15);
  EXPECT_NEAR(geodesic_sphere(1, 0.01).expected_lambdas({0.0})[0], 99.99666664444422, 1e-9);
  const auto e = generalized_clifford(2, 1, pi / 3);
  const auto pd = principal_data(e.patch, {1.0, 0.5, 2.0});
  EXPECT_NEAR(pd.lambdas[0], 0.57735, 1e-5);
  EXPECT_NEAR(pd.lambdas[1], 0.57735, 1e-5);
  EXPECT_NEAR(pd.lambdas[2], -1.73205, 1e-5);
  const auto c = clifford_torus(pi / 6).expected_lambdas({0.0, 0.0});
  EXPECT_NEAR(c[0], std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(c[1], -1.0 / std::sqrt(3.0), 1e-14);
}

TEST(Catalog, UnperturbedGraphIsTheCliffordTorus) {
  const auto a = perturbed_graph(0.0), b = clifford_torus(pi / 4);
  SplitRng rng(4);
  for (int s = 0; s < 20; ++s) {
    const auto p = a.patch.domain.sample(rng);
    EXPECT_LE((to_eigen(a.patch.map(p)) - to_eigen(b.patch.map(p))).norm(), 1e-15);
    EXPECT_LE((to_eigen(unit_normal<double>(a.patch, p)) - to_eigen(unit_normal<double>(b.patch, p))).norm(), 1e-12);
  }
}

TEST(Catalog, PerturbedGraphIsNotIsoparametric) {
  for (double eps : {0.01, 0.03, 0.05}) {
    const auto e = perturbed_graph(eps);
    SplitRng rng(5);
    double lo = 1e300, hi = -1e300;
    for (int s = 0; s < 100; ++s) {
      const auto pd = principal_data(e.patch, e.patch.domain.sample(rng));
      lo = std::min(lo, pd.lambdas[0]);
      hi = std::max(hi, pd.lambdas[0]);
    }
    EXPECT_GE(hi - lo, eps / 2);
  }
}

TEST(Catalog, InvalidParametersAreRejected) {
  EXPECT_THROW(geodesic_sphere(2, 0.0), InvalidParameter);
  EXPECT_THROW(geodesic_sphere(2, pi / 2), InvalidParameter);
  EXPECT_THROW(geodesic_sphere(0, 0.5), InvalidParameter);
  EXPECT_THROW(clifford_torus(-0.1), InvalidParameter);
  EXPECT_THROW(generalized_clifford(0, 2, 0.5), InvalidParameter);
  EXPECT_THROW(perturbed_graph(0.03, pi / 4, 3), InvalidParameter);
  EXPECT_THROW(perturbed_graph(0.7), InvalidParameter);
  EXPECT_THROW(great_sphere(0), InvalidParameter);
}

TEST(ParseEntry, NamesAliasesAndDefaults) {
  EXPECT_EQ(parse_entry("clifford").label(), clifford_torus(pi / 4).label());
  EXPECT_EQ(parse_entry("clifford_torus:rho=0.5").label(), clifford_torus(0.5).label());
  EXPECT_EQ(parse_entry("great:n=3").patch.n, 3);
  EXPECT_EQ(parse_entry("geodesic_sphere:n=3,rho=0.3").patch.n, 3);
  EXPECT_EQ(parse_entry("genclifford:p=1,q=2,n=3").patch.n, 3);
  EXPECT_FALSE(parse_entry("perturbed:eps=0.02").isoparametric);
  EXPECT_EQ(parse_entry(clifford_torus(0.7).label()).label(), clifford_torus(0.7).label());
}

TEST(ParseEntry, FlipNegatesCurvatures) {
  const auto e = parse_entry("clifford:rho=0.5,flip=1");
  const Vec<double> p{0.2, 0.3};
  const auto pd = principal_data(e.patch, p);
  const auto expect = e.expected_lambdas(p);
  EXPECT_NEAR(pd.lambdas[0], std::tan(0.5), 1e-10);
  EXPECT_NEAR(pd.lambdas[0], expect[0], 1e-10);
  EXPECT_NEAR(pd.lambdas[1], expect[1], 1e-10);
  EXPECT_GT(dot(pd.b, e.conventional_normal(p)), 0.0);
}

TEST(ParseEntry, Errors) {
  EXPECT_THROW(parse_entry("torus"), InvalidParameter);
  EXPECT_THROW(parse_entry("clifford:rho"), InvalidParameter);
  EXPECT_THROW(parse_entry("clifford:rho=abc"), InvalidParameter);
  EXPECT_THROW(parse_entry("clifford:radius=0.3"), InvalidParameter);
  EXPECT_THROW(parse_entry("great:n=2.5"), InvalidParameter);
  EXPECT_THROW(parse_entry("genclifford:p=2,q=1,n=4"), InvalidParameter);
  EXPECT_THROW(parse_entry("geodesic:rho=2"), InvalidParameter);
}
