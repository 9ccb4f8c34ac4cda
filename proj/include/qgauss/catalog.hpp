#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qgauss/sphere.hpp"

namespace qgauss {

struct CatalogEntry {
  std::string name;
  std::map<std::string, double> params;
  HypersurfacePatch patch;
  bool isoparametric = true;
  // Closed-form principal curvatures (descending); empty for non-isoparametric entries.
  std::function<std::vector<double>(const Vec<double>&)> expected_lambdas;
  // Closed-form unit normal matching the orientation of `patch`.
  std::function<Vec<double>(const Vec<double>&)> conventional_normal;

  // Spec string accepted by parse_entry.
  std::string label() const {
    std::ostringstream os;
    os.precision(17);
    os << name;
    char sep = ':';
    for (const auto& [k, v] : params) {
      os << sep << k << '=' << v;
      sep = ',';
    }
    return os.str();
  }
};

// theta in (0, pi) with cot theta = lambda.
inline double arccot(double lambda) { return std::atan2(1.0, lambda); }

inline std::vector<double> expected_thetas(const CatalogEntry& e, const Vec<double>& p) {
  std::vector<double> out;
  for (double l : e.expected_lambdas(p)) out.push_back(arccot(l));
  return out;
}

namespace catalog_detail {

inline constexpr double kPoleMargin = 0.1;

// Hyperspherical chart of S^m in R^{m+1}: the first m-1 angles are
// colatitudes, the last one an azimuth.
template <class S>
Vec<S> sphere_chart(const Vec<S>& p, std::size_t offset, int m) {
  using std::cos;
  using std::sin;
  Vec<S> x(static_cast<std::size_t>(m + 1));
  S prod(1.0);
  for (int i = 0; i < m; ++i) {
    const S& ang = p[offset + static_cast<std::size_t>(i)];
    x[i] = prod * cos(ang);
    prod = prod * sin(ang);
  }
  x[m] = prod;
  return x;
}

inline void append_sphere_domain(Box& box, int m) {
  const double pi = std::numbers::pi;
  for (int i = 0; i < m - 1; ++i) {
    box.lo.push_back(kPoleMargin);
    box.hi.push_back(pi - kPoleMargin);
  }
  box.lo.push_back(-pi + kPoleMargin);
  box.hi.push_back(pi - kPoleMargin);
}

// Orients the chart so the Gram-Schmidt normal agrees with the closed-form one.
inline void orient(CatalogEntry& e) {
  const auto c = e.patch.domain.center();
  e.patch.flip = false;
  const auto b = unit_normal<double>(e.patch, c);
  if (dot(b, e.conventional_normal(c)) < 0) e.patch.flip = true;
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParameter(msg);
}

}  // namespace catalog_detail

// Totally geodesic S^n in S^{n+1}: a = (x, 0), b = e_{n+2}, lambda = 0.
inline CatalogEntry great_sphere(int n) {
  using namespace catalog_detail;
  require(n >= 1, "great_sphere: n must be positive");
  CatalogEntry e;
  e.name = "great";
  e.params = {{"n", n}};
  e.patch.name = e.label();
  e.patch.n = n;
  append_sphere_domain(e.patch.domain, n);
  e.patch.map = VectorMap(n, n + 2, [n](const auto& p) {
    using S = scalar_of<decltype(p)>;
    auto x = sphere_chart(p, 0, n);
    x.push_back(S(0.0));
    return x;
  });
  e.expected_lambdas = [n](const Vec<double>&) { return std::vector<double>(n, 0.0); };
  e.conventional_normal = [n](const Vec<double>&) { return unit_vector(n + 2, n + 1); };
  orient(e);
  return e;
}

// Distance sphere of radius rho about the pole e_{n+2}; with the normal
// pointing towards the pole every principal curvature is cot rho.
inline CatalogEntry geodesic_sphere(int n, double rho) {
  using namespace catalog_detail;
  require(n >= 1, "geodesic_sphere: n must be positive");
  require(rho > 0 && rho < std::numbers::pi / 2, "geodesic_sphere: rho must lie in (0, pi/2)");
  CatalogEntry e;
  e.name = "geodesic";
  e.params = {{"n", n}, {"rho", rho}};
  e.patch.name = e.label();
  e.patch.n = n;
  append_sphere_domain(e.patch.domain, n);
  const double c = std::cos(rho), s = std::sin(rho);
  e.patch.map = VectorMap(n, n + 2, [n, c, s](const auto& p) {
    using S = scalar_of<decltype(p)>;
    auto x = sphere_chart(p, 0, n);
    for (auto& v : x) v = s * v;
    x.push_back(S(c));
    return x;
  });
  e.expected_lambdas = [n, rho](const Vec<double>&) { return std::vector<double>(n, 1.0 / std::tan(rho)); };
  e.conventional_normal = [n, c, s](const Vec<double>& p) {
    auto x = sphere_chart(p, 0, n);
    for (auto& v : x) v = -c * v;
    x.push_back(s);
    return x;
  };
  orient(e);
  return e;
}

// S^1(cos rho) x S^1(sin rho) in S^3, lambda = {cot rho, -tan rho}.
inline CatalogEntry clifford_torus(double rho) {
  using namespace catalog_detail;
  require(rho > 0 && rho < std::numbers::pi / 2, "clifford_torus: rho must lie in (0, pi/2)");
  CatalogEntry e;
  e.name = "clifford";
  e.params = {{"rho", rho}};
  e.patch.name = e.label();
  e.patch.n = 2;
  append_sphere_domain(e.patch.domain, 1);
  append_sphere_domain(e.patch.domain, 1);
  const double c = std::cos(rho), s = std::sin(rho);
  e.patch.map = VectorMap(2, 4, [c, s](const auto& p) {
    using S = scalar_of<decltype(p)>;
    using std::cos;
    using std::sin;
    return Vec<S>{c * cos(p[0]), c * sin(p[0]), s * cos(p[1]), s * sin(p[1])};
  });
  e.expected_lambdas = [rho](const Vec<double>&) {
    std::vector<double> l{1.0 / std::tan(rho), -std::tan(rho)};
    std::sort(l.rbegin(), l.rend());
    return l;
  };
  e.conventional_normal = [c, s](const Vec<double>& p) {
    return Vec<double>{s * std::cos(p[0]), s * std::sin(p[0]), -c * std::cos(p[1]), -c * std::sin(p[1])};
  };
  orient(e);
  return e;
}

// Product S^p(sin rho) x S^q(cos rho) in S^{p+q+1}: cot rho with multiplicity
// p and -tan rho with multiplicity q.
inline CatalogEntry generalized_clifford(int p, int q, double rho) {
  using namespace catalog_detail;
  require(p >= 1 && q >= 1, "generalized_clifford: p and q must be positive");
  require(rho > 0 && rho < std::numbers::pi / 2, "generalized_clifford: rho must lie in (0, pi/2)");
  CatalogEntry e;
  e.name = "genclifford";
  e.params = {{"p", p}, {"q", q}, {"rho", rho}};
  e.patch.name = e.label();
  const int n = p + q;
  e.patch.n = n;
  append_sphere_domain(e.patch.domain, p);
  append_sphere_domain(e.patch.domain, q);
  const double c = std::cos(rho), s = std::sin(rho);
  e.patch.map = VectorMap(n, n + 2, [p, q, c, s](const auto& u) {
    auto x = sphere_chart(u, 0, p);
    auto y = sphere_chart(u, static_cast<std::size_t>(p), q);
    for (auto& v : x) v = s * v;
    for (auto& v : y) v = c * v;
    x.insert(x.end(), y.begin(), y.end());
    return x;
  });
  e.expected_lambdas = [p, q, rho](const Vec<double>&) {
    std::vector<double> l(static_cast<std::size_t>(p), 1.0 / std::tan(rho));
    l.insert(l.end(), static_cast<std::size_t>(q), -std::tan(rho));
    return l;
  };
  e.conventional_normal = [p, q, c, s](const Vec<double>& u) {
    auto x = sphere_chart(u, 0, p);
    auto y = sphere_chart(u, static_cast<std::size_t>(p), q);
    for (auto& v : x) v = -c * v;
    for (auto& v : y) v = s * v;
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  orient(e);
  return e;
}

// Normal graph a = cos(eps h) a0 + sin(eps h) b0 over the Clifford torus of
// radius rho with h(u) = sin(u1) cos(u2) + sin(2 u2) / 2.  Not isoparametric
// for eps != 0.
inline CatalogEntry perturbed_graph(double eps, double rho = std::numbers::pi / 4, int n = 2) {
  using namespace catalog_detail;
  require(n == 2, "perturbed_graph: only n = 2 (graph over the Clifford torus) is available");
  require(rho > 0 && rho < std::numbers::pi / 2, "perturbed_graph: rho must lie in (0, pi/2)");
  require(std::abs(eps) <= 0.5, "perturbed_graph: |eps| must not exceed 0.5");
  CatalogEntry e;
  e.name = "perturbed";
  e.params = {{"eps", eps}, {"rho", rho}};
  e.patch.name = e.label();
  e.patch.n = 2;
  e.isoparametric = false;
  append_sphere_domain(e.patch.domain, 1);
  append_sphere_domain(e.patch.domain, 1);
  const double c = std::cos(rho), s = std::sin(rho);
  e.patch.map = VectorMap(2, 4, [c, s, eps](const auto& u) {
    using S = scalar_of<decltype(u)>;
    using std::cos;
    using std::sin;
    const S h = sin(u[0]) * cos(u[1]) + 0.5 * sin(2.0 * u[1]);
    const S ch = cos(eps * h), sh = sin(eps * h);
    const S c1 = cos(u[0]), s1 = sin(u[0]), c2 = cos(u[1]), s2 = sin(u[1]);
    return Vec<S>{(c * ch + s * sh) * c1, (c * ch + s * sh) * s1, (s * ch - c * sh) * c2, (s * ch - c * sh) * s2};
  });
  // Sign reference only: the unperturbed normal.
  e.conventional_normal = [c, s](const Vec<double>& p) {
    return Vec<double>{s * std::cos(p[0]), s * std::sin(p[0]), -c * std::cos(p[1]), -c * std::sin(p[1])};
  };
  orient(e);
  return e;
}

// Default parameterizations used by the verification suites.
inline std::vector<CatalogEntry> catalog_list() {
  const double pi = std::numbers::pi;
  std::vector<CatalogEntry> out;
  out.push_back(great_sphere(2));
  out.push_back(great_sphere(3));
  for (int n : {2, 3})
    for (double rho : {pi / 6, pi / 4, pi / 3}) out.push_back(geodesic_sphere(n, rho));
  for (double rho : {pi / 6, pi / 4, pi / 3}) out.push_back(clifford_torus(rho));
  out.push_back(generalized_clifford(2, 1, pi / 3));
  out.push_back(perturbed_graph(0.03));
  return out;
}

// Parses `name:key=value,key=value`.
inline CatalogEntry parse_entry(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidParameter("malformed entry parameter '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      std::size_t used = 0;
      double x = 0;
      try {
        x = std::stod(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != val.size() || val.empty()) throw InvalidParameter("parameter '" + key + "' is not a number");
      kv[key] = x;
    }
  }
  auto take = [&kv](const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    double v = it->second;
    kv.erase(it);
    return v;
  };
  auto as_int = [](double v, const char* what) {
    if (v != std::floor(v)) throw InvalidParameter(std::string(what) + " must be an integer");
    return static_cast<int>(v);
  };
  const double pi = std::numbers::pi;
  const bool flip = take("flip", 0.0) != 0.0;
  CatalogEntry e;
  if (name == "great" || name == "great_sphere") {
    e = great_sphere(as_int(take("n", 2), "n"));
  } else if (name == "geodesic" || name == "geodesic_sphere") {
    const int n = as_int(take("n", 2), "n");
    e = geodesic_sphere(n, take("rho", pi / 4));
  } else if (name == "clifford" || name == "clifford_torus") {
    e = clifford_torus(take("rho", pi / 4));
  } else if (name == "genclifford" || name == "generalized_clifford") {
    const int p = as_int(take("p", 2), "p");
    const int q = as_int(take("q", 1), "q");
    if (kv.count("n") && as_int(kv["n"], "n") != p + q) throw InvalidParameter("generalized_clifford: p + q != n");
    kv.erase("n");
    e = generalized_clifford(p, q, take("rho", pi / 3));
  } else if (name == "perturbed" || name == "perturbed_graph") {
    const int n = as_int(take("n", 2), "n");
    const double eps = take("eps", 0.03);
    e = perturbed_graph(eps, take("rho", pi / 4), n);
  } else {
    throw InvalidParameter("unknown catalog entry '" + name + "'");
  }
  if (!kv.empty()) throw InvalidParameter("unknown parameter '" + kv.begin()->first + "' for entry '" + name + "'");
  if (flip) {
    e.patch.flip = !e.patch.flip;
    e.params["flip"] = 1;
    const auto normal = e.conventional_normal;
    e.conventional_normal = [normal](const Vec<double>& p) { return scaled(normal(p), -1.0); };
    if (e.expected_lambdas) {
      const auto lam = e.expected_lambdas;
      e.expected_lambdas = [lam](const Vec<double>& p) {
        auto l = lam(p);
        for (auto& v : l) v = -v;
        std::sort(l.rbegin(), l.rend());
        return l;
      };
    }
    e.patch.name = e.label();
  }
  return e;
}

}  // namespace qgauss
