#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qgauss/dual.hpp"
#include "qgauss/errors.hpp"
#include "qgauss/random.hpp"

namespace qgauss {

template <class S>
using Vec = std::vector<S>;

// Columns of a jacobian, one per chart coordinate.
template <class S>
using Columns = std::vector<Vec<S>>;

enum class DiffScheme { dual, fd };

inline const char* to_string(DiffScheme s) { return s == DiffScheme::dual ? "dual" : "fd"; }

// Axis-aligned open box in R^n.
struct Box {
  Vec<double> lo;
  Vec<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }

  Vec<double> center() const {
    Vec<double> c(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }

  bool contains(const Vec<double>& p) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(p[i] > lo[i] && p[i] < hi[i])) return false;
    return true;
  }

  Vec<double> sample(SplitRng& rng) const {
    Vec<double> p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
    return p;
  }
};

// Smooth map R^in -> R^out that can be evaluated on doubles and on dual
// numbers up to kMaxDualDepth levels of nesting.  Built from any generic
// callable `f(const Vec<S>&) -> Vec<S>`.
class VectorMap {
 public:
  VectorMap() = default;

  template <class F>
  VectorMap(int in_dim, int out_dim, F f)
      : in_(in_dim), out_(out_dim), impl_(std::make_shared<Model<F>>(std::move(f))) {}

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  explicit operator bool() const { return static_cast<bool>(impl_); }

  template <class S>
  Vec<S> operator()(const Vec<S>& p) const {
    if constexpr (dual_depth<S>::value <= kMaxDualDepth) {
      return impl_->eval(p);
    } else {
      throw DepthExceeded("map evaluation needs more than " + std::to_string(kMaxDualDepth) +
                          " nested derivative levels");
    }
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual Vec<double> eval(const Vec<double>& p) const = 0;
    virtual Vec<D1> eval(const Vec<D1>& p) const = 0;
    virtual Vec<D2> eval(const Vec<D2>& p) const = 0;
    virtual Vec<D3> eval(const Vec<D3>& p) const = 0;
    virtual Vec<D4> eval(const Vec<D4>& p) const = 0;
  };

  template <class F>
  struct Model final : Concept {
    explicit Model(F fn) : f(std::move(fn)) {}
    Vec<double> eval(const Vec<double>& p) const override { return f(p); }
    Vec<D1> eval(const Vec<D1>& p) const override { return f(p); }
    Vec<D2> eval(const Vec<D2>& p) const override { return f(p); }
    Vec<D3> eval(const Vec<D3>& p) const override { return f(p); }
    Vec<D4> eval(const Vec<D4>& p) const override { return f(p); }
    F f;
  };

  int in_ = 0;
  int out_ = 0;
  std::shared_ptr<const Concept> impl_;
};

template <class S>
Vec<Dual<S>> seed_direction(const Vec<S>& p, const Vec<double>& dir) {
  Vec<Dual<S>> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = Dual<S>(p[i], S(dir[i]));
  return q;
}

inline Vec<double> unit_vector(int n, int j) {
  Vec<double> e(static_cast<std::size_t>(n), 0.0);
  e[static_cast<std::size_t>(j)] = 1.0;
  return e;
}

// Value and jacobian columns from one dual pass per coordinate.
template <class F, class S>
std::pair<Vec<S>, Columns<S>> jet1(const F& f, const Vec<S>& p) {
  const int n = static_cast<int>(p.size());
  Vec<S> value;
  Columns<S> cols(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto y = f(seed_direction(p, unit_vector(n, j)));
    if (j == 0) {
      value.resize(y.size());
      for (std::size_t k = 0; k < y.size(); ++k) value[k] = y[k].v;
    }
    cols[j].resize(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) cols[j][k] = y[k].d;
  }
  if (n == 0) value = f(p);
  return {std::move(value), std::move(cols)};
}

template <class F, class S>
Vec<S> directional_derivative(const F& f, const Vec<S>& p, const Vec<double>& v) {
  auto y = f(seed_direction(p, v));
  Vec<S> out(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) out[k] = y[k].d;
  return out;
}

inline double fd_step1(double x) { return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x)); }
inline double fd_step2(double x) {
  return std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon())) * std::max(1.0, std::abs(x));
}

inline void check_finite(const Vec<double>& y) {
  for (double v : y)
    if (!std::isfinite(v)) throw InvalidParameter("non-finite map value: invalid chart point");
}

// Central-difference jacobian with h = eps^(1/3) max(1, |p_j|).
inline Columns<double> jacobian_fd(const VectorMap& f, const Vec<double>& p) {
  const std::size_t n = p.size();
  Columns<double> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = fd_step1(p[j]);
    Vec<double> pp = p, pm = p;
    pp[j] += h;
    pm[j] -= h;
    const double width = pp[j] - pm[j];
    auto yp = f(pp);
    auto ym = f(pm);
    cols[j].resize(yp.size());
    for (std::size_t k = 0; k < yp.size(); ++k) cols[j][k] = (yp[k] - ym[k]) / width;
  }
  return cols;
}

struct Jacobian {
  Vec<double> value;
  Columns<double> columns;
  DiffScheme scheme = DiffScheme::dual;
};

inline Jacobian jacobian(const VectorMap& f, const Vec<double>& p, DiffScheme scheme = DiffScheme::dual) {
  Jacobian out;
  out.scheme = scheme;
  if (scheme == DiffScheme::dual) {
    auto [v, c] = jet1(f, p);
    out.value = std::move(v);
    out.columns = std::move(c);
  } else {
    out.value = f(p);
    out.columns = jacobian_fd(f, p);
  }
  check_finite(out.value);
  for (const auto& c : out.columns) check_finite(c);
  return out;
}

// hessian[j][k] is the vector d^2 f / dp_j dp_k.
using Hessian = std::vector<std::vector<Vec<double>>>;

inline Hessian hessian(const VectorMap& f, const Vec<double>& p, DiffScheme scheme = DiffScheme::dual) {
  const int n = static_cast<int>(p.size());
  Hessian h(static_cast<std::size_t>(n), std::vector<Vec<double>>(static_cast<std::size_t>(n)));
  if (scheme == DiffScheme::dual) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        Vec<D2> q(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          q[i] = D2(D1(p[i], i == j ? 1.0 : 0.0), D1(i == k ? 1.0 : 0.0, 0.0));
        auto y = f(q);
        Vec<double> col(y.size());
        for (std::size_t m = 0; m < y.size(); ++m) col[m] = y[m].d.d;
        h[j][k] = col;
        h[k][j] = std::move(col);
      }
    }
    return h;
  }
  const auto f0 = f(p);
  for (int j = 0; j < n; ++j) {
    const double hj = fd_step2(p[j]);
    for (int k = j; k < n; ++k) {
      Vec<double> col(f0.size());
      if (j == k) {
        Vec<double> pp = p, pm = p;
        pp[j] += hj;
        pm[j] -= hj;
        auto yp = f(pp), ym = f(pm);
        for (std::size_t m = 0; m < col.size(); ++m) col[m] = (yp[m] - 2.0 * f0[m] + ym[m]) / (hj * hj);
      } else {
        const double hk = fd_step2(p[k]);
        auto at = [&](double sj, double sk) {
          Vec<double> q = p;
          q[j] += sj * hj;
          q[k] += sk * hk;
          return f(q);
        };
        auto ypp = at(1, 1), ypm = at(1, -1), ymp = at(-1, 1), ymm = at(-1, -1);
        for (std::size_t m = 0; m < col.size(); ++m)
          col[m] = (ypp[m] - ypm[m] - ymp[m] + ymm[m]) / (4.0 * hj * hk);
      }
      h[j][k] = col;
      h[k][j] = std::move(col);
    }
  }
  return h;
}

}  // namespace qgauss
