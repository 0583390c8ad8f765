#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfot/dual.hpp"
#include "lfot/extended.hpp"
#include "lfot/linalg.hpp"

namespace lfot {

// A spacetime model is any type providing:
//
//   int  dim() const;
//   template <class T>
//   T    lagrangian(std::span<const T> x, std::span<const T> v) const;
//   void time_orientation(std::span<const double> x, std::span<double> out) const;
//   template <class T>
//   T    weight(std::span<const T> x, std::span<const T> v) const;   // psi_m
//   bool has_weight() const;
//   double measure_density(std::span<const double> x) const;         // dm / dx
//   bool is_flat() const;        // x-independent L: straight geodesics, closed-form l
//   double chart_bound() const;  // coordinate guard for integration
//
// The Lagrangian must be positively 2-homogeneous in v with a v-Hessian of
// signature (-,+,...,+) on the timelike cone; all derivative machinery below
// evaluates it on nested Dual scalars, so branches inside a model must
// compare value() parts only.

struct Point {
  std::vector<double> coords;
};

enum class CausalKind { timelike, lightlike, spacelike, zero };

struct CausalClass {
  CausalKind kind = CausalKind::zero;
  std::optional<bool> future_directed;  // present iff kind is causal nonzero
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S>
std::vector<S> promote(std::span<const double> x) {
  std::vector<S> r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = S(x[i]);
  return r;
}

inline std::vector<double> values_of(std::span<const double> x) {
  return {x.begin(), x.end()};
}
template <class S>
std::vector<double> values_of(std::span<const S> x) {
  std::vector<double> r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = value(x[i]);
  return r;
}

template <class M>
double lagrangian_eval(const M& m, std::span<const double> x, std::span<const double> v) {
  return m.lagrangian(x, v);
}

// dL/dv^a in scalar type S.
template <class S, class M>
std::vector<S> lagrangian_grad_v(const M& m, std::span<const S> x, std::span<const S> v) {
  const int n = m.dim();
  std::vector<Dual<S>> xd(n), vd(n);
  for (int i = 0; i < n; ++i) {
    xd[i] = Dual<S>(x[i], S(0.0));
    vd[i] = Dual<S>(v[i], S(0.0));
  }
  std::vector<S> g(n);
  for (int k = 0; k < n; ++k) {
    vd[k].b = S(1.0);
    g[k] = m.lagrangian(std::span<const Dual<S>>(xd), std::span<const Dual<S>>(vd)).b;
    vd[k].b = S(0.0);
  }
  return g;
}

// g_ab(x,v) = d^2 L / dv^a dv^b, symmetrized.
template <class S, class M>
Mat<S> metric_t(const M& m, std::span<const S> x, std::span<const S> v) {
  const int n = m.dim();
  using D2 = Dual<Dual<S>>;
  std::vector<D2> xd(n), vd(n);
  for (int i = 0; i < n; ++i) {
    xd[i] = D2(Dual<S>(x[i], S(0.0)), Dual<S>(S(0.0), S(0.0)));
    vd[i] = D2(Dual<S>(v[i], S(0.0)), Dual<S>(S(0.0), S(0.0)));
  }
  Mat<S> g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      vd[i].a.b = S(1.0);
      vd[j].b.a = S(1.0);
      S gij = m.lagrangian(std::span<const D2>(xd), std::span<const D2>(vd)).b.b;
      vd[i].a.b = S(0.0);
      vd[j].b.a = S(0.0);
      g(i, j) = gij;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

template <class M>
Matd metric_tensor(const M& m, std::span<const double> x, std::span<const double> v) {
  return metric_t<double>(m, x, v);
}

// g_v(a, b)
template <class M>
double metric_pairing(const M& m, std::span<const double> x, std::span<const double> v,
                      std::span<const double> a, std::span<const double> b) {
  Matd g = metric_tensor(m, x, v);
  double s = 0.0;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) s += g(i, j) * a[i] * b[j];
  return s;
}

template <class M>
CausalClass classify(const M& m, std::span<const double> x, std::span<const double> v) {
  bool all_zero = true;
  for (double c : v)
    if (c != 0.0) { all_zero = false; break; }
  if (all_zero) return {CausalKind::zero, std::nullopt};

  double L = m.lagrangian(x, v);
  CausalClass out;
  if (L < 0.0)
    out.kind = CausalKind::timelike;
  else if (L == 0.0)
    out.kind = CausalKind::lightlike;
  else
    return {CausalKind::spacelike, std::nullopt};

  // Future direction by the sign of g_X(X, v) with X the time orientation;
  // agrees with cone-component membership for all built-in models.
  const int n = m.dim();
  std::vector<double> X(n);
  m.time_orientation(x, X);
  out.future_directed = metric_pairing(m, x, X, X, v) < 0.0;
  return out;
}

template <class M>
bool is_timelike_future(const M& m, std::span<const double> x, std::span<const double> v) {
  CausalClass c = classify(m, x, v);
  return c.kind == CausalKind::timelike && c.future_directed.value_or(false);
}

template <class M>
bool is_causal_future(const M& m, std::span<const double> x, std::span<const double> v) {
  CausalClass c = classify(m, x, v);
  return (c.kind == CausalKind::timelike || c.kind == CausalKind::lightlike) &&
         c.future_directed.value_or(false);
}

// F(v) = sqrt(-2 L(v)) for causal v.
template <class M>
double f_norm(const M& m, std::span<const double> x, std::span<const double> v) {
  CausalClass c = classify(m, x, v);
  if (c.kind == CausalKind::zero) return 0.0;
  if (c.kind == CausalKind::spacelike)
    throw std::domain_error("f_norm: spacelike vector");
  double L = m.lagrangian(x, v);
  return std::sqrt(std::max(0.0, -2.0 * L));
}

template <class S, class M>
S f_norm_t(const M& m, std::span<const S> x, std::span<const S> v) {
  S L = m.lagrangian(x, v);
  return sqrt(-2.0 * L);
}

// Fiberwise Legendre transform: v -> dL/dv(v), defined on timelike
// future-directed vectors.
template <class M>
std::vector<double> legendre_map(const M& m, std::span<const double> x, std::span<const double> v) {
  if (!is_timelike_future(m, x, v))
    throw std::domain_error("legendre_map: vector not timelike future-directed");
  return lagrangian_grad_v<double>(m, x, v);
}

struct LegendreOptions {
  int max_iter = 100;
  double tol = 1e-12;
};

// Inverse Legendre transform by damped Newton on dL/dv(v) = zeta. Runs in
// any scalar S: with dual inputs the converged dual parts carry the exact
// implicit derivative of the solution map.
template <class S, class M>
std::optional<std::vector<S>> try_legendre_inverse_t(const M& m, std::span<const S> x,
                                                     std::span<const S> zeta,
                                                     LegendreOptions opt = {}) {
  const int n = m.dim();
  std::vector<double> xval = values_of(x);
  std::vector<double> X(n);
  m.time_orientation(xval, X);
  std::vector<S> Xs = promote<S>(X);

  S LX = m.lagrangian(x, std::span<const S>(Xs));
  S FX = sqrt(-2.0 * LX);
  // seed c * X/F(X) with c = -zeta(X/F(X)); c <= 0 means zeta is already
  // outside the polar cone
  S c(0.0);
  for (int i = 0; i < n; ++i) c += zeta[i] * Xs[i];
  c = -1.0 * c / FX;
  if (value(c) <= 0.0) return std::nullopt;

  std::vector<S> v(n);
  for (int i = 0; i < n; ++i) v[i] = c * Xs[i] / FX;

  double zscale = 1.0;
  for (int i = 0; i < n; ++i) zscale = std::max(zscale, std::fabs(value(zeta[i])));

  auto residual = [&](const std::vector<S>& w) {
    std::vector<S> r = lagrangian_grad_v<S>(m, x, std::span<const S>(w));
    for (int i = 0; i < n; ++i) r[i] -= zeta[i];
    return r;
  };
  auto rnorm = [&](const std::vector<S>& r) {
    double s = 0.0;
    for (const S& e : r) s += value(e) * value(e);
    return std::sqrt(s);
  };

  std::vector<S> r = residual(v);
  double rn = rnorm(r);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (rn <= opt.tol * zscale) break;
    Mat<S> J = metric_t<S>(m, x, std::span<const S>(v));
    std::vector<S> step;
    try {
      step = solve(J, r);
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
    double alpha = 1.0;
    bool ok = false;
    for (int h = 0; h < 60; ++h) {
      std::vector<S> vn(n);
      for (int i = 0; i < n; ++i) vn[i] = v[i] - alpha * step[i];
      if (m.lagrangian(x, std::span<const S>(vn)) < 0.0) {
        std::vector<S> rnew = residual(vn);
        double rnn = rnorm(rnew);
        if (rnn < rn) {
          v = std::move(vn);
          r = std::move(rnew);
          rn = rnn;
          ok = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!ok) return std::nullopt;
  }
  if (rn > opt.tol * zscale * 10.0) return std::nullopt;
  std::vector<double> vval = values_of(std::span<const S>(v));
  if (!is_timelike_future(m, xval, vval)) return std::nullopt;
  return v;
}

template <class M>
std::vector<double> legendre_inverse(const M& m, std::span<const double> x,
                                     std::span<const double> zeta, LegendreOptions opt = {}) {
  auto v = try_legendre_inverse_t<double>(m, x, zeta, opt);
  if (!v)
    throw SolverError("legendre_inverse: no convergence (covector outside polar cone?)");
  return *v;
}

// g_v-orthonormal frame at x with column 0 = v / F(v); the spacelike columns
// are Gram-Schmidt completions of coordinate directions.
template <class M>
Mat<double> g_orthonormal_frame(const M& m, std::span<const double> x,
                                std::span<const double> v) {
  const int n = m.dim();
  Matd g = metric_tensor(m, x, v);
  auto pair = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += g(i, j) * a[i] * b[j];
    return s;
  };
  std::vector<std::vector<double>> e;
  double F = std::sqrt(-pair(v, v));
  std::vector<double> e1(v.begin(), v.end());
  for (auto& c : e1) c /= F;
  e.push_back(e1);
  for (int cand = 0; cand < n && static_cast<int>(e.size()) < n; ++cand) {
    std::vector<double> w(n, 0.0);
    w[cand] = 1.0;
    for (const auto& ej : e) {
      double c = pair(w, ej) / pair(ej, ej);
      for (int i = 0; i < n; ++i) w[i] -= c * ej[i];
    }
    double nn = pair(w, w);
    if (nn < 1e-10) continue;
    double inv = 1.0 / std::sqrt(nn);
    for (auto& c : w) c *= inv;
    e.push_back(std::move(w));
  }
  if (static_cast<int>(e.size()) != n)
    throw SolverError("g_orthonormal_frame: could not complete a frame");
  Matd E(n, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) E(i, a) = e[a][i];
  return E;
}

// L_q(v) = -F(v)^q / q on the closed future causal cone, +inf otherwise,
// with L_q(0) = 0.
template <class M>
double q_lagrangian(const M& m, std::span<const double> x, std::span<const double> v, double q) {
  CausalClass c = classify(m, x, v);
  if (c.kind == CausalKind::zero) return 0.0;
  if ((c.kind == CausalKind::timelike || c.kind == CausalKind::lightlike) &&
      c.future_directed.value_or(false)) {
    double F = std::sqrt(std::max(0.0, -2.0 * m.lagrangian(x, v)));
    return -std::pow(F, q) / q;
  }
  return inf();
}

// H_q(zeta) = -F*(zeta)^p / p on the polar cone (p the dual exponent of q),
// +inf otherwise. For q = 1 this degenerates to the indicator of
// {L* <= -1/2}.
template <class M>
double q_hamiltonian(const M& m, std::span<const double> x, std::span<const double> zeta,
                     double q) {
  auto v = try_legendre_inverse_t<double>(m, x, zeta);
  if (!v) return inf();
  double Lstar = m.lagrangian(x, std::span<const double>(*v));
  if (q == 1.0) return Lstar <= -0.5 ? 0.0 : inf();
  double p = q / (q - 1.0);
  double Fstar = std::sqrt(std::max(0.0, -2.0 * Lstar));
  return -std::pow(Fstar, p) / p;
}

}  // namespace lfot
