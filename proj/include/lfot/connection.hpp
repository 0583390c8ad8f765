#pragma once

#include <span>
#include <vector>

#include "lfot/core.hpp"

namespace lfot {

// dg_ab/dx^lam; result[lam](a,b).
template <class S, class M>
std::vector<Mat<S>> metric_dx(const M& m, std::span<const S> x, std::span<const S> v) {
  const int n = m.dim();
  using D = Dual<S>;
  std::vector<D> xd(n), vd(n);
  for (int i = 0; i < n; ++i) {
    xd[i] = D(x[i], S(0.0));
    vd[i] = D(v[i], S(0.0));
  }
  std::vector<Mat<S>> out(n);
  for (int lam = 0; lam < n; ++lam) {
    xd[lam].b = S(1.0);
    Mat<D> g = metric_t<D>(m, std::span<const D>(xd), std::span<const D>(vd));
    xd[lam].b = S(0.0);
    Mat<S> gl(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) gl(a, b) = g(a, b).b;
    out[lam] = std::move(gl);
  }
  return out;
}

// dg_ab/dv^mu; result[mu](a,b).
template <class S, class M>
std::vector<Mat<S>> metric_dv(const M& m, std::span<const S> x, std::span<const S> v) {
  const int n = m.dim();
  using D = Dual<S>;
  std::vector<D> xd(n), vd(n);
  for (int i = 0; i < n; ++i) {
    xd[i] = D(x[i], S(0.0));
    vd[i] = D(v[i], S(0.0));
  }
  std::vector<Mat<S>> out(n);
  for (int mu = 0; mu < n; ++mu) {
    vd[mu].b = S(1.0);
    Mat<D> g = metric_t<D>(m, std::span<const D>(xd), std::span<const D>(vd));
    vd[mu].b = S(0.0);
    Mat<S> gm(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) gm(a, b) = g(a, b).b;
    out[mu] = std::move(gm);
  }
  return out;
}

// Formal Christoffel symbols GammaBar^a_{bd}(v), flattened as (a*n+b)*n+d.
template <class S, class M>
std::vector<S> formal_christoffel(const M& m, std::span<const S> x, std::span<const S> v) {
  const int n = m.dim();
  Mat<S> g = metric_t<S>(m, x, v);
  Mat<S> ginv = inverse(g);
  auto dgdx = metric_dx<S>(m, x, v);
  std::vector<S> gamma(static_cast<size_t>(n) * n * n, S(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        S s(0.0);
        for (int l = 0; l < n; ++l)
          s += ginv(a, l) * (dgdx[b](l, d) + dgdx[d](b, l) - dgdx[l](b, d));
        gamma[(static_cast<size_t>(a) * n + b) * n + d] = 0.5 * s;
      }
  return gamma;
}

// Geodesic spray G^a(x,v) = GammaBar^a_{bd} v^b v^d / 2, contracted before
// the inverse metric is applied.
template <class S, class M>
std::vector<S> spray(const M& m, std::span<const S> x, std::span<const S> v) {
  const int n = m.dim();
  Mat<S> g = metric_t<S>(m, x, v);
  auto dgdx = metric_dx<S>(m, x, v);
  std::vector<S> rhs(n, S(0.0));
  for (int l = 0; l < n; ++l) {
    S s(0.0);
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        s += (2.0 * dgdx[d](l, b) - dgdx[l](b, d)) * v[b] * v[d];
    rhs[l] = 0.25 * s;
  }
  return solve(g, rhs);
}

// N^a_b(v) = dG^a/dv^b.
template <class S, class M>
Mat<S> nonlinear_connection(const M& m, std::span<const S> x, std::span<const S> v) {
  const int n = m.dim();
  using D = Dual<S>;
  std::vector<D> xd(n), vd(n);
  for (int i = 0; i < n; ++i) {
    xd[i] = D(x[i], S(0.0));
    vd[i] = D(v[i], S(0.0));
  }
  Mat<S> N(n, n);
  for (int b = 0; b < n; ++b) {
    vd[b].b = S(1.0);
    auto Gd = spray<D>(m, std::span<const D>(xd), std::span<const D>(vd));
    vd[b].b = S(0.0);
    for (int a = 0; a < n; ++a) N(a, b) = Gd[a].b;
  }
  return N;
}

struct ConnectionData {
  std::vector<double> ref_x, ref_v;   // evaluation point (x, v)
  std::vector<double> spray;          // G^a
  Matd nonlinear;                     // N^a_b
  std::vector<double> formal;         // GammaBar^a_{bd}, (a*n+b)*n+d
  std::vector<double> chern;          // Gamma^a_{bd}, same layout
  int n = 0;

  double chern_at(int a, int b, int d) const {
    return chern[(static_cast<size_t>(a) * n + b) * n + d];
  }
  double formal_at(int a, int b, int d) const {
    return formal[(static_cast<size_t>(a) * n + b) * n + d];
  }
};

// Chern connection coefficients at a timelike reference vector.
template <class M>
ConnectionData connection_at(const M& m, std::span<const double> x, std::span<const double> v) {
  const int n = m.dim();
  ConnectionData out;
  out.n = n;
  out.ref_x.assign(x.begin(), x.end());
  out.ref_v.assign(v.begin(), v.end());
  out.spray = spray<double>(m, x, v);
  out.nonlinear = nonlinear_connection<double>(m, x, v);
  out.formal = formal_christoffel<double>(m, x, v);

  Matd g = metric_t<double>(m, x, v);
  Matd ginv = inverse(g);
  auto dgdv = metric_dv<double>(m, x, v);
  const Matd& N = out.nonlinear;

  out.chern.assign(static_cast<size_t>(n) * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        double corr = 0.0;
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int mu = 0; mu < n; ++mu)
            s += dgdv[mu](l, d) * N(mu, b) + dgdv[mu](b, l) * N(mu, d) -
                 dgdv[mu](b, d) * N(mu, l);
          corr += ginv(a, l) * s;
        }
        out.chern[(static_cast<size_t>(a) * n + b) * n + d] =
            out.formal_at(a, b, d) - 0.5 * corr;
      }
  return out;
}

// Gamma^a_{bd}(ref) u^b w^d for a precomputed connection.
inline std::vector<double> chern_contract(const ConnectionData& c, std::span<const double> u,
                                          std::span<const double> w) {
  std::vector<double> out(c.n, 0.0);
  for (int a = 0; a < c.n; ++a) {
    double s = 0.0;
    for (int b = 0; b < c.n; ++b)
      for (int d = 0; d < c.n; ++d) s += c.chern_at(a, b, d) * u[b] * w[d];
    out[a] = s;
  }
  return out;
}

}  // namespace lfot
