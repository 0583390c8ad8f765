#pragma once

#include <span>
#include <vector>

#include "lfot/connection.hpp"

namespace lfot {

// Curvature endomorphism components
//   R^a_b(v) = 2 dG^a/dx^b
//              - sum_d ( dN^a_b/dx^d v^d - 2 dN^a_b/dv^d G^d )
//              - sum_d N^a_d N^d_b.
template <class M>
Matd curvature_matrix(const M& m, std::span<const double> x, std::span<const double> v) {
  const int n = m.dim();
  using D = Dual<double>;

  auto G = spray<double>(m, x, v);
  Matd N = nonlinear_connection<double>(m, x, v);

  std::vector<D> xd(n), vd(n);
  for (int i = 0; i < n; ++i) {
    xd[i] = D(x[i], 0.0);
    vd[i] = D(v[i], 0.0);
  }

  // dG^a/dx^b
  Matd dGdx(n, n);
  for (int b = 0; b < n; ++b) {
    xd[b].b = 1.0;
    auto Gd = spray<D>(m, std::span<const D>(xd), std::span<const D>(vd));
    xd[b].b = 0.0;
    for (int a = 0; a < n; ++a) dGdx(a, b) = Gd[a].b;
  }

  // dN^a_b/dx^d and dN^a_b/dv^d
  std::vector<Matd> dNdx(n, Matd(n, n)), dNdv(n, Matd(n, n));
  for (int d = 0; d < n; ++d) {
    xd[d].b = 1.0;
    Mat<D> Nx = nonlinear_connection<D>(m, std::span<const D>(xd), std::span<const D>(vd));
    xd[d].b = 0.0;
    vd[d].b = 1.0;
    Mat<D> Nv = nonlinear_connection<D>(m, std::span<const D>(xd), std::span<const D>(vd));
    vd[d].b = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        dNdx[d](a, b) = Nx(a, b).b;
        dNdv[d](a, b) = Nv(a, b).b;
      }
  }

  Matd R(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 2.0 * dGdx(a, b);
      for (int d = 0; d < n; ++d) {
        s -= dNdx[d](a, b) * v[d] - 2.0 * dNdv[d](a, b) * G[d];
        s -= N(a, d) * N(d, b);
      }
      R(a, b) = s;
    }
  return R;
}

template <class M>
std::vector<double> curvature_endomorphism(const M& m, std::span<const double> x,
                                           std::span<const double> v, std::span<const double> w) {
  Matd R = curvature_matrix(m, x, v);
  return matvec(R, w);
}

template <class M>
double ricci(const M& m, std::span<const double> x, std::span<const double> v) {
  return trace(curvature_matrix(m, x, v));
}

}  // namespace lfot
