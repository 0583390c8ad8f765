#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lfot/curvature.hpp"
#include "lfot/geodesic.hpp"

namespace lfot {

// Jacobi matrix data in a g-parallel frame along a timelike geodesic.
// frames[k] has the frame vectors as columns, with column 0 proportional to
// the tangent; J/Jp are the frame components of the Jacobi matrix and its
// covariant derivative.
struct JacobiFrame {
  GeodesicSegment along;
  std::vector<Matd> frames;
  std::vector<Matd> J, Jp;
  int reorthonormalizations = 0;
};

namespace detail {

template <class M>
Matd initial_frame(const M& m, std::span<const double> x, std::span<const double> v) {
  return g_orthonormal_frame(m, x, v);
}

inline double frame_pairing_error(const Matd& g, const Matd& E) {
  int n = g.rows;
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += g(i, j) * E(i, a) * E(j, b);
      double eta = (a == b) ? (a == 0 ? -1.0 : 1.0) : 0.0;
      worst = std::max(worst, std::fabs(s - eta));
    }
  return worst;
}

// Frame-component curvature matrix Rf_{db} = g(R_v(E_d), E_b).
template <class M>
Matd frame_curvature(const M& m, std::span<const double> x, std::span<const double> v,
                     const Matd& E) {
  const int n = m.dim();
  Matd R = curvature_matrix(m, x, v);
  Matd g = metric_tensor(m, x, v);
  Matd RE = R * E;          // columns: R(E_d) in coordinates
  Matd gRE = g * RE;        // metric applied
  Matd Rf(n, n);
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += E(i, b) * gRE(i, d);
      Rf(d, b) = s;
    }
  return Rf;
}

struct JacobiState {
  std::vector<double> x, v;
  Matd E, J, Jp;
};

template <class M>
JacobiState jacobi_derivative(const M& m, const JacobiState& s) {
  const int n = m.dim();
  JacobiState d;
  d.x = s.v;
  d.v = spray<double>(m, s.x, s.v);
  for (auto& g : d.v) g *= -2.0;

  ConnectionData conn = connection_at(m, s.x, s.v);
  d.E = Matd(n, n);
  for (int a = 0; a < n; ++a) {
    std::vector<double> Ea(n);
    for (int i = 0; i < n; ++i) Ea[i] = s.E(i, a);
    auto gamma = chern_contract(conn, s.v, Ea);
    for (int i = 0; i < n; ++i) d.E(i, a) = -gamma[i];
  }

  Matd Rf = frame_curvature(m, s.x, s.v, s.E);
  d.J = s.Jp;
  d.Jp = Matd(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (int dd = 0; dd < n; ++dd) acc += s.J(a, dd) * Rf(dd, b);
      d.Jp(a, b) = -acc;
    }
  return d;
}

inline void axpy(JacobiState& y, double c, const JacobiState& d) {
  for (size_t i = 0; i < y.x.size(); ++i) y.x[i] += c * d.x[i];
  for (size_t i = 0; i < y.v.size(); ++i) y.v[i] += c * d.v[i];
  for (size_t i = 0; i < y.E.d.size(); ++i) y.E.d[i] += c * d.E.d[i];
  for (size_t i = 0; i < y.J.d.size(); ++i) y.J.d[i] += c * d.J.d[i];
  for (size_t i = 0; i < y.Jp.d.size(); ++i) y.Jp.d[i] += c * d.Jp.d[i];
}

}  // namespace detail

// Propagate the Jacobi matrix ODE J'' = -J Rf in a g-parallel frame along
// the geodesic that generated `along` (re-integrated on the same grid).
// J0 and Jp0 are frame components at t = 0.
template <class M>
JacobiFrame jacobi_propagate(const M& m, const GeodesicSegment& along, const Matd& J0,
                             const Matd& Jp0) {
  const int n = m.dim();
  if (along.times.size() < 2) throw std::invalid_argument("jacobi_propagate: empty segment");

  detail::JacobiState s;
  s.x = along.points.front();
  s.v = along.tangents.front();
  s.E = detail::initial_frame(m, s.x, s.v);
  s.J = J0;
  s.Jp = Jp0;

  JacobiFrame out;
  out.along = along;
  out.frames.push_back(s.E);
  out.J.push_back(s.J);
  out.Jp.push_back(s.Jp);

  for (size_t k = 1; k < along.times.size(); ++k) {
    double h = along.times[k] - along.times[k - 1];
    auto k1 = detail::jacobi_derivative(m, s);
    auto s2 = s;
    detail::axpy(s2, 0.5 * h, k1);
    auto k2 = detail::jacobi_derivative(m, s2);
    auto s3 = s;
    detail::axpy(s3, 0.5 * h, k2);
    auto k3 = detail::jacobi_derivative(m, s3);
    auto s4 = s;
    detail::axpy(s4, h, k3);
    auto k4 = detail::jacobi_derivative(m, s4);
    detail::axpy(s, h / 6.0, k1);
    detail::axpy(s, h / 3.0, k2);
    detail::axpy(s, h / 3.0, k3);
    detail::axpy(s, h / 6.0, k4);

    Matd g = metric_tensor(m, s.x, s.v);
    if (detail::frame_pairing_error(g, s.E) > 1e-9) {
      // re-orthonormalize, keeping column 0 aligned with the tangent
      s.E = detail::initial_frame(m, s.x, s.v);
      ++out.reorthonormalizations;
    }
    out.frames.push_back(s.E);
    out.J.push_back(s.J);
    out.Jp.push_back(s.Jp);
  }
  return out;
}

struct RiccatiReport {
  std::vector<double> residual;      // trace identity defect per node (ODE form)
  std::vector<double> residual_fd;   // same with B' from centered differences
  double max_abs = 0.0;
  double max_abs_fd = 0.0;
};

// Defect of trace[B'] + trace[B^2] + Ric(tangent) with B = J' J^{-1}; B'
// from the matrix Riccati equation, cross-checked against finite
// differences of B on the grid.
template <class M>
RiccatiReport riccati_residual(const M& m, const JacobiFrame& fr) {
  const size_t nodes = fr.along.times.size();
  const int n = m.dim();

  std::vector<Matd> B(nodes);
  std::vector<double> trB2(nodes), ric(nodes), trRf(nodes);
  for (size_t k = 0; k < nodes; ++k) {
    Matd Jk = fr.J[k];
    double dj = std::fabs(determinant(Jk));
    if (dj < 1e-12)
      throw SolverError("riccati_residual: singular Jacobi matrix (conjugate point)");
    B[k] = fr.Jp[k] * inverse(Jk);
    Matd B2 = B[k] * B[k];
    trB2[k] = trace(B2);
    const auto& x = fr.along.points[k];
    const auto& v = fr.along.tangents[k];
    ric[k] = ricci(m, x, v);
    trRf[k] = trace(detail::frame_curvature(m, x, v, fr.frames[k]));
  }

  RiccatiReport rep;
  rep.residual.resize(nodes);
  rep.residual_fd.assign(nodes, 0.0);
  for (size_t k = 0; k < nodes; ++k) {
    // trace[B'] from B' = -J Rf J^{-1} - B^2 collapses to -trace[Rf]
    rep.residual[k] = -trRf[k] + ric[k];
    rep.max_abs = std::max(rep.max_abs, std::fabs(rep.residual[k]));
  }
  for (size_t k = 1; k + 1 < nodes; ++k) {
    double h = fr.along.times[k + 1] - fr.along.times[k - 1];
    Matd dB = B[k + 1] - B[k - 1];
    double trBp = trace(dB) / h;
    rep.residual_fd[k] = trBp + trB2[k] + ric[k];
    rep.max_abs_fd = std::max(rep.max_abs_fd, std::fabs(rep.residual_fd[k]));
  }
  return rep;
}

}  // namespace lfot
