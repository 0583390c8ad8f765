#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lfot/connection.hpp"
#include "lfot/core.hpp"

namespace lfot {

struct BlowUpError : SolverError {
  using SolverError::SolverError;
};
struct CausalityError : SolverError {
  using SolverError::SolverError;
};

struct GeodesicSegment {
  std::vector<double> times;                   // increasing grid on [0, T]
  std::vector<std::vector<double>> points;     // per node
  std::vector<std::vector<double>> tangents;   // per node
  std::optional<double> action_q;              // value of the q-action when set
};

namespace detail {

// One RK4 step of xdot = v, vdot = -2 G(x, v).
template <class S, class M>
void geodesic_rk4_step(const M& m, std::vector<S>& x, std::vector<S>& v, double h) {
  const int n = m.dim();
  auto acc = [&](const std::vector<S>& xx, const std::vector<S>& vv) {
    auto G = spray<S>(m, std::span<const S>(xx), std::span<const S>(vv));
    for (auto& g : G) g *= -2.0;
    return G;
  };
  std::vector<S> k1x = v, k1v = acc(x, v);
  std::vector<S> x2(n), v2(n);
  for (int i = 0; i < n; ++i) {
    x2[i] = x[i] + 0.5 * h * k1x[i];
    v2[i] = v[i] + 0.5 * h * k1v[i];
  }
  std::vector<S> k2x = v2, k2v = acc(x2, v2);
  std::vector<S> x3(n), v3(n);
  for (int i = 0; i < n; ++i) {
    x3[i] = x[i] + 0.5 * h * k2x[i];
    v3[i] = v[i] + 0.5 * h * k2v[i];
  }
  std::vector<S> k3x = v3, k3v = acc(x3, v3);
  std::vector<S> x4(n), v4(n);
  for (int i = 0; i < n; ++i) {
    x4[i] = x[i] + h * k3x[i];
    v4[i] = v[i] + h * k3v[i];
  }
  std::vector<S> k4x = v4, k4v = acc(x4, v4);
  for (int i = 0; i < n; ++i) {
    x[i] += (h / 6.0) * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
    v[i] += (h / 6.0) * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
  }
}

template <class S, class M>
void check_state(const M& m, const std::vector<S>& x, const std::vector<S>& v,
                 bool timelike_seed) {
  for (const S& c : x)
    if (std::fabs(value(c)) > m.chart_bound())
      throw BlowUpError("exp_geodesic: trajectory left the chart domain");
  if (timelike_seed && value(m.lagrangian(std::span<const S>(x), std::span<const S>(v))) >= 0.0)
    throw CausalityError("exp_geodesic: tangent left the timelike cone");
}

}  // namespace detail

// Endpoint of exp_x(T v), templated so dual-seeded inputs differentiate the
// map. Flat models use the exact straight line unless force_rk4 is set.
template <class S, class M>
void exp_map_state_t(const M& m, std::vector<S>& x, std::vector<S>& v, double T, int steps,
                     bool force_rk4 = false) {
  const int n = m.dim();
  if (m.is_flat() && !force_rk4) {
    for (int i = 0; i < n; ++i) x[i] += T * v[i];
    return;
  }
  bool timelike_seed =
      value(m.lagrangian(std::span<const S>(x), std::span<const S>(v))) < 0.0;
  double h = T / steps;
  for (int s = 0; s < steps; ++s) {
    detail::geodesic_rk4_step<S>(m, x, v, h);
    detail::check_state(m, x, v, timelike_seed);
  }
}

template <class S, class M>
std::vector<S> exp_map_t(const M& m, std::span<const S> x0, std::span<const S> v0, double T,
                         int steps, bool force_rk4 = false) {
  std::vector<S> x(x0.begin(), x0.end()), v(v0.begin(), v0.end());
  exp_map_state_t<S>(m, x, v, T, steps, force_rk4);
  return x;
}

// Sampled geodesic through (x, v); exp_x(v) is the endpoint at T = 1.
template <class M>
GeodesicSegment exp_geodesic(const M& m, std::span<const double> x0, std::span<const double> v0,
                             double T, int steps, bool force_rk4 = false) {
  if (steps < 16) throw std::invalid_argument("exp_geodesic: steps must be >= 16");
  const int n = m.dim();
  GeodesicSegment seg;
  seg.times.reserve(steps + 1);
  seg.points.reserve(steps + 1);
  seg.tangents.reserve(steps + 1);

  std::vector<double> x(x0.begin(), x0.end()), v(v0.begin(), v0.end());
  bool analytic = m.is_flat() && !force_rk4;
  bool timelike_seed = m.lagrangian(std::span<const double>(x), std::span<const double>(v)) < 0.0;
  double h = T / steps;
  seg.times.push_back(0.0);
  seg.points.push_back(x);
  seg.tangents.push_back(v);
  for (int s = 1; s <= steps; ++s) {
    if (analytic) {
      for (int i = 0; i < n; ++i) x[i] = x0[i] + s * h * v0[i];
    } else {
      detail::geodesic_rk4_step<double>(m, x, v, h);
      detail::check_state(m, x, v, timelike_seed);
    }
    seg.times.push_back(s * h);
    seg.points.push_back(x);
    seg.tangents.push_back(v);
  }
  return seg;
}

}  // namespace lfot
