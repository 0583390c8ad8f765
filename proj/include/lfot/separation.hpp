#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "lfot/extended.hpp"
#include "lfot/geodesic.hpp"
#include "lfot/models.hpp"
#include "lfot/region.hpp"
#include "lfot/rng.hpp"

namespace lfot {

struct ShootingFailure : SolverError {
  using SolverError::SolverError;
};
struct NoMaximizer : SolverError {
  using SolverError::SolverError;
};

struct ShootingOptions {
  int steps = 128;       // RK4 steps per endpoint-map evaluation
  int max_iter = 40;
  double tol = 1e-10;
  int n_seeds = 8;
  bool force_shooting = false;  // bypass closed forms on flat models
};

struct SeparationResult {
  double value = neg_inf();  // l(x, y); -inf iff not causally related
  Causality causality = Causality::unrelated;
  enum class Method { analytic, shooting } method = Method::analytic;
  // initial velocity v* of the maximizer exp_x(t v*), t in [0, 1]
  std::optional<std::vector<double>> initial_velocity;
  int converged_seeds = 0;
  bool multiple_distinct = false;  // several geodesics with (near-)equal action
};

namespace detail {

// Newton solve of exp_x(v) = y over timelike future v from one seed.
template <class M>
std::optional<std::vector<double>> shoot_one(const M& m, std::span<const double> x,
                                             std::span<const double> y,
                                             std::vector<double> v, const ShootingOptions& opt) {
  const int n = m.dim();
  using D = Dual<double>;
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::fabs(y[i]));

  auto endpoint = [&](const std::vector<double>& w) {
    return exp_map_t<double>(m, x, w, 1.0, opt.steps, /*force_rk4=*/true);
  };
  auto resid_norm = [&](const std::vector<double>& e) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = e[i] - y[i];
      s += d * d;
    }
    return std::sqrt(s);
  };

  if (!is_timelike_future(m, x, v)) return std::nullopt;
  std::vector<double> ex;
  try {
    ex = endpoint(v);
  } catch (const SolverError&) {
    return std::nullopt;
  }
  double rn = resid_norm(ex);

  for (int it = 0; it < opt.max_iter; ++it) {
    if (rn <= opt.tol * scale) break;
    // Jacobian of the endpoint map by dual-seeded integration
    Matd Jac(n, n);
    std::vector<D> xd = promote<D>(x), vd = promote<D>(std::span<const double>(v));
    for (int k = 0; k < n; ++k) {
      vd[k].b = 1.0;
      std::vector<D> ed;
      try {
        ed = exp_map_t<D>(m, std::span<const D>(xd), std::span<const D>(vd), 1.0, opt.steps,
                          true);
      } catch (const SolverError&) {
        return std::nullopt;
      }
      vd[k].b = 0.0;
      for (int i = 0; i < n; ++i) Jac(i, k) = ed[i].b;
    }
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = ex[i] - y[i];
    std::vector<double> step;
    try {
      step = solve(Jac, rhs);
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
    double alpha = 1.0;
    bool ok = false;
    for (int h = 0; h < 12; ++h) {
      std::vector<double> vn(n);
      for (int i = 0; i < n; ++i) vn[i] = v[i] - alpha * step[i];
      if (is_timelike_future(m, x, vn)) {
        std::vector<double> en;
        bool threw = false;
        try {
          en = endpoint(vn);
        } catch (const SolverError&) {
          threw = true;
        }
        if (!threw) {
          double rnn = resid_norm(en);
          if (rnn < rn) {
            v = std::move(vn);
            ex = std::move(en);
            rn = rnn;
            ok = true;
            break;
          }
        }
      }
      alpha *= 0.5;
    }
    if (!ok) return std::nullopt;
  }
  if (rn > opt.tol * scale * 10.0) return std::nullopt;
  return v;
}

}  // namespace detail

// Time separation l(x, y): closed form on flat models, multi-seed shooting
// otherwise. With several converged geodesics the largest action wins; ties
// (< 1e-9) break to the lexicographically smallest initial velocity.
template <class M>
SeparationResult time_separation(const M& m, std::span<const double> x,
                                 std::span<const double> y, ShootingOptions opt = {}) {
  const int n = m.dim();
  SeparationResult out;

  if (m.is_flat() && !opt.force_shooting) {
    std::vector<double> d(n);
    bool same = true;
    for (int i = 0; i < n; ++i) {
      d[i] = y[i] - x[i];
      if (d[i] != 0.0) same = false;
    }
    out.method = SeparationResult::Method::analytic;
    if (same) {
      out.value = 0.0;
      out.causality = Causality::related;
      out.initial_velocity = d;
      return out;
    }
    CausalClass c = classify(m, x, d);
    bool future = c.future_directed.value_or(false);
    if (c.kind == CausalKind::timelike && future) {
      out.value = f_norm(m, x, d);
      out.causality = Causality::related;
      out.initial_velocity = d;
    } else if (c.kind == CausalKind::lightlike && future) {
      out.value = 0.0;
      out.causality = Causality::related;
      out.initial_velocity = d;
    }
    return out;
  }

  out.method = SeparationResult::Method::shooting;

  // seed fan across the future cone at x
  std::vector<double> X(n);
  m.time_orientation(x, X);
  Matd E = g_orthonormal_frame(m, x, X);
  double r0 = 0.0;
  for (int i = 0; i < n; ++i) r0 += (y[i] - x[i]) * (y[i] - x[i]);
  r0 = std::max(0.1, std::sqrt(r0));

  std::vector<std::vector<double>> found;
  const double phis[8] = {0.0, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.0};
  int nseeds = std::min(opt.n_seeds, 8);
  for (int s = 0; s < nseeds; ++s) {
    double phi = phis[s];
    int j = 1 + (s % (n - 1));
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
      v[i] = r0 * (std::cosh(phi) * E(i, 0) + std::sinh(phi) * E(i, j));
    auto sol = detail::shoot_one(m, x, y, std::move(v), opt);
    if (!sol) continue;
    bool dup = false;
    for (const auto& f : found) {
      double dd = 0.0;
      for (int i = 0; i < n; ++i) dd = std::max(dd, std::fabs(f[i] - (*sol)[i]));
      if (dd < 1e-7 * std::max(1.0, r0)) { dup = true; break; }
    }
    if (!dup) found.push_back(*sol);
  }
  out.converged_seeds = static_cast<int>(found.size());

  if (found.empty()) {
    Causality pre = m.causal_pretest(x, y);
    if (pre == Causality::related)
      throw ShootingFailure("time_separation: no shooting seed converged on a causally "
                            "related pair");
    out.causality = pre;  // unrelated -> -inf; unknown -> tri-state flag
    return out;
  }

  double best = neg_inf();
  std::vector<double> bestv;
  for (const auto& f : found) {
    double a = f_norm(m, x, f);
    if (a > best + 1e-9) {
      best = a;
      bestv = f;
    } else if (std::fabs(a - best) <= 1e-9) {
      out.multiple_distinct = true;
      if (std::lexicographical_compare(f.begin(), f.end(), bestv.begin(), bestv.end()))
        bestv = f;
    }
  }
  out.value = best;
  out.causality = Causality::related;
  out.initial_velocity = std::move(bestv);
  return out;
}

// l_q(x,y) = l^q / q with the extended-real conventions.
template <class M>
double lq_separation(const M& m, std::span<const double> x, std::span<const double> y, double q,
                     ShootingOptions opt = {}) {
  double l = time_separation(m, x, y, opt).value;
  if (is_neg_inf(l)) return neg_inf();
  return ext_pow(l, q) / q;
}

// Materialize the maximizing geodesic of a separation result.
template <class M>
GeodesicSegment maximizer_segment(const M& m, std::span<const double> x,
                                  const SeparationResult& sep, int steps = 128, double q = 1.0) {
  if (!sep.initial_velocity) throw NoMaximizer("maximizer_segment: no maximizer available");
  auto seg = exp_geodesic(m, x, *sep.initial_velocity, 1.0, steps);
  seg.action_q = -ext_pow(sep.value, q) / q;
  return seg;
}

// t-intermediate point z_t(x, y) of the selected maximizer.
template <class M>
std::vector<double> intermediate_point_from(const M& m, std::span<const double> x,
                                            const SeparationResult& sep, double t,
                                            int steps = 64) {
  if (!sep.initial_velocity || !(sep.value > 0.0))
    throw NoMaximizer("intermediate_point: pair is not chronologically related");
  const auto& v = *sep.initial_velocity;
  if (m.is_flat()) {
    std::vector<double> z(x.begin(), x.end());
    for (size_t i = 0; i < z.size(); ++i) z[i] += t * v[i];
    return z;
  }
  if (t == 0.0) return {x.begin(), x.end()};
  return exp_map_t<double>(m, x, v, t, steps);
}

template <class M>
std::vector<double> intermediate_point(const M& m, std::span<const double> x,
                                       std::span<const double> y, double t,
                                       ShootingOptions opt = {}) {
  auto sep = time_separation(m, x, y, opt);
  return intermediate_point_from(m, x, sep, t, opt.steps);
}

struct Membership {
  bool member = false;
  bool certain = false;
};

namespace detail {

// max over the box of (d^0 - |dbar|) for d = z - x (future-timelike margin
// of z over the box); exact for the Euclidean spatial cone.
inline double best_margin_from_box(const Box& bx, std::span<const double> z) {
  const int n = bx.dim();
  double d0 = z[0] - bx.lo[0];
  double s = 0.0;
  for (int i = 1; i < n; ++i) {
    double c = std::clamp(z[i], bx.lo[i], bx.hi[i]);
    double d = z[i] - c;
    s += d * d;
  }
  return d0 - std::sqrt(s);
}

// same for d = y - z with y in the box
inline double best_margin_to_box(const Box& bx, std::span<const double> z) {
  const int n = bx.dim();
  double d0 = bx.hi[0] - z[0];
  double s = 0.0;
  for (int i = 1; i < n; ++i) {
    double c = std::clamp(z[i], bx.lo[i], bx.hi[i]);
    double d = c - z[i];
    s += d * d;
  }
  return d0 - std::sqrt(s);
}

}  // namespace detail

// Membership of z in Z_t(A, B) on flat models: exists x in A, y in B with
// z = x + t (y - x) and y - x timelike future-directed. Box/Box on the
// Minkowski-family cone is decided exactly; other shapes fall back to a
// refined grid search whose negative answers are flagged uncertain.
template <class M>
Membership z_t_membership(const M& m, std::span<const double> z, const Region& A,
                          const Region& B, double t) {
  if (!m.is_flat())
    throw std::invalid_argument("z_t_membership: exact membership requires a flat model");
  const int n = m.dim();

  const bool boxes = std::holds_alternative<Box>(A) && std::holds_alternative<Box>(B);
  const bool euclidean_cone = std::string_view(m.name()) != "bogoslovsky";

  if (t == 0.0) {
    if (!region_contains(A, z)) return {false, true};
    if (boxes && euclidean_cone) {
      double mg = detail::best_margin_to_box(std::get<Box>(B), z);
      return {mg > 0.0, std::fabs(mg) > 1e-12};
    }
  } else if (t == 1.0) {
    if (!region_contains(B, z)) return {false, true};
    if (boxes && euclidean_cone) {
      double mg = detail::best_margin_from_box(std::get<Box>(A), z);
      return {mg > 0.0, std::fabs(mg) > 1e-12};
    }
  } else if (boxes && euclidean_cone) {
    // x must lie in A and in the preimage of B under x -> (z - (1-t) x)/t
    const Box& a = std::get<Box>(A);
    const Box& b = std::get<Box>(B);
    Box c;
    c.lo.resize(n);
    c.hi.resize(n);
    for (int i = 0; i < n; ++i) {
      double lo = (z[i] - t * b.hi[i]) / (1.0 - t);
      double hi = (z[i] - t * b.lo[i]) / (1.0 - t);
      c.lo[i] = std::max(a.lo[i], lo);
      c.hi[i] = std::min(a.hi[i], hi);
      if (c.lo[i] > c.hi[i]) return {false, true};
    }
    double mg = detail::best_margin_from_box(c, z);
    return {mg > 0.0, std::fabs(mg) > 1e-12};
  }

  // generic refined grid search
  if (t == 0.0 && !region_contains(A, z)) return {false, true};
  if (t == 1.0 && !region_contains(B, z)) return {false, true};
  const Region& scan = (t == 0.0) ? B : A;
  Box sbox = region_bbox(scan);
  std::vector<double> xx(n), yy(n), dd(n);
  for (int level = 3; level <= 6; ++level) {
    int grid = 1 << level;
    std::vector<int> idx(n, 0);
    bool done = false;
    while (!done) {
      for (int i = 0; i < n; ++i)
        xx[i] = sbox.lo[i] + (sbox.hi[i] - sbox.lo[i]) * (idx[i] + 0.5) / grid;
      bool ok = region_contains(scan, xx);
      if (ok) {
        if (t == 0.0) {  // xx is a candidate y; need y - z timelike future
          for (int i = 0; i < n; ++i) dd[i] = xx[i] - z[i];
          ok = is_timelike_future(m, z, dd);
        } else if (t == 1.0) {  // xx is a candidate x; need z - x timelike future
          for (int i = 0; i < n; ++i) dd[i] = z[i] - xx[i];
          ok = is_timelike_future(m, xx, dd);
        } else {
          for (int i = 0; i < n; ++i) {
            yy[i] = (z[i] - (1.0 - t) * xx[i]) / t;
            dd[i] = yy[i] - xx[i];
          }
          ok = region_contains(B, yy) && is_timelike_future(m, xx, dd);
        }
      }
      if (ok) return {true, true};
      done = true;
      for (int i = 0; i < n; ++i) {
        if (++idx[i] < grid) { done = false; break; }
        idx[i] = 0;
      }
    }
  }
  return {false, false};  // refinement budget exhausted without a witness
}

// Worst relative quadraticity defect |g_v(w,w) - 2 L(w)| / max(1, |2 L(w)|)
// over sampled timelike pairs at x; ~0 iff the structure is Lorentzian here.
template <class M>
double lorentzianity_defect(const M& m, std::span<const double> x, int samples,
                            uint64_t seed = 12345) {
  if (samples < 10) throw std::invalid_argument("lorentzianity_defect: samples must be >= 10");
  Rng rng(seed);
  const int n = m.dim();
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    std::vector<double> v(n), w(n);
    auto draw = [&](std::vector<double>& out) {
      for (int tries = 0; tries < 1000; ++tries) {
        out[0] = rng.uniform(0.5, 3.0);
        for (int i = 1; i < n; ++i) out[i] = rng.uniform(-0.9, 0.9) * out[0];
        if (is_timelike_future(m, x, out)) return;
      }
      throw SolverError("lorentzianity_defect: cone sampling failed");
    };
    draw(v);
    draw(w);
    double gww = metric_pairing(m, x, v, w, w);
    double twoL = 2.0 * lagrangian_eval(m, x, w);
    worst = std::max(worst, std::fabs(gww - twoL) / std::max(1.0, std::fabs(twoL)));
  }
  return worst;
}

}  // namespace lfot
