#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "lfot/measure.hpp"
#include "lfot/separation.hpp"
#include "lfot/transport_lp.hpp"

namespace lfot {

struct InfeasibleCoupling : SolverError {
  using SolverError::SolverError;
};
struct TransformError : SolverError {
  using SolverError::SolverError;
};

struct Coupling {
  DiscreteMeasure source, target;
  Matd table;          // pi_ij
  Matd l;              // l(x_i, y_j); -inf on forbidden pairs
  double cost_q = 0.0; // (sum pi l^q)^(1/q)
  double q = 0.5;
  bool chronological = false;  // support inside {l > 0}
  bool has_null_pairs = false; // some admissible pair has l = 0 (degenerate cost)
};

struct DualPair {
  std::vector<double> u_vals, v_vals;
  double gap = 0.0;  // (sum mu u + sum nu v) - l_q^q / q
};

template <class M>
Matd separation_matrix(const M& m, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       ShootingOptions opt = {}) {
  Matd l(mu.size(), nu.size());
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j)
      l(i, j) = time_separation(m, mu.atoms[i], nu.atoms[j], opt).value;
  return l;
}

// l_q-optimal coupling by the transportation simplex; costs l^q / q with
// non-causal pairs excluded from the variable set.
template <class M>
std::pair<Coupling, DualPair> optimal_coupling_lp(const M& m, const DiscreteMeasure& mu,
                                                  const DiscreteMeasure& nu, double q,
                                                  ShootingOptions opt = {}) {
  mu.validate();
  nu.validate();
  Coupling cp;
  cp.source = mu;
  cp.target = nu;
  cp.q = q;
  cp.l = separation_matrix(m, mu, nu, opt);

  const int rows = mu.size(), cols = nu.size();
  Matd cost(rows, cols);
  std::vector<std::vector<bool>> adm(rows, std::vector<bool>(cols, false));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double l = cp.l(i, j);
      if (is_neg_inf(l)) continue;
      adm[i][j] = true;
      if (l == 0.0) cp.has_null_pairs = true;
      cost(i, j) = ext_pow(l, q) / q;
    }

  TransportResult res = transport_maximize(cost, adm, mu.weights, nu.weights);
  if (!res.feasible)
    throw InfeasibleCoupling("optimal_coupling_lp: no causal coupling exists");

  cp.table = std::move(res.plan);
  cp.cost_q = std::pow(q * res.objective, 1.0 / q);
  cp.chronological = true;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (cp.table(i, j) > 0.0 && !(cp.l(i, j) > 0.0)) cp.chronological = false;

  DualPair dual;
  dual.u_vals = std::move(res.u);
  dual.v_vals = std::move(res.v);
  double dual_value = 0.0;
  for (int i = 0; i < rows; ++i) dual_value += mu.weights[i] * dual.u_vals[i];
  for (int j = 0; j < cols; ++j) dual_value += nu.weights[j] * dual.v_vals[j];
  dual.gap = dual_value - res.objective;
  return {std::move(cp), std::move(dual)};
}

// Factorial oracle: enumerate permutations of equal-size uniform clouds.
template <class M>
Coupling brute_force_coupling(const M& m, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double q, ShootingOptions opt = {}) {
  const int n = mu.size();
  if (n != nu.size() || n > 8)
    throw std::invalid_argument("brute_force_coupling: needs equal atom counts <= 8");
  for (double w : mu.weights)
    if (std::fabs(w - 1.0 / n) > 1e-12)
      throw std::invalid_argument("brute_force_coupling: weights must be uniform");
  for (double w : nu.weights)
    if (std::fabs(w - 1.0 / n) > 1e-12)
      throw std::invalid_argument("brute_force_coupling: weights must be uniform");

  Coupling cp;
  cp.source = mu;
  cp.target = nu;
  cp.q = q;
  cp.l = separation_matrix(m, mu, nu, opt);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<std::vector<int>> best;
  double best_val = neg_inf();
  do {
    double s = 0.0;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      double l = cp.l(i, perm[i]);
      if (is_neg_inf(l)) { ok = false; break; }
      s += ext_pow(l, q);
      if (l == 0.0) cp.has_null_pairs = true;
    }
    if (ok && (!best || s > best_val)) {
      best = perm;
      best_val = s;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (!best) throw InfeasibleCoupling("brute_force_coupling: no causal matching");
  cp.table = Matd(n, n);
  for (int i = 0; i < n; ++i) cp.table(i, (*best)[i]) = 1.0 / n;
  cp.cost_q = std::pow(best_val / n, 1.0 / q);
  cp.chronological = true;
  for (int i = 0; i < n; ++i)
    if (!(cp.l(i, (*best)[i]) > 0.0)) cp.chronological = false;
  return cp;
}

// Worst violation of l^q-cyclical monotonicity over permutations of the
// given support pairs: min over tested sigma of
//   sum l(x_i, y_i)^q - sum l(x_i, y_sigma(i))^q   (negative = violated).
// Up to 6 pairs all permutations are enumerated; larger sets test all
// cyclic shifts plus permutations of random 6-subsets.
template <class M>
double cyclical_monotonicity_check(const M& m,
                                   const std::vector<std::pair<std::vector<double>,
                                                               std::vector<double>>>& pairs,
                                   double q, uint64_t seed = 2024,
                                   ShootingOptions opt = {}) {
  const int k = static_cast<int>(pairs.size());
  if (k > 10) throw std::invalid_argument("cyclical_monotonicity_check: at most 10 pairs");
  if (k == 0) return 0.0;

  Matd lq(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double l = time_separation(m, pairs[i].first, pairs[j].second, opt).value;
      lq(i, j) = is_neg_inf(l) ? neg_inf() : ext_pow(l, q);
    }

  auto subset_violation = [&](const std::vector<int>& idx) {
    double base = 0.0;
    for (int i : idx) {
      if (is_neg_inf(lq(i, i))) return neg_inf();  // identity pairing not causal
      base += lq(i, i);
    }
    double worst = 0.0;
    std::vector<int> perm(idx.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double s = 0.0;
      bool causal = true;
      for (size_t t = 0; t < idx.size(); ++t) {
        double v = lq(idx[t], idx[perm[t]]);
        if (is_neg_inf(v)) { causal = false; break; }
        s += v;
      }
      if (causal) worst = std::min(worst, base - s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return worst;
  };

  double worst = 0.0;
  if (k <= 6) {
    std::vector<int> all(k);
    std::iota(all.begin(), all.end(), 0);
    worst = subset_violation(all);
  } else {
    // all cyclic shifts of the full list
    double base = 0.0;
    bool base_causal = true;
    for (int i = 0; i < k; ++i) {
      if (is_neg_inf(lq(i, i))) { base_causal = false; break; }
      base += lq(i, i);
    }
    if (!base_causal) return neg_inf();
    for (int shift = 1; shift < k; ++shift) {
      double s = 0.0;
      bool causal = true;
      for (int i = 0; i < k; ++i) {
        double v = lq(i, (i + shift) % k);
        if (is_neg_inf(v)) { causal = false; break; }
        s += v;
      }
      if (causal) worst = std::min(worst, base - s);
    }
    Rng rng(seed);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<int> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      for (int i = k - 1; i > 0; --i) std::swap(idx[i], idx[rng.uniform_int(i + 1)]);
      idx.resize(6);
      std::sort(idx.begin(), idx.end());
      worst = std::min(worst, subset_violation(idx));
    }
  }
  return worst;
}

enum class TransformDirection { to_source, to_target };

// l^q-transforms over finite sets:
//   to_source: u(x_i) = max_j ( l(x_i, y_j)^q / q - f(y_j) )
//   to_target: v(y_j) = max_i ( l(x_i, y_j)^q / q - f(x_i) )
template <class M>
std::vector<double> lq_transform(const M& m, std::span<const double> f,
                                 const std::vector<std::vector<double>>& X,
                                 const std::vector<std::vector<double>>& Y, double q,
                                 TransformDirection dir, ShootingOptions opt = {}) {
  const int nx = static_cast<int>(X.size()), ny = static_cast<int>(Y.size());
  std::vector<double> out;
  if (dir == TransformDirection::to_source) {
    out.assign(nx, neg_inf());
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        double l = time_separation(m, X[i], Y[j], opt).value;
        if (is_neg_inf(l)) continue;
        out[i] = std::max(out[i], ext_pow(l, q) / q - f[j]);
      }
      if (is_neg_inf(out[i]))
        throw TransformError("lq_transform: a source point sees no causal partner");
    }
  } else {
    out.assign(ny, neg_inf());
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        double l = time_separation(m, X[i], Y[j], opt).value;
        if (is_neg_inf(l)) continue;
        out[j] = std::max(out[j], ext_pow(l, q) / q - f[i]);
      }
      if (is_neg_inf(out[j]))
        throw TransformError("lq_transform: a target point sees no causal partner");
    }
  }
  return out;
}

struct QSeparationReport {
  bool separated = false;
  double min_l = 0.0;
  int witness_i = -1, witness_j = -1;
};

// q-separation proxy: all support pairs strictly chronological.
template <class M>
QSeparationReport q_separation_check(const M& m, const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu, double eps_chron = 1e-9,
                                     ShootingOptions opt = {}) {
  QSeparationReport rep;
  rep.min_l = inf();
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j) {
      double l = time_separation(m, mu.atoms[i], nu.atoms[j], opt).value;
      if (l < rep.min_l) {
        rep.min_l = l;
        rep.witness_i = i;
        rep.witness_j = j;
      }
    }
  rep.separated = rep.min_l > eps_chron;
  return rep;
}

// Push the coupling through t-intermediate points; coincident images merge
// on a spatial hash at 1e-9 resolution.
template <class M>
DiscreteMeasure displacement_interpolate(const M& m, const Coupling& cp, double t,
                                         ShootingOptions opt = {}) {
  if (!cp.chronological)
    throw std::invalid_argument("displacement_interpolate: coupling must be chronological");
  const double res = 1e-9;
  std::map<std::vector<int64_t>, int> index;
  DiscreteMeasure out;
  for (int i = 0; i < cp.source.size(); ++i)
    for (int j = 0; j < cp.target.size(); ++j) {
      double w = cp.table(i, j);
      if (w <= 0.0) continue;
      auto sep = time_separation(m, cp.source.atoms[i], cp.target.atoms[j], opt);
      auto z = intermediate_point_from(m, cp.source.atoms[i], sep, t, opt.steps);
      std::vector<int64_t> key(z.size());
      for (size_t c = 0; c < z.size(); ++c) key[c] = llround(z[c] / res);
      auto [it, inserted] = index.try_emplace(key, out.size());
      if (inserted) {
        out.atoms.push_back(std::move(z));
        out.weights.push_back(w);
      } else {
        out.weights[it->second] += w;
      }
    }
  return out;
}

}  // namespace lfot
