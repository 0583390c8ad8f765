#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "lfot/linalg.hpp"

namespace lfot {

// Maximization transportation problem on the Birkhoff-type polytope
//   max sum_ij plan_ij cost_ij,  row sums = mu, column sums = nu,
// with forbidden cells excluded from the variable set (never big-M).
// Solved by the revised simplex on the transportation polytope: a max-flow
// feasibility phase, cycle-canceling to a vertex, then MODI pivoting with
// Bland's rule.
struct TransportResult {
  bool feasible = false;
  Matd plan;
  double objective = 0.0;
  std::vector<double> u, v;  // optimal dual potentials (per-component gauge)
  int pivots = 0;
};

namespace detail_lp {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int a) {
    while (p[a] != a) a = p[a] = p[p[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[b] = a;
    return true;
  }
};

// Edmonds-Karp max flow specialized to the bipartite admissibility graph.
inline double bipartite_max_flow(std::span<const double> mu, std::span<const double> nu,
                                 const std::vector<std::vector<bool>>& admissible,
                                 Matd& flow) {
  const int m = static_cast<int>(mu.size()), k = static_cast<int>(nu.size());
  const int S = m + k, T = m + k + 1, N = m + k + 2;
  const double INF = std::numeric_limits<double>::infinity();

  std::vector<double> cap_src(mu.begin(), mu.end());
  std::vector<double> cap_sink(nu.begin(), nu.end());
  flow = Matd(m, k);

  double total = 0.0;
  const double tol = 1e-15;
  while (true) {
    // BFS from S over residual arcs
    std::vector<int> prev(N, -1);
    std::deque<int> q{S};
    prev[S] = S;
    while (!q.empty() && prev[T] < 0) {
      int a = q.front();
      q.pop_front();
      if (a == S) {
        for (int i = 0; i < m; ++i)
          if (prev[i] < 0 && cap_src[i] > tol) {
            prev[i] = S;
            q.push_back(i);
          }
      } else if (a < m) {
        for (int j = 0; j < k; ++j)
          if (prev[m + j] < 0 && admissible[a][j]) {
            prev[m + j] = a;
            q.push_back(m + j);
          }
      } else if (a < m + k) {
        int j = a - m;
        if (prev[T] < 0 && cap_sink[j] > tol) prev[T] = a;
        for (int i = 0; i < m; ++i)
          if (prev[i] < 0 && flow(i, j) > tol) {
            prev[i] = a;
            q.push_back(i);
          }
      }
    }
    if (prev[T] < 0) break;

    // bottleneck along the path
    double bottleneck = INF;
    for (int node = T; node != S;) {
      int p = prev[node];
      if (node == T)
        bottleneck = std::min(bottleneck, cap_sink[p - m]);
      else if (p == S)
        bottleneck = std::min(bottleneck, cap_src[node]);
      else if (p < m)
        bottleneck = std::min(bottleneck, INF);  // forward arc, uncapped
      else
        bottleneck = std::min(bottleneck, flow(node, p - m));  // backward arc
      node = p;
    }
    for (int node = T; node != S;) {
      int p = prev[node];
      if (node == T)
        cap_sink[p - m] -= bottleneck;
      else if (p == S)
        cap_src[node] -= bottleneck;
      else if (p < m)
        flow(p, node - m) += bottleneck;
      else
        flow(node, p - m) -= bottleneck;
      node = p;
    }
    total += bottleneck;
  }
  return total;
}

}  // namespace detail_lp

inline TransportResult transport_maximize(const Matd& cost,
                                          const std::vector<std::vector<bool>>& admissible,
                                          std::span<const double> mu,
                                          std::span<const double> nu) {
  const int m = static_cast<int>(mu.size()), k = static_cast<int>(nu.size());
  const int nodes = m + k;
  TransportResult out;

  double total_mu = 0.0;
  for (double w : mu) total_mu += w;

  Matd flow;
  double got = detail_lp::bipartite_max_flow(mu, nu, admissible, flow);
  if (got < total_mu - 1e-12) return out;  // infeasible: no admissible coupling
  out.feasible = true;

  // --- vertex reduction: cancel cycles in the support graph, improving the
  // objective (or leaving it unchanged) until the support is a forest.
  // Cycles are found by peeling leaves; whatever remains lies on one.
  auto find_support_cycle = [&]() -> std::vector<int> {
    std::vector<int> deg(nodes, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j)
        if (flow(i, j) > 0.0) {
          ++deg[i];
          ++deg[m + j];
        }
    std::vector<bool> removed(nodes, false);
    std::deque<int> leaves;
    for (int a = 0; a < nodes; ++a)
      if (deg[a] <= 1) {
        leaves.push_back(a);
        removed[a] = true;
      }
    auto neighbors = [&](int a) {
      std::vector<int> nb;
      if (a < m) {
        for (int j = 0; j < k; ++j)
          if (flow(a, j) > 0.0 && !removed[m + j]) nb.push_back(m + j);
      } else {
        for (int i = 0; i < m; ++i)
          if (flow(i, a - m) > 0.0 && !removed[i]) nb.push_back(i);
      }
      return nb;
    };
    while (!leaves.empty()) {
      int a = leaves.front();
      leaves.pop_front();
      for (int b : neighbors(a)) {
        if (--deg[b] <= 1 && !removed[b]) {
          removed[b] = true;
          leaves.push_back(b);
        }
      }
    }
    for (int s = 0; s < nodes; ++s) {
      if (removed[s]) continue;
      std::vector<int> cyc{s};
      int prev = -1, cur = s;
      while (true) {
        int nxt = -1;
        for (int b : neighbors(cur))
          if (b != prev) { nxt = b; break; }
        if (nxt < 0 || nxt == s) return cyc;
        cyc.push_back(nxt);
        prev = cur;
        cur = nxt;
        if (cyc.size() > static_cast<size_t>(nodes)) return cyc;  // safety
      }
    }
    return {};
  };

  while (true) {
    auto cyc = find_support_cycle();
    if (cyc.empty()) break;
    // cycle nodes alternate source/sink; build arc list with signs
    std::vector<std::pair<int, int>> arcs;  // (i, j)
    std::vector<int> sign;
    for (size_t t = 0; t < cyc.size(); ++t) {
      int a = cyc[t], b = cyc[(t + 1) % cyc.size()];
      if (a < m)
        arcs.emplace_back(a, b - m);
      else
        arcs.emplace_back(b, a - m);
      sign.push_back(t % 2 == 0 ? +1 : -1);
    }
    double delta = 0.0;
    for (size_t t = 0; t < arcs.size(); ++t)
      delta += sign[t] * cost(arcs[t].first, arcs[t].second);
    if (delta < 0.0)
      for (auto& s : sign) s = -s;
    double theta = std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < arcs.size(); ++t)
      if (sign[t] < 0) theta = std::min(theta, flow(arcs[t].first, arcs[t].second));
    for (size_t t = 0; t < arcs.size(); ++t) {
      double& f = flow(arcs[t].first, arcs[t].second);
      f += sign[t] * theta;
      if (f < 1e-15) f = 0.0;
    }
  }

  // --- spanning forest basis over each admissible component
  detail_lp::UnionFind comp(nodes);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j)
      if (admissible[i][j]) comp.unite(i, m + j);

  std::vector<std::pair<int, int>> basis;
  detail_lp::UnionFind tree(nodes);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j)
      if (flow(i, j) > 0.0 && tree.unite(i, m + j)) basis.emplace_back(i, j);
  // degenerate completion with zero arcs
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j)
      if (admissible[i][j] && tree.find(i) != tree.find(m + j)) {
        tree.unite(i, m + j);
        basis.emplace_back(i, j);
      }

  // --- MODI iterations with Bland's rule
  const double rc_tol = 1e-11;
  std::vector<double> pot(nodes, 0.0);
  std::vector<char> have(nodes, 0);
  std::vector<std::vector<std::pair<int, int>>> badj(nodes);  // (neighbor, basis idx)

  auto rebuild = [&]() {
    for (auto& a : badj) a.clear();
    for (size_t t = 0; t < basis.size(); ++t) {
      auto [i, j] = basis[t];
      badj[i].emplace_back(m + j, static_cast<int>(t));
      badj[m + j].emplace_back(i, static_cast<int>(t));
    }
    std::fill(have.begin(), have.end(), 0);
    for (int s = 0; s < nodes; ++s) {
      if (have[s]) continue;
      pot[s] = 0.0;
      have[s] = 1;
      std::deque<int> q{s};
      while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        for (auto [b, t] : badj[a]) {
          if (have[b]) continue;
          auto [bi, bj] = basis[t];
          pot[b] = cost(bi, bj) - pot[a];
          have[b] = 1;
          q.push_back(b);
        }
      }
    }
  };

  rebuild();
  const int max_pivots = 200000;
  for (int it = 0; it < max_pivots; ++it) {
    // entering arc: first admissible non-basic with positive reduced cost
    int ei = -1, ej = -1;
    for (int i = 0; i < m && ei < 0; ++i)
      for (int j = 0; j < k; ++j) {
        if (!admissible[i][j]) continue;
        double rc = cost(i, j) - pot[i] - pot[m + j];
        if (rc > rc_tol) {
          bool in_basis = false;
          for (auto& a : basis)
            if (a.first == i && a.second == j) { in_basis = true; break; }
          if (!in_basis) {
            ei = i;
            ej = j;
            break;
          }
        }
      }
    if (ei < 0) break;
    ++out.pivots;

    // path from m+ej to ei inside the basis tree
    std::vector<int> par(nodes, -1), paredge(nodes, -1);
    std::deque<int> q{ei};
    par[ei] = ei;
    while (!q.empty() && par[m + ej] < 0) {
      int a = q.front();
      q.pop_front();
      for (auto [b, t] : badj[a])
        if (par[b] < 0) {
          par[b] = a;
          paredge[b] = t;
          q.push_back(b);
        }
    }
    // cycle arcs: entering (+), then alternate along the path back
    std::vector<int> cyc_edges;
    for (int node = m + ej; node != ei; node = par[node]) cyc_edges.push_back(paredge[node]);

    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    long leave_var = -1;  // Bland: smallest variable index among ties
    for (size_t t = 0; t < cyc_edges.size(); ++t) {
      if (t % 2 == 0) {  // minus arcs
        auto [bi, bj] = basis[cyc_edges[t]];
        double f = flow(bi, bj);
        long var = static_cast<long>(bi) * k + bj;
        if (f < theta - 1e-18 || (f <= theta + 1e-18 && (leave < 0 || var < leave_var))) {
          theta = f;
          leave = cyc_edges[t];
          leave_var = var;
        }
      }
    }
    flow(ei, ej) += theta;
    for (size_t t = 0; t < cyc_edges.size(); ++t) {
      auto [bi, bj] = basis[cyc_edges[t]];
      flow(bi, bj) += (t % 2 == 0 ? -theta : theta);
      if (flow(bi, bj) < 1e-15) flow(bi, bj) = 0.0;
    }
    basis[leave] = {ei, ej};
    rebuild();
  }

  out.plan = std::move(flow);
  out.objective = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j)
      if (out.plan(i, j) > 0.0) out.objective += out.plan(i, j) * cost(i, j);
  out.u.assign(pot.begin(), pot.begin() + m);
  out.v.assign(pot.begin() + m, pot.begin() + m + k);
  return out;
}

}  // namespace lfot
