#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "lfot/core.hpp"
#include "lfot/rng.hpp"

namespace lfot::testing {

// Random timelike future-directed vector at x (rejection against the model's
// own cone, so it also works for the Bogoslovsky wedge).
template <class M>
std::vector<double> sample_timelike(const M& m, std::span<const double> x, Rng& rng,
                                    double vmin = 0.5, double vmax = 3.0) {
  const int n = m.dim();
  std::vector<double> v(n);
  for (int tries = 0; tries < 1000; ++tries) {
    v[0] = rng.uniform(vmin, vmax);
    for (int i = 1; i < n; ++i) v[i] = rng.uniform(-0.9, 0.9) * v[0];
    if (is_timelike_future(m, x, v)) return v;
  }
  throw std::runtime_error("sample_timelike: rejection failed");
}

inline std::vector<double> origin(int n) { return std::vector<double>(n, 0.0); }

template <class M>
std::vector<double> sample_point(const M& m, Rng& rng, double lo = -0.5, double hi = 0.5) {
  std::vector<double> x(m.dim());
  for (auto& c : x) c = rng.uniform(lo, hi);
  return x;
}

}  // namespace lfot::testing
