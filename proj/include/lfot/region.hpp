#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace lfot {

struct Box {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> p) const {
    for (size_t i = 0; i < lo.size(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
  double leb_volume() const {
    double v = 1.0;
    for (size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
  }
};

struct Ball {
  std::vector<double> center;
  double radius = 1.0;

  int dim() const { return static_cast<int>(center.size()); }
  bool contains(std::span<const double> p) const {
    double s = 0.0;
    for (size_t i = 0; i < center.size(); ++i) {
      double d = p[i] - center[i];
      s += d * d;
    }
    return s <= radius * radius;
  }
  Box bbox() const {
    Box b;
    b.lo = center;
    b.hi = center;
    for (size_t i = 0; i < center.size(); ++i) {
      b.lo[i] -= radius;
      b.hi[i] += radius;
    }
    return b;
  }
};

using Region = std::variant<Box, Ball>;

inline Box region_bbox(const Region& r) {
  if (std::holds_alternative<Box>(r)) return std::get<Box>(r);
  return std::get<Ball>(r).bbox();
}

inline bool region_contains(const Region& r, std::span<const double> p) {
  return std::visit([&](const auto& rr) { return rr.contains(p); }, r);
}

inline int region_dim(const Region& r) {
  return std::visit([&](const auto& rr) { return rr.dim(); }, r);
}

// Interpolated bounding box (1-t) A + t B; covers Z_t(A, B) on flat models.
inline Box interpolate_bbox(const Box& a, const Box& b, double t) {
  Box out;
  out.lo.resize(a.lo.size());
  out.hi.resize(a.hi.size());
  for (size_t i = 0; i < a.lo.size(); ++i) {
    out.lo[i] = (1.0 - t) * a.lo[i] + t * b.lo[i];
    out.hi[i] = (1.0 - t) * a.hi[i] + t * b.hi[i];
  }
  return out;
}

}  // namespace lfot
