#pragma once

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>

#include "lfot/core.hpp"

namespace lfot {

enum class Causality { related, unrelated, unknown };

// ---------------------------------------------------------------------------
// Minkowski: L = (-(v^0)^2 + |vbar|^2) / 2, Lebesgue reference measure.

struct Minkowski {
  int n = 2;

  int dim() const { return n; }

  template <class T>
  T lagrangian(std::span<const T> /*x*/, std::span<const T> v) const {
    T s = -1.0 * (v[0] * v[0]);
    for (int i = 1; i < n; ++i) s += v[i] * v[i];
    return 0.5 * s;
  }

  void time_orientation(std::span<const double> /*x*/, std::span<double> out) const {
    for (int i = 0; i < n; ++i) out[i] = 0.0;
    out[0] = 1.0;
  }

  template <class T>
  T weight(std::span<const T> /*x*/, std::span<const T> /*v*/) const { return T(0.0); }
  bool has_weight() const { return false; }
  double measure_density(std::span<const double> /*x*/) const { return 1.0; }
  bool is_flat() const { return true; }
  double chart_bound() const { return 1e9; }
  Causality causal_pretest(std::span<const double>, std::span<const double>) const {
    return Causality::unknown;
  }
  const char* name() const { return "minkowski"; }
};

// ---------------------------------------------------------------------------
// Minkowski geometry with the weighted reference measure
// dm = exp(-eps (x^0)^2 / 2) dx; psi_m(x) = eps (x^0)^2 / 2.

struct WeightedMinkowski {
  int n = 2;
  double eps = 0.1;

  int dim() const { return n; }

  template <class T>
  T lagrangian(std::span<const T> x, std::span<const T> v) const {
    return Minkowski{n}.lagrangian(x, v);
  }

  void time_orientation(std::span<const double> x, std::span<double> out) const {
    Minkowski{n}.time_orientation(x, out);
  }

  template <class T>
  T weight(std::span<const T> x, std::span<const T> /*v*/) const {
    return 0.5 * eps * (x[0] * x[0]);
  }
  bool has_weight() const { return true; }
  double measure_density(std::span<const double> x) const {
    return std::exp(-0.5 * eps * x[0] * x[0]);
  }
  bool is_flat() const { return true; }
  double chart_bound() const { return 1e9; }
  Causality causal_pretest(std::span<const double>, std::span<const double>) const {
    return Causality::unknown;
  }
  const char* name() const { return "weighted_minkowski"; }
};

// ---------------------------------------------------------------------------
// Bogoslovsky-type structure, b in (0, 1/2):
//   L = -((v^0)^2 - |vbar|^2)^(1-b) (v^0 - v^1)^(2b) / 2
// defined on the cone A > 0, v^0 > 0, v^0 > v^1. Flat (x-independent) but
// non-quadratic, so it is a genuine non-Lorentzian Lorentz-Finsler example.
// Off the closed future cone L is replaced by a positive surrogate carrying
// the sign of the defining inequalities; the toolkit only evaluates it there
// to classify, so only the sign matters. Past-directed vectors classify as
// spacelike under this convention.

struct Bogoslovsky {
  int n = 2;
  double b = 0.1;

  int dim() const { return n; }

  template <class T>
  T lagrangian(std::span<const T> /*x*/, std::span<const T> v) const {
    T A = v[0] * v[0];
    for (int i = 1; i < n; ++i) A -= v[i] * v[i];
    T D = v[0] - v[1];
    const double Av = value(A), Dv = value(D), v0 = value(v[0]);

    bool all_zero = true;
    for (int i = 0; i < n; ++i)
      if (value(v[i]) != 0.0) { all_zero = false; break; }
    if (all_zero) return T(0.0);

    if (Av > 0.0 && v0 > 0.0 && Dv > 0.0)
      return -0.5 * pow(A, 1.0 - b) * pow(D, 2.0 * b);
    if (Av >= 0.0 && v0 >= 0.0 && Dv >= 0.0) return T(0.0);  // cone boundary

    T s(0.0);
    if (Av < 0.0) s -= A;
    if (Dv < 0.0) s -= D;
    if (value(s) == 0.0) s += v[0] * v[0];  // past boundary rays
    return 0.5 * s;
  }

  void time_orientation(std::span<const double> x, std::span<double> out) const {
    Minkowski mk{n};
    mk.time_orientation(x, out);
  }

  template <class T>
  T weight(std::span<const T> /*x*/, std::span<const T> /*v*/) const { return T(0.0); }
  bool has_weight() const { return false; }
  double measure_density(std::span<const double> /*x*/) const { return 1.0; }
  bool is_flat() const { return true; }
  double chart_bound() const { return 1e9; }
  Causality causal_pretest(std::span<const double>, std::span<const double>) const {
    return Causality::unknown;
  }
  const char* name() const { return "bogoslovsky"; }
};

// ---------------------------------------------------------------------------
// 2-d constant-curvature comparison chart:
//   L = (-(v^0)^2 + cos^2(x^0) (v^1)^2) / 2 on |x^0| < pi/2,
// reference measure = Lorentzian volume cos(x^0) dx. Timelike geodesics
// focus: Ric(v) = F^2(v), the curvature-one ground truth the comparison
// checkers are tested against. (The cosh-warped chart has the opposite,
// defocusing sign under the spray curvature and would not provide a
// positive lower bound.)

struct DeSitter2D {
  int dim() const { return 2; }

  template <class T>
  T lagrangian(std::span<const T> x, std::span<const T> v) const {
    T c = cos(x[0]);
    return 0.5 * (-1.0 * (v[0] * v[0]) + c * c * v[1] * v[1]);
  }

  void time_orientation(std::span<const double> /*x*/, std::span<double> out) const {
    out[0] = 1.0;
    out[1] = 0.0;
  }

  template <class T>
  T weight(std::span<const T> /*x*/, std::span<const T> /*v*/) const { return T(0.0); }
  bool has_weight() const { return false; }
  double measure_density(std::span<const double> x) const { return std::cos(x[0]); }
  bool is_flat() const { return false; }
  double chart_bound() const { return 1.2; }

  // Null lines satisfy theta = const +- (igd(t^1) - igd(t^0)) with igd the
  // inverse Gudermannian, so the chronology test is exact in this chart.
  Causality causal_pretest(std::span<const double> x, std::span<const double> y) const {
    if (x[0] == y[0] && x[1] == y[1]) return Causality::related;
    if (y[0] <= x[0]) return Causality::unrelated;
    double d = igd(y[0]) - igd(x[0]);
    return std::fabs(y[1] - x[1]) <= d ? Causality::related : Causality::unrelated;
  }

  static double igd(double t) { return std::atanh(std::sin(t)); }

  const char* name() const { return "de_sitter_2d"; }
};

// ---------------------------------------------------------------------------

enum class ModelName { minkowski, weighted_minkowski, bogoslovsky, de_sitter_2d };

struct ModelSpec {
  ModelName name = ModelName::minkowski;
  int dim = 2;
  std::map<std::string, double> params;  // "epsilon" (weight), "b" (Bogoslovsky)
};

using AnyModel = std::variant<Minkowski, WeightedMinkowski, Bogoslovsky, DeSitter2D>;

inline ModelName model_name_from_string(const std::string& s) {
  if (s == "minkowski") return ModelName::minkowski;
  if (s == "weighted_minkowski") return ModelName::weighted_minkowski;
  if (s == "bogoslovsky") return ModelName::bogoslovsky;
  if (s == "de_sitter_2d") return ModelName::de_sitter_2d;
  throw std::invalid_argument("unknown model name: " + s);
}

inline std::string to_string(ModelName m) {
  switch (m) {
    case ModelName::minkowski: return "minkowski";
    case ModelName::weighted_minkowski: return "weighted_minkowski";
    case ModelName::bogoslovsky: return "bogoslovsky";
    case ModelName::de_sitter_2d: return "de_sitter_2d";
  }
  return "?";
}

inline AnyModel build_model(const ModelSpec& spec) {
  auto param = [&](const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
  };
  if (spec.dim < 2 || spec.dim > 6)
    throw std::invalid_argument("model dimension must be in [2, 6]");
  switch (spec.name) {
    case ModelName::minkowski:
      return Minkowski{spec.dim};
    case ModelName::weighted_minkowski: {
      double eps = param("epsilon", 0.1);
      if (eps < 0.0) throw std::invalid_argument("weighted_minkowski: epsilon must be >= 0");
      return WeightedMinkowski{spec.dim, eps};
    }
    case ModelName::bogoslovsky: {
      double b = param("b", 0.1);
      if (!(b > 0.0 && b < 0.5))
        throw std::invalid_argument("bogoslovsky: b must lie in (0, 1/2)");
      return Bogoslovsky{spec.dim, b};
    }
    case ModelName::de_sitter_2d:
      if (spec.dim != 2) throw std::invalid_argument("de_sitter_2d has dimension 2");
      return DeSitter2D{};
  }
  throw std::invalid_argument("unknown model");
}

struct GroundTruth {
  bool is_flat = true;
  bool is_lorentzian = true;   // quadratic L on the timelike cone
  bool has_analytic_l = true;  // closed-form time separation
  double curvature_constant = 0.0;  // Ric(v) = const * F^2(v) for unit-curvature models
  double ric_inf_lower_bound = 0.0;  // K with Ric_inf >= K F^2 on the cone
};

inline GroundTruth model_ground_truth(const ModelSpec& spec) {
  GroundTruth gt;
  switch (spec.name) {
    case ModelName::minkowski:
      break;
    case ModelName::weighted_minkowski:
      gt.ric_inf_lower_bound = spec.params.count("epsilon") ? spec.params.at("epsilon") : 0.1;
      break;
    case ModelName::bogoslovsky:
      gt.is_lorentzian = false;
      break;
    case ModelName::de_sitter_2d:
      gt.is_flat = false;
      gt.has_analytic_l = false;
      gt.curvature_constant = 1.0;
      break;
  }
  return gt;
}

}  // namespace lfot
