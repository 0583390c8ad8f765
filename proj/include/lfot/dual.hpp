#pragma once

#include <cmath>
#include <iosfwd>
#include <ostream>

namespace lfot {

// First-order forward-mode dual number. Nesting gives higher derivatives:
// Dual<double> tracks one directional derivative, Dual<Dual<double>> a
// second one on top, and so on. All branch decisions in generic code must
// compare value() parts, never the duals themselves.
template <class T>
struct Dual {
  T a;  // value
  T b;  // derivative

  constexpr Dual() : a(0.0), b(0.0) {}
  constexpr Dual(double v) : a(v), b(0.0) {}  // NOLINT: implicit by design
  constexpr Dual(T va, T vb) : a(va), b(vb) {}
};

inline constexpr double value(double x) { return x; }
template <class T>
constexpr double value(const Dual<T>& d) { return value(d.a); }

template <class T>
constexpr int dual_depth(const Dual<T>*) { return 1 + dual_depth(static_cast<const T*>(nullptr)); }
constexpr int dual_depth(const double*) { return 0; }

// arithmetic

template <class T>
constexpr Dual<T> operator+(const Dual<T>& x, const Dual<T>& y) { return {x.a + y.a, x.b + y.b}; }
template <class T>
constexpr Dual<T> operator+(const Dual<T>& x, double c) { return {x.a + c, x.b}; }
template <class T>
constexpr Dual<T> operator+(double c, const Dual<T>& x) { return {c + x.a, x.b}; }

template <class T>
constexpr Dual<T> operator-(const Dual<T>& x) { return {-x.a, -x.b}; }
template <class T>
constexpr Dual<T> operator-(const Dual<T>& x, const Dual<T>& y) { return {x.a - y.a, x.b - y.b}; }
template <class T>
constexpr Dual<T> operator-(const Dual<T>& x, double c) { return {x.a - c, x.b}; }
template <class T>
constexpr Dual<T> operator-(double c, const Dual<T>& x) { return {c - x.a, -x.b}; }

template <class T>
constexpr Dual<T> operator*(const Dual<T>& x, const Dual<T>& y) {
  return {x.a * y.a, x.a * y.b + x.b * y.a};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& x, double c) { return {x.a * c, x.b * c}; }
template <class T>
constexpr Dual<T> operator*(double c, const Dual<T>& x) { return {x.a * c, x.b * c}; }

template <class T>
constexpr Dual<T> operator/(const Dual<T>& x, const Dual<T>& y) {
  T inv = 1.0 / y.a;
  T q = x.a * inv;
  return {q, (x.b - q * y.b) * inv};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& x, double c) { return {x.a / c, x.b / c}; }
template <class T>
constexpr Dual<T> operator/(double c, const Dual<T>& x) {
  T inv = 1.0 / x.a;
  T q = c * inv;
  return {q, -q * inv * x.b};
}

template <class T> Dual<T>& operator+=(Dual<T>& x, const Dual<T>& y) { x = x + y; return x; }
template <class T> Dual<T>& operator-=(Dual<T>& x, const Dual<T>& y) { x = x - y; return x; }
template <class T> Dual<T>& operator*=(Dual<T>& x, const Dual<T>& y) { x = x * y; return x; }
template <class T> Dual<T>& operator/=(Dual<T>& x, const Dual<T>& y) { x = x / y; return x; }
template <class T> Dual<T>& operator+=(Dual<T>& x, double c) { x = x + c; return x; }
template <class T> Dual<T>& operator-=(Dual<T>& x, double c) { x = x - c; return x; }
template <class T> Dual<T>& operator*=(Dual<T>& x, double c) { x = x * c; return x; }
template <class T> Dual<T>& operator/=(Dual<T>& x, double c) { x = x / c; return x; }

// comparisons act on values only
template <class T> constexpr bool operator<(const Dual<T>& x, const Dual<T>& y) { return value(x) < value(y); }
template <class T> constexpr bool operator>(const Dual<T>& x, const Dual<T>& y) { return value(x) > value(y); }
template <class T> constexpr bool operator<=(const Dual<T>& x, const Dual<T>& y) { return value(x) <= value(y); }
template <class T> constexpr bool operator>=(const Dual<T>& x, const Dual<T>& y) { return value(x) >= value(y); }
template <class T> constexpr bool operator<(const Dual<T>& x, double c) { return value(x) < c; }
template <class T> constexpr bool operator>(const Dual<T>& x, double c) { return value(x) > c; }
template <class T> constexpr bool operator<=(const Dual<T>& x, double c) { return value(x) <= c; }
template <class T> constexpr bool operator>=(const Dual<T>& x, double c) { return value(x) >= c; }
template <class T> constexpr bool operator<(double c, const Dual<T>& x) { return c < value(x); }
template <class T> constexpr bool operator>(double c, const Dual<T>& x) { return c > value(x); }

// math functions

using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tanh;

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  T r = sqrt(x.a);
  return {r, x.b / (2.0 * r)};
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.a);
  return {e, x.b * e};
}

template <class T>
Dual<T> log(const Dual<T>& x) { return {log(x.a), x.b / x.a}; }

template <class T>
Dual<T> pow(const Dual<T>& x, double e) {
  T p = pow(x.a, e);
  return {p, e * pow(x.a, e - 1.0) * x.b};
}

template <class T>
Dual<T> sin(const Dual<T>& x) { return {sin(x.a), x.b * cos(x.a)}; }
template <class T>
Dual<T> cos(const Dual<T>& x) { return {cos(x.a), -1.0 * x.b * sin(x.a)}; }
template <class T>
Dual<T> sinh(const Dual<T>& x) { return {sinh(x.a), x.b * cosh(x.a)}; }
template <class T>
Dual<T> cosh(const Dual<T>& x) { return {cosh(x.a), x.b * sinh(x.a)}; }
template <class T>
Dual<T> tanh(const Dual<T>& x) {
  T t = tanh(x.a);
  return {t, x.b * (1.0 - t * t)};
}

template <class T>
Dual<T> fabs(const Dual<T>& x) { return value(x) < 0.0 ? -x : x; }

template <class T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& d) {
  return os << '(' << d.a << " + " << d.b << "e)";
}

}  // namespace lfot
