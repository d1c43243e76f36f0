#pragma once

#include <cmath>

namespace csflab {

// Truncated Taylor jet carrying a value and its first three derivatives with
// respect to a single parameter. Scenario generators evaluate their closed
// forms on jets to obtain exact derivative data, independent of the spectral
// differentiation path.
struct Jet3 {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  Jet3() = default;
  Jet3(double value) : f(value) {}
  Jet3(double value, double first, double second, double third)
      : f(value), d1(first), d2(second), d3(third) {}

  static Jet3 variable(double u) { return {u, 1.0, 0.0, 0.0}; }
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}

inline Jet3 operator-(const Jet3& a, const Jet3& b) {
  return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}

inline Jet3 operator-(const Jet3& a) { return {-a.f, -a.d1, -a.d2, -a.d3}; }

inline Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.f * b.f,
          a.d1 * b.f + a.f * b.d1,
          a.d2 * b.f + 2.0 * a.d1 * b.d1 + a.f * b.d2,
          a.d3 * b.f + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.f * b.d3};
}

// Chain rule through a scalar function with derivatives f1, f2, f3 at g.f.
inline Jet3 compose(double f0, double f1, double f2, double f3, const Jet3& g) {
  Jet3 r;
  r.f = f0;
  r.d1 = f1 * g.d1;
  r.d2 = f2 * g.d1 * g.d1 + f1 * g.d2;
  r.d3 = f3 * g.d1 * g.d1 * g.d1 + 3.0 * f2 * g.d1 * g.d2 + f1 * g.d3;
  return r;
}

inline Jet3 sin(const Jet3& g) {
  const double s = std::sin(g.f), c = std::cos(g.f);
  return compose(s, c, -s, -c, g);
}

inline Jet3 cos(const Jet3& g) {
  const double s = std::sin(g.f), c = std::cos(g.f);
  return compose(c, -s, -c, s, g);
}

inline Jet3 sqrt(const Jet3& g) {
  const double r = std::sqrt(g.f);
  return compose(r, 0.5 / r, -0.25 / (r * g.f), 0.375 / (r * g.f * g.f), g);
}

inline Jet3 inv(const Jet3& g) {
  const double v = g.f;
  return compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v),
                 -6.0 / (v * v * v * v), g);
}

inline Jet3 operator/(const Jet3& a, const Jet3& b) { return a * inv(b); }

inline Jet3 operator*(double s, const Jet3& a) {
  return {s * a.f, s * a.d1, s * a.d2, s * a.d3};
}
inline Jet3 operator*(const Jet3& a, double s) { return s * a; }
inline Jet3 operator+(const Jet3& a, double s) {
  return {a.f + s, a.d1, a.d2, a.d3};
}
inline Jet3 operator+(double s, const Jet3& a) { return a + s; }
inline Jet3 operator-(const Jet3& a, double s) { return a + (-s); }
inline Jet3 operator/(const Jet3& a, double s) { return (1.0 / s) * a; }

}  // namespace csflab
