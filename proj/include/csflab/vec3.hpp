#pragma once

#include <cmath>

namespace csflab {

// Minimal 3-vector, templated so scenario generators can run on jets.
template <class T>
struct Vec3T {
  T x{}, y{}, z{};

  Vec3T& operator+=(const Vec3T& o) {
    x = x + o.x;
    y = y + o.y;
    z = z + o.z;
    return *this;
  }
};

template <class T>
inline Vec3T<T> operator+(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}

template <class T>
inline Vec3T<T> operator-(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

template <class T>
inline Vec3T<T> operator-(const Vec3T<T>& a) {
  return {-a.x, -a.y, -a.z};
}

template <class T, class S>
inline Vec3T<T> operator*(const S& s, const Vec3T<T>& a) {
  return {s * a.x, s * a.y, s * a.z};
}

template <class T, class S>
inline Vec3T<T> operator*(const Vec3T<T>& a, const S& s) {
  return s * a;
}

template <class T, class S>
inline Vec3T<T> operator/(const Vec3T<T>& a, const S& s) {
  return {a.x / s, a.y / s, a.z / s};
}

template <class T>
inline T dot(const Vec3T<T>& a, const Vec3T<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
inline Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
inline T norm2(const Vec3T<T>& a) {
  return dot(a, a);
}

inline double norm(const Vec3T<double>& a) { return std::sqrt(norm2(a)); }

using Vec3 = Vec3T<double>;

inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

}  // namespace csflab
