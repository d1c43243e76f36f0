#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "csflab/geometry.hpp"
#include "csflab/scenarios.hpp"

namespace csflab::testing {

// Deterministic rigid motion generator for invariance properties.
struct RigidMotion {
  Vec3 axis;
  double angle;
  Vec3 shift;

  Vec3 apply(const Vec3& p) const {
    // Rodrigues rotation followed by translation.
    const Vec3 k = normalized(axis);
    const double c = std::cos(angle), s = std::sin(angle);
    const Vec3 rotated = c * p + s * cross(k, p) + (1.0 - c) * dot(k, p) * k;
    return rotated + shift;
  }
};

inline RigidMotion random_rigid_motion(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  RigidMotion m;
  m.axis = {unit(rng), unit(rng), unit(rng) + 2.0};
  m.angle = unit(rng) * 3.0;
  m.shift = {3.0 * unit(rng), 3.0 * unit(rng), 3.0 * unit(rng)};
  return m;
}

inline DiscreteCurve transformed(const DiscreteCurve& curve,
                                 const RigidMotion& motion) {
  DiscreteCurve out = curve;
  for (auto& p : out.points) p = motion.apply(p);
  return out;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace csflab::testing
