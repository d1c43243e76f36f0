#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "csflab/geometry.hpp"
#include "csflab/jet.hpp"
#include "csflab/vec3.hpp"

namespace csflab::scenarios {

using Params = std::map<std::string, double>;

inline double param_or(const Params& p, const std::string& key, double def) {
  auto it = p.find(key);
  return it == p.end() ? def : it->second;
}

// Closed-form generators, evaluated on double for positions and on Jet3 for
// exact derivative data.
template <class T>
Vec3T<T> eval_preset(const std::string& id, const Params& p, const T& u) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (id == "circle") {
    const double R = param_or(p, "R", 1.0);
    return {R * cos(u), R * sin(u), T(0.0)};
  }
  if (id == "ellipse") {
    const double a = param_or(p, "a", 2.0);
    const double b = param_or(p, "b", 1.0);
    return {a * cos(u), b * sin(u), T(0.0)};
  }
  if (id == "torus_coil") {
    const double R = param_or(p, "R", 2.0);
    const double r = param_or(p, "r", 0.5);
    const double pp = param_or(p, "p", 1.0);
    const double q = param_or(p, "q", 8.0);
    // Right-handed winding: this orientation keeps the torsion positive,
    // which the twisted presets require.
    const T rad = R + r * cos(q * u);
    return {rad * cos(pp * u), rad * sin(pp * u), -r * sin(q * u)};
  }
  if (id == "spherical_lissajous") {
    const double R = param_or(p, "R", 1.0);
    const double a = param_or(p, "a", 2.0);
    const double b = param_or(p, "b", 3.0);
    const double phi = param_or(p, "phi", 0.3);
    // Smooth nonvanishing map normalized onto the sphere of radius R.
    const T fx = cos(a * u);
    const T fy = sin(a * u);
    const T fz = sin(b * u + phi);
    const T len = sqrt(fx * fx + fy * fy + fz * fz);
    return {R * (fx / len), R * (fy / len), R * (fz / len)};
  }
  if (id == "perturbed_circle_3d") {
    const double eps = param_or(p, "eps", 0.08);
    const double m = param_or(p, "m", 3.0);
    const double phase = param_or(p, "phase", 0.0);
    return {cos(u), sin(u), eps * sin(m * u + phase)};
  }
  throw InvalidParams("unknown preset id: " + id);
}

inline void validate_params(const std::string& id, const Params& p) {
  if (id == "torus_coil") {
    const double R = param_or(p, "R", 2.0);
    const double r = param_or(p, "r", 0.5);
    const double pp = param_or(p, "p", 1.0);
    const double q = param_or(p, "q", 8.0);
    if (!(r > 0.0) || !(r < R)) {
      throw InvalidParams("torus_coil: need 0 < r < R");
    }
    const long pi_ = std::lround(pp), qi = std::lround(q);
    if (pi_ < 1 || qi < 1 || pp != double(pi_) || q != double(qi)) {
      throw InvalidParams("torus_coil: p, q must be positive integers");
    }
    if (std::gcd(pi_, qi) != 1) {
      throw InvalidParams("torus_coil: p, q must be coprime");
    }
  } else if (id == "circle") {
    if (!(param_or(p, "R", 1.0) > 0.0)) throw InvalidParams("circle: R > 0");
  } else if (id == "ellipse") {
    if (!(param_or(p, "a", 2.0) > 0.0) || !(param_or(p, "b", 1.0) > 0.0)) {
      throw InvalidParams("ellipse: a, b > 0");
    }
  } else if (id == "spherical_lissajous") {
    if (!(param_or(p, "R", 1.0) > 0.0)) {
      throw InvalidParams("spherical_lissajous: R > 0");
    }
    const double a = param_or(p, "a", 2.0), b = param_or(p, "b", 3.0);
    if (std::lround(a) < 1 || std::lround(b) < 1 || a != double(std::lround(a)) ||
        b != double(std::lround(b))) {
      throw InvalidParams("spherical_lissajous: a, b must be positive integers");
    }
  } else if (id == "perturbed_circle_3d") {
    const double eps = param_or(p, "eps", 0.08);
    if (!(eps > 0.0) || eps >= 0.5) {
      throw InvalidParams("perturbed_circle_3d: need 0 < eps < 0.5");
    }
  } else {
    throw InvalidParams("unknown preset id: " + id);
  }
}

inline DiscreteCurve make(const std::string& id, const Params& p, int n) {
  validate_params(id, p);
  DiscreteCurve curve;
  curve.points.resize(n);
  for (int j = 0; j < n; ++j) {
    const double u = kTwoPi * double(j) / double(n);
    curve.points[j] = eval_preset<double>(id, p, u);
  }
  curve.validate();
  return curve;
}

// Closed-form Frenet data at the grid nodes, via the jet of the generator.
// Independent of the spectral differentiation path.
inline std::vector<PointFrenet> expected_frenet(const std::string& id,
                                                const Params& p, int n) {
  std::vector<PointFrenet> out(n);
  for (int j = 0; j < n; ++j) {
    const double u = kTwoPi * double(j) / double(n);
    const Vec3T<Jet3> g = eval_preset<Jet3>(id, p, Jet3::variable(u));
    const Vec3 d1 = {g.x.d1, g.y.d1, g.z.d1};
    const Vec3 d2 = {g.x.d2, g.y.d2, g.z.d2};
    const Vec3 d3 = {g.x.d3, g.y.d3, g.z.d3};
    out[j] = frenet_pointwise(d1, d2, d3);
  }
  return out;
}

struct TwistReport {
  bool twisted = false;
  double kappa_margin = 0.0;  // min kappa * L / (2 pi)
  double tau_margin = 0.0;    // min tau * L / (2 pi)
};

inline TwistReport is_twisted(const DiscreteCurve& curve,
                              const FrenetField& fr) {
  (void)curve;
  TwistReport rep;
  double min_kappa = std::numeric_limits<double>::infinity();
  double min_tau = std::numeric_limits<double>::infinity();
  bool any_invalid = false;
  for (int i = 0; i < fr.n(); ++i) {
    min_kappa = std::min(min_kappa, fr.kappa[i]);
    if (fr.tau_valid[i]) {
      min_tau = std::min(min_tau, fr.tau[i]);
    } else {
      any_invalid = true;
    }
  }
  const double scale = fr.length / kTwoPi;
  rep.kappa_margin = min_kappa * scale;
  rep.tau_margin = any_invalid ? 0.0 : min_tau * scale;
  rep.twisted = !any_invalid && rep.kappa_margin > 1e-7 && rep.tau_margin > 1e-7;
  return rep;
}

struct FlatPointReport {
  int count = 0;
  bool partial = false;           // some nodes had undefined torsion
  bool planar_degenerate = false; // |tau| below the noise floor everywhere
};

// Counts sign changes of tau around the closed node cycle. A change is only
// counted when both flanking values exceed tau_floor in magnitude.
inline FlatPointReport count_flat_points(const FrenetField& fr) {
  FlatPointReport rep;
  std::vector<double> taus;
  taus.reserve(fr.n());
  for (int i = 0; i < fr.n(); ++i) {
    if (!fr.tau_valid[i]) {
      rep.partial = true;
      continue;
    }
    if (std::abs(fr.tau[i]) > fr.tau_floor) taus.push_back(fr.tau[i]);
  }
  if (taus.empty()) {
    rep.planar_degenerate = true;
    return rep;
  }
  const size_t m = taus.size();
  for (size_t i = 0; i < m; ++i) {
    if (taus[i] * taus[(i + 1) % m] < 0.0) ++rep.count;
  }
  return rep;
}

}  // namespace csflab::scenarios
