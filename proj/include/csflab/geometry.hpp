#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "csflab/errors.hpp"
#include "csflab/spectral.hpp"
#include "csflab/vec3.hpp"

namespace csflab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class DerivativeScheme { Spectral, FiniteDifference4 };

// Closed polyline sample of a space curve on the uniform parameter grid
// u_j = 2*pi*j/n. Node count stays fixed for the lifetime of a run.
struct DiscreteCurve {
  std::vector<Vec3> points;
  bool closed = true;

  int n() const { return static_cast<int>(points.size()); }
  double param_step() const { return kTwoPi / n(); }

  void validate() const {
    const int count = n();
    if (count < 16 || count % 2 != 0) {
      throw InvalidParams("DiscreteCurve: node count must be even and >= 16");
    }
    for (int i = 0; i < count; ++i) {
      const Vec3 d = points[(i + 1) % count] - points[i];
      if (!(norm2(d) > 0.0)) {
        throw DegenerateCurve("DiscreteCurve: coincident adjacent nodes at " +
                              std::to_string(i));
      }
    }
  }
};

// Per-node Frenet data. Torsion, normal and binormal are only meaningful
// where tau_valid is set; elsewhere the curvature dropped below kappa_floor.
struct FrenetField {
  std::vector<double> v;      // |d gamma / du|
  std::vector<double> kappa;  // >= 0
  std::vector<double> tau;
  std::vector<Vec3> tangent;
  std::vector<Vec3> normal;
  std::vector<Vec3> binormal;
  std::vector<char> tau_valid;
  std::vector<double> ds;  // v * du quadrature weight
  double length = 0.0;
  double kappa_floor = 0.0;
  double tau_floor = 0.0;

  int n() const { return static_cast<int>(v.size()); }
  bool all_valid() const {
    return std::all_of(tau_valid.begin(), tau_valid.end(),
                       [](char f) { return f != 0; });
  }
};

struct PointFrenet {
  double v = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
  Vec3 tangent{}, normal{}, binormal{};
  bool tau_valid = false;
};

// Frenet data from the first three parameter derivatives at one point.
// kappa_floor <= 0 means "always form the frame".
inline PointFrenet frenet_pointwise(const Vec3& d1, const Vec3& d2,
                                    const Vec3& d3, double kappa_floor = 0.0) {
  PointFrenet out;
  out.v = norm(d1);
  const Vec3 cr = cross(d1, d2);
  const double cr_norm = norm(cr);
  out.kappa = cr_norm / (out.v * out.v * out.v);
  out.tangent = d1 / out.v;
  if (out.kappa >= kappa_floor && cr_norm > 0.0) {
    out.tau = dot(cr, d3) / (cr_norm * cr_norm);
    const Vec3 n_raw = d2 - dot(d2, out.tangent) * out.tangent;
    out.normal = normalized(n_raw);
    out.binormal = cross(out.tangent, out.normal);
    out.tau_valid = true;
  }
  return out;
}

namespace detail {

inline std::array<std::vector<double>, 3> component_arrays(
    const DiscreteCurve& curve) {
  const int n = curve.n();
  std::array<std::vector<double>, 3> comps;
  for (auto& c : comps) c.resize(n);
  for (int i = 0; i < n; ++i) {
    comps[0][i] = curve.points[i].x;
    comps[1][i] = curve.points[i].y;
    comps[2][i] = curve.points[i].z;
  }
  return comps;
}

inline std::vector<Vec3> zip_components(const std::vector<double>& x,
                                        const std::vector<double>& y,
                                        const std::vector<double>& z) {
  std::vector<Vec3> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = {x[i], y[i], z[i]};
  return out;
}

// 4th-order periodic central differences for orders 1..3.
inline std::vector<double> fd4_derivative(const std::vector<double>& f,
                                          int order, double h) {
  const int n = static_cast<int>(f.size());
  auto at = [&](int i) { return f[((i % n) + n) % n]; };
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    switch (order) {
      case 1:
        out[i] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) /
                 (12.0 * h);
        break;
      case 2:
        out[i] = (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) +
                  16.0 * at(i + 1) - at(i + 2)) /
                 (12.0 * h * h);
        break;
      case 3:
        out[i] = (at(i - 3) - 8.0 * at(i - 2) + 13.0 * at(i - 1) -
                  13.0 * at(i + 1) + 8.0 * at(i + 2) - at(i + 3)) /
                 (8.0 * h * h * h);
        break;
      default:
        out[i] = 0.0;
    }
  }
  return out;
}

}  // namespace detail

// First three parameter derivatives of the curve under the requested scheme.
inline std::array<std::vector<Vec3>, 3> curve_derivatives(
    const DiscreteCurve& curve, DerivativeScheme scheme) {
  const auto comps = detail::component_arrays(curve);
  std::array<std::array<std::vector<double>, 3>, 3> d;  // [order][component]
  for (int c = 0; c < 3; ++c) {
    if (scheme == DerivativeScheme::Spectral) {
      const auto spec = spectral::analyze(comps[c]);
      for (int o = 0; o < 3; ++o) {
        d[o][c] = spectral::synthesize(spectral::differentiate(spec, o + 1));
      }
    } else {
      const double h = curve.param_step();
      for (int o = 0; o < 3; ++o) {
        d[o][c] = detail::fd4_derivative(comps[c], o + 1, h);
      }
    }
  }
  return {detail::zip_components(d[0][0], d[0][1], d[0][2]),
          detail::zip_components(d[1][0], d[1][1], d[1][2]),
          detail::zip_components(d[2][0], d[2][1], d[2][2])};
}

inline FrenetField frenet(const DiscreteCurve& curve,
                          DerivativeScheme scheme = DerivativeScheme::Spectral) {
  curve.validate();
  const int n = curve.n();
  const double du = curve.param_step();
  const auto derivs = curve_derivatives(curve, scheme);

  FrenetField out;
  out.v.resize(n);
  out.kappa.resize(n);
  out.tau.assign(n, 0.0);
  out.tangent.resize(n);
  out.normal.assign(n, Vec3{});
  out.binormal.assign(n, Vec3{});
  out.tau_valid.assign(n, 0);
  out.ds.resize(n);

  double length = 0.0;
  for (int i = 0; i < n; ++i) {
    out.v[i] = norm(derivs[0][i]);
    out.ds[i] = out.v[i] * du;
    length += out.ds[i];
  }
  out.length = length;
  out.kappa_floor = 1e-7 * kTwoPi / length;
  out.tau_floor = 1e-7 * kTwoPi / length;

  const double v_floor = 1e-12 * length / kTwoPi;
  for (int i = 0; i < n; ++i) {
    if (out.v[i] < v_floor) {
      throw DegenerateCurve("frenet: vanishing speed at node " +
                            std::to_string(i));
    }
    const PointFrenet pf = frenet_pointwise(derivs[0][i], derivs[1][i],
                                            derivs[2][i], out.kappa_floor);
    out.kappa[i] = pf.kappa;
    out.tangent[i] = pf.tangent;
    if (pf.tau_valid) {
      out.tau[i] = pf.tau;
      out.normal[i] = pf.normal;
      out.binormal[i] = pf.binormal;
      out.tau_valid[i] = 1;
    }
  }
  return out;
}

// Periodic rectangle-rule quadrature of a nodal field against arclength.
// Masked-out nodes are dropped together with their weight.
inline double integrate_scalar(const std::vector<double>& field,
                               const FrenetField& fr,
                               const std::vector<char>* mask = nullptr) {
  double acc = 0.0;
  for (int i = 0; i < fr.n(); ++i) {
    if (mask && !(*mask)[i]) continue;
    acc += field[i] * fr.ds[i];
  }
  return acc;
}

// Same geometric image, nodes moved to equal arclength spacing. Node 0 stays
// at parameter u = 0. Interpolation is trigonometric.
inline DiscreteCurve resample_uniform_arclength(const DiscreteCurve& curve) {
  curve.validate();
  const int n = curve.n();
  const auto comps = detail::component_arrays(curve);
  std::array<spectral::Spectrum, 3> spec = {spectral::analyze(comps[0]),
                                            spectral::analyze(comps[1]),
                                            spectral::analyze(comps[2])};
  // Speed samples from the spectral first derivative.
  std::vector<double> v(n);
  {
    std::array<std::vector<double>, 3> d1;
    for (int c = 0; c < 3; ++c) {
      d1[c] = spectral::synthesize(spectral::differentiate(spec[c], 1));
    }
    for (int i = 0; i < n; ++i) {
      v[i] = std::sqrt(d1[0][i] * d1[0][i] + d1[1][i] * d1[1][i] +
                       d1[2][i] * d1[2][i]);
    }
  }
  const auto v_spec = spectral::analyze(v);
  const double total_len = v_spec.c[0].real() * kTwoPi;
  if (!(total_len > 0.0)) {
    throw DegenerateCurve("resample: nonpositive length");
  }

  DiscreteCurve out;
  out.points.resize(n);
  double u = 0.0;
  for (int k = 0; k < n; ++k) {
    const double target = total_len * double(k) / double(n);
    // Newton on s(u) = target; s' = v > 0. Seed with the previous solution
    // advanced by one uniform step.
    if (k > 0) u += kTwoPi / n;
    for (int it = 0; it < 60; ++it) {
      const double s_val = spectral::eval_antiderivative(v_spec, u);
      const double dv = spectral::eval(v_spec, u);
      const double delta = (s_val - target) / dv;
      u -= delta;
      if (std::abs(delta) < 1e-15 * kTwoPi) break;
    }
    out.points[k] = {spectral::eval(spec[0], u), spectral::eval(spec[1], u),
                     spectral::eval(spec[2], u)};
  }
  out.points[0] = curve.points[0];
  out.validate();
  return out;
}

}  // namespace csflab
