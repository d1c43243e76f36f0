#include "test_helpers.hpp"

#include <cmath>
#include <random>

#include "csflab/geometry.hpp"
#include "csflab/scenarios.hpp"

using namespace csflab;
using Catch::Approx;

namespace {

// Planar curve with an exact inflection at u = 0: the components are pure
// sine sums, so both second derivatives vanish there and the curvature is
// zero at node 0.
DiscreteCurve inflection_curve(int n) {
  DiscreteCurve c;
  c.points.resize(n);
  for (int j = 0; j < n; ++j) {
    const double u = kTwoPi * j / n;
    c.points[j] = {std::sin(u) + 0.3 * std::sin(2.0 * u),
                   std::sin(u) - 0.3 * std::sin(2.0 * u), 0.0};
  }
  return c;
}

double max_frenet_error(const std::string& id, const scenarios::Params& params,
                        int n, DerivativeScheme scheme) {
  const auto curve = scenarios::make(id, params, n);
  const auto fr = frenet(curve, scheme);
  const auto expected = scenarios::expected_frenet(id, params, n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(fr.kappa[i] - expected[i].kappa));
    worst = std::max(worst, std::abs(fr.tau[i] - expected[i].tau));
  }
  return worst;
}

}  // namespace

TEST_CASE("frenet of a circle of radius 2", "[geometry]") {
  const auto curve = scenarios::make("circle", {{"R", 2.0}}, 128);
  const auto fr = frenet(curve);
  for (int i = 0; i < fr.n(); ++i) {
    CHECK(fr.kappa[i] == Approx(0.5).margin(1e-10));
    CHECK(std::abs(fr.tau[i]) < 1e-10);
    CHECK(fr.v[i] == Approx(2.0).margin(1e-10));
  }
}

TEST_CASE("torus coil curvature approaches 1/R as r -> 0", "[geometry]") {
  const double R = 2.0;
  for (double r : {1e-2, 1e-3}) {
    const auto curve = scenarios::make(
        "torus_coil", {{"R", R}, {"r", r}, {"p", 1.0}, {"q", 8.0}}, 512);
    const auto fr = frenet(curve);
    double worst = 0.0;
    for (double k : fr.kappa) worst = std::max(worst, std::abs(k - 1.0 / R));
    CHECK(worst < 40.0 * r);
  }
}

TEST_CASE("pointwise Frenet formulas on the unit-pitch helix", "[geometry]") {
  // gamma(u) = (cos u, sin u, u): kappa = tau = 1/2 exactly.
  for (double u : {0.0, 0.7, 2.9, 5.5}) {
    const Vec3 d1{-std::sin(u), std::cos(u), 1.0};
    const Vec3 d2{-std::cos(u), -std::sin(u), 0.0};
    const Vec3 d3{std::sin(u), -std::cos(u), 0.0};
    const PointFrenet pf = frenet_pointwise(d1, d2, d3);
    CHECK(pf.kappa == Approx(0.5).margin(1e-12));
    CHECK(pf.tau == Approx(0.5).margin(1e-12));
    CHECK(pf.tau_valid);
  }
}

TEST_CASE("frenet flags torsion invalid at an inflection node", "[geometry]") {
  const auto curve = inflection_curve(256);
  const auto fr = frenet(curve);
  CHECK_FALSE(fr.tau_valid[0]);
  CHECK(fr.kappa[0] < fr.kappa_floor);
  // Away from the inflection the frame is well-defined.
  CHECK(fr.tau_valid[64]);
}

TEST_CASE("frenet rejects a cusped curve", "[geometry]") {
  DiscreteCurve astroid;
  astroid.points.resize(128);
  for (int j = 0; j < 128; ++j) {
    const double u = kTwoPi * j / 128;
    const double c = std::cos(u), s = std::sin(u);
    astroid.points[j] = {c * c * c, s * s * s, 0.0};
  }
  CHECK_THROWS_AS(frenet(astroid), DegenerateCurve);
}

TEST_CASE("curve validation rejects bad node counts", "[geometry]") {
  DiscreteCurve c;
  c.points.resize(15);
  for (int j = 0; j < 15; ++j) {
    const double u = kTwoPi * j / 15;
    c.points[j] = {std::cos(u), std::sin(u), 0.0};
  }
  CHECK_THROWS_AS(c.validate(), InvalidParams);
}

TEST_CASE("frame orthonormality on a twisted coil", "[geometry]") {
  const auto curve = scenarios::make("torus_coil", {}, 256);
  const auto fr = frenet(curve);
  for (int i = 0; i < fr.n(); ++i) {
    REQUIRE(fr.tau_valid[i]);
    CHECK(std::abs(dot(fr.tangent[i], fr.normal[i])) < 1e-8);
    CHECK(std::abs(dot(fr.tangent[i], fr.binormal[i])) < 1e-8);
    CHECK(std::abs(dot(fr.normal[i], fr.binormal[i])) < 1e-8);
    CHECK(norm(fr.tangent[i]) == Approx(1.0).margin(1e-8));
    CHECK(norm(fr.normal[i]) == Approx(1.0).margin(1e-8));
    CHECK(norm(fr.binormal[i]) == Approx(1.0).margin(1e-8));
    CHECK(fr.kappa[i] >= 0.0);
  }
}

TEST_CASE("spectral accuracy beats any fixed order", "[geometry]") {
  const scenarios::Params params = {{"R", 1.0}, {"a", 2.0}, {"b", 3.0},
                                    {"phi", 0.3}};
  const double e64 =
      max_frenet_error("spherical_lissajous", params, 64, DerivativeScheme::Spectral);
  const double e128 =
      max_frenet_error("spherical_lissajous", params, 128, DerivativeScheme::Spectral);
  CHECK(e64 / e128 > 1e2);
  // Acceptance-level accuracy at n = 256.
  const double e256 =
      max_frenet_error("spherical_lissajous", params, 256, DerivativeScheme::Spectral);
  CHECK(e256 < 1e-8);
}

TEST_CASE("finite-difference scheme shows order >= 3.5", "[geometry]") {
  const scenarios::Params params = {{"R", 1.0}, {"a", 2.0}, {"b", 3.0},
                                    {"phi", 0.3}};
  const double e128 = max_frenet_error("spherical_lissajous", params, 128,
                                       DerivativeScheme::FiniteDifference4);
  const double e256 = max_frenet_error("spherical_lissajous", params, 256,
                                       DerivativeScheme::FiniteDifference4);
  CHECK(std::log2(e128 / e256) > 3.5);
}

TEST_CASE("resampling a uniform circle is the identity", "[geometry]") {
  const auto curve = scenarios::make("circle", {{"R", 1.5}}, 128);
  const auto resampled = resample_uniform_arclength(curve);
  for (int i = 0; i < curve.n(); ++i) {
    CHECK(norm(resampled.points[i] - curve.points[i]) < 1e-10);
  }
}

TEST_CASE("resampling equalizes clustered segment lengths", "[geometry]") {
  const int n = 128;
  DiscreteCurve clustered;
  clustered.points.resize(n);
  for (int j = 0; j < n; ++j) {
    const double u = kTwoPi * j / n;
    const double warped = u + 0.8 * std::sin(u);  // strongly non-uniform
    clustered.points[j] = {std::cos(warped), std::sin(warped), 0.0};
  }
  const auto resampled = resample_uniform_arclength(clustered);
  std::vector<double> seg(n);
  for (int i = 0; i < n; ++i) {
    seg[i] = norm(resampled.points[(i + 1) % n] - resampled.points[i]);
  }
  const double lo = *std::min_element(seg.begin(), seg.end());
  const double hi = *std::max_element(seg.begin(), seg.end());
  CHECK((hi - lo) / hi < 1e-10);
}

TEST_CASE("resampling preserves length", "[geometry]") {
  for (const std::string& id :
       {std::string("ellipse"), std::string("torus_coil"),
        std::string("spherical_lissajous")}) {
    const auto curve = scenarios::make(id, {}, 256);
    const double before = frenet(curve).length;
    const double after = frenet(resample_uniform_arclength(curve)).length;
    CHECK(std::abs(after - before) / before < 1e-8);
  }
}

TEST_CASE("quadrature identities", "[geometry]") {
  SECTION("total curvature of the unit circle") {
    const auto curve = scenarios::make("circle", {}, 128);
    const auto fr = frenet(curve);
    CHECK(integrate_scalar(fr.kappa, fr) == Approx(kTwoPi).margin(1e-10));
  }
  SECTION("total torsion of a spherical curve vanishes") {
    const auto curve = scenarios::make("spherical_lissajous", {}, 256);
    const auto fr = frenet(curve);
    REQUIRE(fr.all_valid());
    CHECK(std::abs(integrate_scalar(fr.tau, fr)) < 1e-6);
  }
  SECTION("unit field reproduces the length against the chord sum") {
    for (int n : {64, 128, 256}) {
      const auto curve = scenarios::make("circle", {}, n);
      const auto fr = frenet(curve);
      std::vector<double> ones(n, 1.0);
      const double quad = integrate_scalar(ones, fr);
      CHECK(quad == Approx(kTwoPi).margin(1e-12));
      double chords = 0.0;
      for (int i = 0; i < n; ++i) {
        chords += norm(curve.points[(i + 1) % n] - curve.points[i]);
      }
      // Chord sum of the circle is short by L * pi^2 / (6 n^2) + O(n^-4).
      const double expected_gap = kTwoPi * std::numbers::pi * std::numbers::pi /
                                  (6.0 * n * n);
      CHECK(quad - chords == Approx(expected_gap).epsilon(1e-2));
    }
  }
  SECTION("masked nodes drop their weight") {
    const auto curve = scenarios::make("circle", {}, 64);
    const auto fr = frenet(curve);
    std::vector<double> ones(64, 1.0);
    std::vector<char> mask(64, 1);
    mask[0] = mask[1] = 0;
    const double partial = integrate_scalar(ones, fr, &mask);
    CHECK(partial == Approx(kTwoPi * 62.0 / 64.0).margin(1e-10));
  }
}

TEST_CASE("total curvature of convex planar presets is 2 pi", "[geometry]") {
  for (const auto& [id, params] :
       {std::pair<std::string, scenarios::Params>{"circle", {{"R", 0.7}}},
        {"ellipse", {{"a", 2.0}, {"b", 0.8}}}}) {
    const auto fr = frenet(scenarios::make(id, params, 256));
    CHECK(integrate_scalar(fr.kappa, fr) == Approx(kTwoPi).margin(1e-6));
  }
}

TEST_CASE("Euclidean invariance of kappa, tau, v", "[geometry]") {
  std::mt19937 rng(42);
  const auto curve = scenarios::make("torus_coil", {}, 256);
  const auto fr = frenet(curve);
  for (int trial = 0; trial < 5; ++trial) {
    const auto motion = testing::random_rigid_motion(rng);
    const auto fr2 = frenet(testing::transformed(curve, motion));
    CHECK(testing::max_abs_diff(fr.kappa, fr2.kappa) < 1e-9);
    CHECK(testing::max_abs_diff(fr.tau, fr2.tau) < 1e-9);
    CHECK(testing::max_abs_diff(fr.v, fr2.v) < 1e-9);
  }
}

TEST_CASE("scaling covariance of kappa, tau, v", "[geometry]") {
  const auto curve = scenarios::make("torus_coil", {}, 256);
  const auto fr = frenet(curve);
  for (double lambda : {0.5, 2.0, 10.0}) {
    DiscreteCurve scaled = curve;
    for (auto& p : scaled.points) p = lambda * p;
    const auto fr2 = frenet(scaled);
    for (int i = 0; i < fr.n(); ++i) {
      CHECK(fr2.kappa[i] == Approx(fr.kappa[i] / lambda).epsilon(1e-9));
      CHECK(fr2.tau[i] == Approx(fr.tau[i] / lambda).epsilon(1e-9));
      CHECK(fr2.v[i] == Approx(fr.v[i] * lambda).epsilon(1e-9));
    }
  }
}
