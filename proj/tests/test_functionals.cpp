#include "test_helpers.hpp"

#include <cmath>
#include <numbers>

#include "csflab/functionals.hpp"

using namespace csflab;
using Catch::Approx;

namespace {

FlowSnapshot snapshot_of(const DiscreteCurve& curve, double t = 0.0) {
  return {t, 0.0, curve, frenet(curve)};
}

// Synthetic uniform Frenet data: kappa = tau = c everywhere on a curve of
// length L. Only the fields sample() reads are populated.
FlowSnapshot uniform_kappa_tau_snapshot(double c, double L, int n) {
  FlowSnapshot snap;
  FrenetField fr;
  const double v = L / kTwoPi;
  fr.v.assign(n, v);
  fr.kappa.assign(n, c);
  fr.tau.assign(n, c);
  fr.tangent.assign(n, Vec3{1, 0, 0});
  fr.normal.assign(n, Vec3{0, 1, 0});
  fr.binormal.assign(n, Vec3{0, 0, 1});
  fr.tau_valid.assign(n, 1);
  fr.ds.assign(n, v * kTwoPi / n);
  fr.length = L;
  fr.kappa_floor = 1e-7 * kTwoPi / L;
  fr.tau_floor = 1e-7 * kTwoPi / L;
  snap.frenet = fr;
  snap.curve.points.assign(n, Vec3{});
  return snap;
}

}  // namespace

TEST_CASE("sample on the unit circle", "[functionals]") {
  const auto snap = snapshot_of(scenarios::make("circle", {}, 256));
  const auto fs = sample(snap);
  CHECK_FALSE(fs.twisted);
  CHECK_FALSE(fs.ct_entropy.has_value());
  CHECK(std::abs(fs.total_torsion) < 1e-10);
  CHECK(fs.total_curvature == Approx(kTwoPi).margin(1e-10));
  CHECK(fs.d_quantity == Approx(kTwoPi).epsilon(1e-10));
  CHECK(fs.flat_point_count == 0);
}

TEST_CASE("entropy of a uniform kappa = tau = c field", "[functionals]") {
  // For constant kappa = tau = c: integral of kappa log(tau/kappa^2) is
  // c L log(1/c). With c = 1/2 and L = 2 pi sqrt(2) (one period of the unit
  // pitch helix) this is pi sqrt(2) log 2.
  const double c = 0.5;
  const double L = kTwoPi * std::sqrt(2.0);
  const auto fs = sample(uniform_kappa_tau_snapshot(c, L, 256));
  REQUIRE(fs.twisted);
  REQUIRE(fs.ct_entropy.has_value());
  const double expected = std::numbers::pi * std::sqrt(2.0) * std::log(2.0);
  CHECK(*fs.ct_entropy == Approx(expected).epsilon(1e-6));
  // Total torsion and the tau-log quantity have the same closed forms.
  CHECK(fs.total_torsion == Approx(c * L).epsilon(1e-10));
  CHECK(fs.tau_log_quantity ==
        Approx(c * L * 2.0 * std::log(1.0 / c)).epsilon(1e-8));
}

TEST_CASE("entropy scaling identity", "[functionals]") {
  const auto curve = scenarios::make("torus_coil", {}, 256);
  const auto base = sample(snapshot_of(curve));
  REQUIRE(base.twisted);
  for (double lambda : {0.5, 2.0, 10.0}) {
    DiscreteCurve scaled = curve;
    for (auto& p : scaled.points) p = lambda * p;
    const auto fs = sample(snapshot_of(scaled));
    REQUIRE(fs.ct_entropy.has_value());
    // E(lambda gamma) = E(gamma) + log(lambda) * total curvature.
    const double expected =
        *base.ct_entropy + std::log(lambda) * base.total_curvature;
    CHECK(*fs.ct_entropy == Approx(expected).margin(1e-8 * std::abs(expected)));
  }
}

TEST_CASE("Gaussian entropy of the circle", "[functionals]") {
  const auto curve = scenarios::make("circle", {}, 128);
  const double lambda = gaussian_entropy(curve);
  // Closed form: maximum of 2 pi (4 pi t0)^{-1/2} e^{-1/(4 t0)} at t0 = 1/2.
  const double expected = std::sqrt(kTwoPi / std::numbers::e);
  CHECK(lambda == Approx(expected).margin(1e-3));
  CHECK(lambda < 2.0);  // round-point certificate threshold
}

TEST_CASE("Gaussian entropy is scale invariant and >= 1", "[functionals]") {
  for (const std::string& id :
       {std::string("circle"), std::string("ellipse"), std::string("torus_coil"),
        std::string("spherical_lissajous"), std::string("perturbed_circle_3d")}) {
    const auto curve = scenarios::make(id, {}, 128);
    const double base = gaussian_entropy(curve);
    INFO("preset " << id);
    CHECK(base >= 1.0);
    DiscreteCurve scaled = curve;
    for (auto& p : scaled.points) p = 3.0 * p;
    CHECK(gaussian_entropy(scaled) == Approx(base).margin(1e-6 * base));
  }
}

TEST_CASE("spherical total torsion stays zero along the flow", "[functionals]") {
  const auto initial = scenarios::make("spherical_lissajous", {}, 256);
  FlowConfig config;
  config.t_end = 0.05;
  config.snapshot_dt = 0.01;
  const auto result = run(initial, config);
  for (const auto& snap : result.snapshots) {
    CHECK(std::abs(sample(snap).total_torsion) < 1e-6);
  }
}

TEST_CASE("monotonicity tracking on a circle run", "[functionals]") {
  const auto initial = scenarios::make("circle", {}, 128);
  FlowConfig config;
  config.t_end = 0.2;
  config.snapshot_dt = 0.02;
  const auto result = run(initial, config);
  std::vector<FunctionalSample> series;
  for (const auto& snap : result.snapshots) series.push_back(sample(snap));
  const auto rep = track_monotonicity(series);
  CHECK(rep.total_curvature_nonincreasing);
  CHECK(rep.twisted_intervals.empty());  // circle is never twisted
  for (const auto& fs : series) CHECK(std::abs(fs.total_torsion) < 1e-10);
}

TEST_CASE("monotonicity tracking on a twisted coil run", "[functionals]") {
  const auto initial = scenarios::make("torus_coil", {}, 256);
  FlowConfig config;
  config.t_end = 0.03;
  config.snapshot_dt = 2e-3;
  const auto result = run(initial, config);
  std::vector<FunctionalSample> series;
  for (const auto& snap : result.snapshots) series.push_back(sample(snap));
  REQUIRE(series.front().twisted);
  const auto rep = track_monotonicity(series);
  CHECK(rep.total_curvature_nonincreasing);
  REQUIRE_FALSE(rep.twisted_intervals.empty());
  for (const auto& interval : rep.twisted_intervals) {
    CHECK(interval.torsion_nondecreasing);
  }
}
