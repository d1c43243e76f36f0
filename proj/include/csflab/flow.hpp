#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "csflab/geometry.hpp"

namespace csflab {

struct FlowConfig {
  double t_end = 1.0;
  double sigma_cfl = 0.2;     // dt <= sigma_cfl * h_min^2
  double kappa_stop = 100.0;  // terminate once max kappa reaches this
  double dt_floor = 1e-10;
  int resample_every = 10;    // steps between uniform-arclength resampling
  double snapshot_dt = 1e-2;  // snapshots land exactly on multiples of this
  DerivativeScheme scheme = DerivativeScheme::Spectral;

  void validate() const {
    if (!(sigma_cfl > 0.0) || sigma_cfl > 0.5) {
      throw InvalidParams("FlowConfig: sigma_cfl must lie in (0, 0.5]");
    }
    if (!(kappa_stop > 0.0)) throw InvalidParams("FlowConfig: kappa_stop > 0");
    if (resample_every < 1) {
      throw InvalidParams("FlowConfig: resample_every >= 1");
    }
    if (!(snapshot_dt > 0.0)) throw InvalidParams("FlowConfig: snapshot_dt > 0");
  }
};

struct FlowState {
  double t = 0.0;
  DiscreteCurve curve;
  FrenetField frenet;
  long step_count = 0;
};

// 2/3-rule dealiasing: zeroes the top third of the Fourier modes of each
// coordinate. Aliasing from the nonlinear velocity slowly pumps energy into
// near-Nyquist modes under explicit stepping; periodic filtering removes it
// without touching the resolved spectrum of a smooth curve.
inline DiscreteCurve dealias(const DiscreteCurve& curve) {
  const int n = curve.n();
  const int cutoff = n / 3;
  auto comps = detail::component_arrays(curve);
  for (auto& comp : comps) {
    auto spec = spectral::analyze(comp);
    for (int k = cutoff + 1; k < int(spec.c.size()); ++k) spec.c[k] = 0.0;
    comp = spectral::synthesize(spec);
  }
  DiscreteCurve out = curve;
  out.points = detail::zip_components(comps[0], comps[1], comps[2]);
  return out;
}

// Curvature vector kappa*N, computed as the parametrization-independent
// projection (gamma_uu - <gamma_uu, T> T) / v^2. Well-defined at inflection
// points, where it vanishes.
inline std::vector<Vec3> velocity_field(
    const DiscreteCurve& curve,
    DerivativeScheme scheme = DerivativeScheme::Spectral) {
  curve.validate();
  const auto derivs = curve_derivatives(curve, scheme);
  const int n = curve.n();
  std::vector<Vec3> vel(n);
  double length = 0.0;
  for (int i = 0; i < n; ++i) length += norm(derivs[0][i]) * curve.param_step();
  const double v_floor = 1e-12 * length / kTwoPi;
  for (int i = 0; i < n; ++i) {
    const double v = norm(derivs[0][i]);
    if (v < v_floor) {
      throw DegenerateCurve("velocity_field: vanishing speed at node " +
                            std::to_string(i));
    }
    const Vec3 tangent = derivs[0][i] / v;
    const Vec3 d2 = derivs[1][i];
    vel[i] = (d2 - dot(d2, tangent) * tangent) / (v * v);
  }
  return vel;
}

// One classical RK4 step of d gamma / dt = kappa N.
inline FlowState step(const FlowState& state, double dt,
                      DerivativeScheme scheme = DerivativeScheme::Spectral) {
  if (!(dt > 0.0)) throw InvalidParams("step: dt must be positive");
  const DiscreteCurve& c0 = state.curve;
  const int n = c0.n();

  auto advance = [&](const std::vector<Vec3>& k, double factor) {
    DiscreteCurve c = c0;
    for (int i = 0; i < n; ++i) c.points[i] += factor * k[i];
    return c;
  };

  const auto k1 = velocity_field(c0, scheme);
  const auto k2 = velocity_field(advance(k1, 0.5 * dt), scheme);
  const auto k3 = velocity_field(advance(k2, 0.5 * dt), scheme);
  const auto k4 = velocity_field(advance(k3, dt), scheme);

  FlowState next;
  next.curve = c0;
  for (int i = 0; i < n; ++i) {
    next.curve.points[i] +=
        (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  next.t = state.t + dt;
  next.step_count = state.step_count + 1;
  next.frenet = frenet(next.curve, scheme);
  return next;
}

// Stability-limited step size: min of the parabolic clamp sigma * h_min^2,
// the curvature clamp 0.1 / M_t, and the remaining time to the next snapshot.
inline double choose_dt(const FlowState& state, const FlowConfig& config,
                        double to_next_snapshot) {
  double h_min = std::numeric_limits<double>::infinity();
  double kappa_max = 0.0;
  for (int i = 0; i < state.frenet.n(); ++i) {
    h_min = std::min(h_min, state.frenet.ds[i]);
    kappa_max = std::max(kappa_max, state.frenet.kappa[i]);
  }
  const double m_t = kappa_max * kappa_max;
  double dt = config.sigma_cfl * h_min * h_min;
  if (m_t > 0.0) dt = std::min(dt, 0.1 / m_t);
  dt = std::min(dt, to_next_snapshot);
  return dt;
}

enum class StopReason {
  TimeReached,
  SingularityReached,
  StepFloorReached,
  CurveDegenerate,
};

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::TimeReached: return "TimeReached";
    case StopReason::SingularityReached: return "SingularityReached";
    case StopReason::StepFloorReached: return "StepFloorReached";
    case StopReason::CurveDegenerate: return "CurveDegenerate";
  }
  return "Unknown";
}

struct FlowSnapshot {
  double t = 0.0;
  double dt = 0.0;  // size of the step that reached this snapshot
  DiscreteCurve curve;
  FrenetField frenet;
};

struct FlowRunResult {
  std::vector<FlowSnapshot> snapshots;
  StopReason stop = StopReason::TimeReached;
  double t_final = 0.0;
  FlowState final_state;
  long total_steps = 0;
  std::string message;
};

using SnapshotObserver = std::function<void(const FlowSnapshot&)>;

// Iterates choose_dt / step with periodic resampling until t_end, the
// curvature threshold, or the step floor. Observers fire at every snapshot,
// including t = 0 and the final state. On DegenerateCurve the partial result
// is returned with stop = CurveDegenerate.
inline FlowRunResult run(const DiscreteCurve& initial, const FlowConfig& config,
                         const std::vector<SnapshotObserver>& observers = {}) {
  config.validate();
  initial.validate();

  FlowRunResult result;
  FlowState state;
  state.curve = initial;
  state.frenet = frenet(initial, config.scheme);

  auto emit = [&](double dt_used) {
    FlowSnapshot snap{state.t, dt_used, state.curve, state.frenet};
    for (const auto& obs : observers) obs(snap);
    result.snapshots.push_back(std::move(snap));
  };

  auto max_kappa = [&]() {
    return *std::max_element(state.frenet.kappa.begin(),
                             state.frenet.kappa.end());
  };

  emit(0.0);
  int snap_index = 1;
  double last_dt = 0.0;
  try {
    while (true) {
      if (max_kappa() >= config.kappa_stop) {
        result.stop = StopReason::SingularityReached;
        break;
      }
      if (state.t >= config.t_end - 1e-14 * config.t_end) {
        result.stop = StopReason::TimeReached;
        break;
      }
      const double next_snap =
          std::min(snap_index * config.snapshot_dt, config.t_end);
      const double dt = choose_dt(state, config, next_snap - state.t);
      if (dt < config.dt_floor) {
        result.stop = StopReason::StepFloorReached;
        break;
      }
      const bool hits_snapshot = (next_snap - state.t) <= dt * (1.0 + 1e-12);
      state = step(state, dt, config.scheme);
      last_dt = dt;
      if (state.step_count % config.resample_every == 0) {
        state.curve = dealias(resample_uniform_arclength(state.curve));
        state.frenet = frenet(state.curve, config.scheme);
      }
      if (hits_snapshot) {
        state.t = next_snap;  // keep the snapshot grid exact
        ++snap_index;
        emit(dt);
      }
    }
  } catch (const DegenerateCurve& err) {
    result.stop = StopReason::CurveDegenerate;
    result.message = err.what();
  }
  // Record the terminal state if it is not already the last snapshot.
  if (result.snapshots.empty() ||
      result.snapshots.back().t < state.t - 1e-15) {
    emit(last_dt);
  }
  result.t_final = state.t;
  result.final_state = state;
  result.total_steps = state.step_count;
  return result;
}

}  // namespace csflab
