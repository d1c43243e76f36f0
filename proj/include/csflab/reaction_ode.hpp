#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "csflab/errors.hpp"

namespace csflab {

// Spatially uniform reduction of the curvature/torsion evolution:
//   kappa' = kappa^3 - kappa tau^2,  tau' = 2 kappa^2 tau.
// For tau > 0 the orbits are the circular arcs kappa^2 = C tau - tau^2 with
// C = (kappa^2 + tau^2) / tau conserved.
struct ReactionState {
  double kappa = 0.0;
  double tau = 0.0;
  double t = 0.0;
};

inline std::pair<double, double> reaction_rhs(double kappa, double tau) {
  return {kappa * kappa * kappa - kappa * tau * tau,
          2.0 * kappa * kappa * tau};
}

inline double conserved(const ReactionState& s) {
  if (!(s.tau > 0.0)) {
    throw UndefinedForZeroTau("conserved: requires tau > 0");
  }
  return (s.kappa * s.kappa + s.tau * s.tau) / s.tau;
}

enum class OdeStatus { TimeReached, BlowUp, KappaVanished };

struct OdeResult {
  std::vector<ReactionState> trajectory;
  OdeStatus status = OdeStatus::TimeReached;
};

// Fixed-step RK4. Integration stops early when the step would no longer
// resolve the dynamics (kappa^2 * dt exceeding guard_kappa_sq_dt, the
// finite-time blow-up expected on the tau = 0 ray) or when kappa has decayed
// onto the absorbing kappa = 0 ray.
inline OdeResult integrate_reaction(const ReactionState& initial, double t_end,
                                    double dt,
                                    double guard_kappa_sq_dt = 0.02) {
  if (!(dt > 0.0)) throw InvalidParams("integrate_reaction: dt > 0");
  OdeResult result;
  ReactionState s = initial;
  result.trajectory.push_back(s);
  const long n_steps = std::lround(std::ceil(t_end / dt - 1e-12));
  for (long step = 0; step < n_steps; ++step) {
    if (s.kappa * s.kappa * dt > guard_kappa_sq_dt ||
        !std::isfinite(s.kappa) || !std::isfinite(s.tau)) {
      result.status = OdeStatus::BlowUp;
      return result;
    }
    if (s.kappa < 1e-12) {
      result.status = OdeStatus::KappaVanished;
      return result;
    }
    const auto [k1k, k1t] = reaction_rhs(s.kappa, s.tau);
    const auto [k2k, k2t] =
        reaction_rhs(s.kappa + 0.5 * dt * k1k, s.tau + 0.5 * dt * k1t);
    const auto [k3k, k3t] =
        reaction_rhs(s.kappa + 0.5 * dt * k2k, s.tau + 0.5 * dt * k2t);
    const auto [k4k, k4t] =
        reaction_rhs(s.kappa + dt * k3k, s.tau + dt * k3t);
    s.kappa += dt / 6.0 * (k1k + 2.0 * k2k + 2.0 * k3k + k4k);
    s.tau += dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    s.t = initial.t + dt * double(step + 1);
    result.trajectory.push_back(s);
  }
  return result;
}

}  // namespace csflab
