#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csflab/flow.hpp"
#include "csflab/functionals.hpp"
#include "csflab/geometry.hpp"
#include "csflab/scenarios.hpp"

namespace csflab {

// Evolution laws of the tracked functionals under the flow. Each identity
// equates the time derivative of an arclength integral with a quadrature of
// curvature/torsion data at the same instant.
enum class IdentityId {
  TotalCurvature,   // d/dt int kappa ds            = -int kappa tau^2 ds
  KappaLogKappa,    // d/dt int kappa log kappa ds
  KappaLogTau,      // d/dt int kappa log tau ds
  CtEntropy,        // d/dt int kappa log(tau/kappa^2) ds
  TauLogRelated,    // d/dt int tau log(tau^2/kappa^4) ds
  TotalTorsion,     // d/dt int tau ds              = int kappa^2 tau ds
};

inline const char* to_string(IdentityId id) {
  switch (id) {
    case IdentityId::TotalCurvature: return "total_curvature";
    case IdentityId::KappaLogKappa: return "kappa_log_kappa";
    case IdentityId::KappaLogTau: return "kappa_log_tau";
    case IdentityId::CtEntropy: return "ct_entropy";
    case IdentityId::TauLogRelated: return "tau_log_related";
    case IdentityId::TotalTorsion: return "total_torsion";
  }
  return "unknown";
}

inline std::optional<IdentityId> identity_from_string(const std::string& name) {
  for (IdentityId id :
       {IdentityId::TotalCurvature, IdentityId::KappaLogKappa,
        IdentityId::KappaLogTau, IdentityId::CtEntropy,
        IdentityId::TauLogRelated, IdentityId::TotalTorsion}) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

inline std::vector<IdentityId> all_identities() {
  return {IdentityId::TotalCurvature, IdentityId::KappaLogKappa,
          IdentityId::KappaLogTau,    IdentityId::CtEntropy,
          IdentityId::TauLogRelated,  IdentityId::TotalTorsion};
}

inline bool identity_requires_twisted(IdentityId id) {
  switch (id) {
    case IdentityId::KappaLogTau:
    case IdentityId::CtEntropy:
    case IdentityId::TauLogRelated:
      return true;
    default:
      return false;
  }
}

struct IdentityReport {
  IdentityId id = IdentityId::TotalCurvature;
  double t_mid = 0.0;
  double lhs = 0.0;       // centered time difference of the functional
  double rhs = 0.0;       // quadrature of the evolution law at t_mid
  double residual = 0.0;  // |lhs - rhs|
  double scale = 0.0;     // max(|lhs|, |rhs|, 1e-12)
};

namespace detail {

// d(field)/ds via the spectral u-derivative divided by the speed.
inline std::vector<double> arclength_derivative(const std::vector<double>& f,
                                                const FrenetField& fr) {
  auto d = spectral::derivative(f, 1);
  for (int i = 0; i < fr.n(); ++i) d[i] /= fr.v[i];
  return d;
}

inline void require_defined_torsion(const FrenetField& fr, IdentityId id) {
  if (!fr.all_valid()) {
    throw IdentityUnavailable(std::string(to_string(id)) +
                              ": torsion undefined at an inflection point");
  }
}

inline void require_twisted(const FrenetField& fr, IdentityId id) {
  require_defined_torsion(fr, id);
  for (int i = 0; i < fr.n(); ++i) {
    if (!(fr.tau[i] > fr.tau_floor)) {
      throw IdentityUnavailable(std::string(to_string(id)) +
                                ": curve is not twisted");
    }
  }
}

}  // namespace detail

// Value of the functional whose evolution the identity describes.
inline double identity_functional(const FlowSnapshot& snap, IdentityId id) {
  const FrenetField& fr = snap.frenet;
  const int n = fr.n();
  if (identity_requires_twisted(id)) {
    detail::require_twisted(fr, id);
  } else {
    detail::require_defined_torsion(fr, id);
  }
  std::vector<double> field(n);
  for (int i = 0; i < n; ++i) {
    const double k = fr.kappa[i], tau = fr.tau[i];
    switch (id) {
      case IdentityId::TotalCurvature: field[i] = k; break;
      case IdentityId::KappaLogKappa: field[i] = k * std::log(k); break;
      case IdentityId::KappaLogTau: field[i] = k * std::log(tau); break;
      case IdentityId::CtEntropy:
        field[i] = k * (std::log(tau) - 2.0 * std::log(k));
        break;
      case IdentityId::TauLogRelated:
        field[i] = tau * 2.0 * (std::log(tau) - 2.0 * std::log(k));
        break;
      case IdentityId::TotalTorsion: field[i] = tau; break;
    }
  }
  return integrate_scalar(field, fr);
}

// Quadrature of the identity's right-hand side on one snapshot.
inline double identity_rhs(const FlowSnapshot& snap, IdentityId id) {
  const FrenetField& fr = snap.frenet;
  const int n = fr.n();
  if (identity_requires_twisted(id)) {
    detail::require_twisted(fr, id);
  } else {
    detail::require_defined_torsion(fr, id);
  }

  const auto ds_kappa = detail::arclength_derivative(fr.kappa, fr);
  std::vector<double> log_tau(n, 0.0), log_kappa(n);
  for (int i = 0; i < n; ++i) log_kappa[i] = std::log(fr.kappa[i]);
  const auto ds_log_kappa = detail::arclength_derivative(log_kappa, fr);
  std::vector<double> ds_log_tau(n, 0.0);
  if (identity_requires_twisted(id)) {
    for (int i = 0; i < n; ++i) log_tau[i] = std::log(fr.tau[i]);
    ds_log_tau = detail::arclength_derivative(log_tau, fr);
  }

  std::vector<double> field(n);
  for (int i = 0; i < n; ++i) {
    const double k = fr.kappa[i], tau = fr.tau[i];
    const double k3 = k * k * k, tau2 = tau * tau;
    switch (id) {
      case IdentityId::TotalCurvature:
        field[i] = -k * tau2;
        break;
      case IdentityId::KappaLogKappa:
        field[i] = -ds_kappa[i] * ds_kappa[i] / k - k * std::log(k) * tau2 +
                   k3 - k * tau2;
        break;
      case IdentityId::KappaLogTau:
        field[i] = -k * tau2 * log_tau[i] + 2.0 * k3 -
                   2.0 * ds_kappa[i] * ds_kappa[i] / k +
                   k * ds_log_tau[i] * ds_log_tau[i];
        break;
      case IdentityId::CtEntropy:
        field[i] = -k * tau2 * (log_tau[i] - 2.0 * log_kappa[i]) +
                   k * ds_log_tau[i] * ds_log_tau[i] + 2.0 * k * tau2;
        break;
      case IdentityId::TauLogRelated:
        // Includes the cross term 4 (d_s log kappa)(d_s log tau), which the
        // integration by parts produces alongside the two squared gradients.
        field[i] = k * k * tau * 2.0 * (log_tau[i] - 2.0 * log_kappa[i]) +
                   tau * (4.0 * ds_log_kappa[i] * ds_log_kappa[i] -
                          2.0 * ds_log_tau[i] * ds_log_tau[i] +
                          4.0 * ds_log_kappa[i] * ds_log_tau[i]) +
                   4.0 * tau * tau2;
        break;
      case IdentityId::TotalTorsion:
        field[i] = k * k * tau;
        break;
    }
  }
  return integrate_scalar(field, fr);
}

// Centered-difference check across three equally spaced snapshots. The check
// stays independent of the integrator: it only reads stored snapshots.
inline IdentityReport check_identity(const FlowSnapshot& prev,
                                     const FlowSnapshot& mid,
                                     const FlowSnapshot& next, IdentityId id,
                                     bool flip_rhs_sign = false) {
  IdentityReport rep;
  rep.id = id;
  rep.t_mid = mid.t;
  const double dt_a = mid.t - prev.t, dt_b = next.t - mid.t;
  if (std::abs(dt_a - dt_b) > 1e-9 * std::max(dt_a, dt_b)) {
    throw InvalidParams("check_identity: snapshots must be equally spaced");
  }
  rep.lhs = (identity_functional(next, id) - identity_functional(prev, id)) /
            (dt_a + dt_b);
  rep.rhs = identity_rhs(mid, id) * (flip_rhs_sign ? -1.0 : 1.0);
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.scale = std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-12});
  return rep;
}

}  // namespace csflab
