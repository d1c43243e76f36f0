#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "csflab/flow.hpp"
#include "csflab/geometry.hpp"
#include "csflab/scenarios.hpp"

namespace csflab {

// One time slice of every tracked scalar functional and diagnostic ratio.
// Optional fields are absent when undefined (non-twisted curve) or disabled.
struct FunctionalSample {
  double t = 0.0;
  double dt = 0.0;
  double length = 0.0;
  double kappa_max = 0.0;
  double kappa_min = 0.0;
  double tau_max = 0.0;
  double tau_min = 0.0;
  double total_curvature = 0.0;
  double total_torsion = 0.0;
  std::optional<double> ct_entropy;    // integral of kappa log(tau/kappa^2)
  double tau_log_quantity = 0.0;       // integral of tau log(tau^2/kappa^4)
  double d_quantity = 0.0;             // sup kappa * L
  double sup_tau_over_kappa = 0.0;
  double sup_tau_over_kappa2 = 0.0;
  std::optional<double> gaussian_entropy;
  double min_tau_margin = 0.0;  // min tau * L / (2 pi) over valid nodes
  int flat_point_count = 0;
  bool twisted = false;
};

// Gaussian-weighted length, maximized over centers (centroid plus coarsened
// node candidates) and a log-spaced scale grid refined by golden section.
inline double gaussian_entropy(const DiscreteCurve& curve) {
  const FrenetField fr = frenet(curve, DerivativeScheme::Spectral);
  const int n = curve.n();
  const double L = fr.length;

  std::vector<Vec3> centers;
  Vec3 centroid{};
  for (int i = 0; i < n; ++i) centroid += (fr.ds[i] / L) * curve.points[i];
  centers.push_back(centroid);
  const int stride = std::max(1, n / 32);
  for (int i = 0; i < n; i += stride) centers.push_back(curve.points[i]);

  auto weighted_length = [&](const Vec3& x0, double t0) {
    double acc = 0.0;
    const double inv4t = 1.0 / (4.0 * t0);
    for (int i = 0; i < n; ++i) {
      acc += std::exp(-norm2(curve.points[i] - x0) * inv4t) * fr.ds[i];
    }
    return acc / std::sqrt(4.0 * std::numbers::pi * t0);
  };

  const double scale2 = (L / kTwoPi) * (L / kTwoPi);
  const int grid_size = 49;
  const double log_lo = std::log(1e-3 * scale2);
  const double log_hi = std::log(1e3 * scale2);

  double best = 0.0;
  Vec3 best_x0{};
  double best_log_t0 = log_lo;
  for (const Vec3& x0 : centers) {
    for (int g = 0; g < grid_size; ++g) {
      const double lt = log_lo + (log_hi - log_lo) * g / (grid_size - 1);
      const double val = weighted_length(x0, std::exp(lt));
      if (val > best) {
        best = val;
        best_x0 = x0;
        best_log_t0 = lt;
      }
    }
  }

  // Golden-section refinement in log t0 around the grid argmax.
  const double gap = (log_hi - log_lo) / (grid_size - 1);
  double a = best_log_t0 - gap, b = best_log_t0 + gap;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = weighted_length(best_x0, std::exp(c));
  double fd = weighted_length(best_x0, std::exp(d));
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = weighted_length(best_x0, std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = weighted_length(best_x0, std::exp(d));
    }
  }
  return std::max(best, std::max(fc, fd));
}

// Evaluates every tracked functional on one snapshot. Torsion-dependent
// functionals use only tau-valid nodes; losing twistedness is reported via
// the flag, never as an error, so runs continue past flat-point emergence.
inline FunctionalSample sample(const FlowSnapshot& snap,
                               bool compute_lambda = false) {
  const FrenetField& fr = snap.frenet;
  const int n = fr.n();
  FunctionalSample out;
  out.t = snap.t;
  out.dt = snap.dt;
  out.length = fr.length;

  out.kappa_max = *std::max_element(fr.kappa.begin(), fr.kappa.end());
  out.kappa_min = *std::min_element(fr.kappa.begin(), fr.kappa.end());
  out.d_quantity = out.kappa_max * fr.length;
  out.total_curvature = integrate_scalar(fr.kappa, fr);

  bool any_valid = false;
  bool all_valid = true;
  double tau_min = std::numeric_limits<double>::infinity();
  double tau_max = -std::numeric_limits<double>::infinity();
  double sup_tk = -std::numeric_limits<double>::infinity();
  double sup_tk2 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (!fr.tau_valid[i]) {
      all_valid = false;
      continue;
    }
    any_valid = true;
    tau_min = std::min(tau_min, fr.tau[i]);
    tau_max = std::max(tau_max, fr.tau[i]);
    sup_tk = std::max(sup_tk, fr.tau[i] / fr.kappa[i]);
    sup_tk2 = std::max(sup_tk2, fr.tau[i] / (fr.kappa[i] * fr.kappa[i]));
  }
  if (any_valid) {
    out.tau_min = tau_min;
    out.tau_max = tau_max;
    out.sup_tau_over_kappa = sup_tk;
    out.sup_tau_over_kappa2 = sup_tk2;
    out.min_tau_margin = tau_min * fr.length / kTwoPi;
  }

  std::vector<double> tau_field(n, 0.0), tau_log_field(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!fr.tau_valid[i]) continue;
    tau_field[i] = fr.tau[i];
    if (std::abs(fr.tau[i]) > 0.0) {
      // tau * log(tau^2 / kappa^4), evaluated as differences of logs.
      tau_log_field[i] = fr.tau[i] * 2.0 *
                         (std::log(std::abs(fr.tau[i])) - 2.0 * std::log(fr.kappa[i]));
    }
  }
  std::vector<char> valid_mask(fr.tau_valid.begin(), fr.tau_valid.end());
  out.total_torsion = integrate_scalar(tau_field, fr, &valid_mask);
  out.tau_log_quantity = integrate_scalar(tau_log_field, fr, &valid_mask);

  out.twisted = all_valid && any_valid && tau_min > fr.tau_floor;
  if (out.twisted) {
    std::vector<double> entropy_field(n);
    for (int i = 0; i < n; ++i) {
      entropy_field[i] =
          fr.kappa[i] * (std::log(fr.tau[i]) - 2.0 * std::log(fr.kappa[i]));
    }
    out.ct_entropy = integrate_scalar(entropy_field, fr);
  }

  out.flat_point_count = scenarios::count_flat_points(fr).count;
  if (compute_lambda) out.gaussian_entropy = gaussian_entropy(snap.curve);
  return out;
}

struct TwistedInterval {
  double t_begin = 0.0;
  double t_end = 0.0;
  bool torsion_nondecreasing = true;
  double worst_torsion_drop = 0.0;
  // Entropy trend over the steps where sup log(tau/kappa^2) < 2.
  bool entropy_nondecreasing_under_criterion = true;
  int entropy_steps_checked = 0;
};

struct MonotonicityReport {
  bool total_curvature_nonincreasing = true;
  double worst_curvature_rise = 0.0;
  std::vector<TwistedInterval> twisted_intervals;
};

// Scans a run's series for the monotone trends the evolution laws predict.
// Per-step tolerance is 1e-8 of the value's own scale.
inline MonotonicityReport track_monotonicity(
    const std::vector<FunctionalSample>& series) {
  MonotonicityReport rep;
  constexpr double kRelTol = 1e-8;
  for (size_t i = 1; i < series.size(); ++i) {
    const double prev = series[i - 1].total_curvature;
    const double cur = series[i].total_curvature;
    const double rise = cur - prev;
    if (rise > kRelTol * std::max(std::abs(prev), 1.0)) {
      rep.total_curvature_nonincreasing = false;
      rep.worst_curvature_rise = std::max(rep.worst_curvature_rise, rise);
    }
  }
  size_t i = 0;
  while (i < series.size()) {
    if (!series[i].twisted) {
      ++i;
      continue;
    }
    TwistedInterval interval;
    interval.t_begin = series[i].t;
    size_t j = i;
    while (j + 1 < series.size() && series[j + 1].twisted) ++j;
    interval.t_end = series[j].t;
    for (size_t k = i + 1; k <= j; ++k) {
      const double prev = series[k - 1].total_torsion;
      const double drop = prev - series[k].total_torsion;
      if (drop > kRelTol * std::max(std::abs(prev), 1.0)) {
        interval.torsion_nondecreasing = false;
        interval.worst_torsion_drop = std::max(interval.worst_torsion_drop, drop);
      }
      const bool criterion_prev =
          series[k - 1].sup_tau_over_kappa2 > 0.0 &&
          std::log(series[k - 1].sup_tau_over_kappa2) < 2.0;
      const bool criterion_cur =
          series[k].sup_tau_over_kappa2 > 0.0 &&
          std::log(series[k].sup_tau_over_kappa2) < 2.0;
      if (criterion_prev && criterion_cur && series[k - 1].ct_entropy &&
          series[k].ct_entropy) {
        ++interval.entropy_steps_checked;
        const double e_prev = *series[k - 1].ct_entropy;
        if (*series[k].ct_entropy <
            e_prev - kRelTol * std::max(std::abs(e_prev), 1.0)) {
          interval.entropy_nondecreasing_under_criterion = false;
        }
      }
    }
    rep.twisted_intervals.push_back(interval);
    i = j + 1;
  }
  return rep;
}

}  // namespace csflab
