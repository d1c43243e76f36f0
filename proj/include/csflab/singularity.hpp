#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "csflab/flow.hpp"
#include "csflab/geometry.hpp"

namespace csflab {

struct BlowupPoint {
  double t = 0.0;
  double m = 0.0;  // sup kappa^2
  int kappa_argmax_node = -1;
  double sup_tau_over_kappa = 0.0;
  double sup_tau_over_kappa2 = 0.0;
  double sup_tau = 0.0;
  int tau_argmax_node = -1;
  // 2 kappa^2 + 2 d^2/ds^2 log kappa at the tau-argmax node; NaN when the
  // curve is not fully tau-valid.
  double q_at_tau_max = std::numeric_limits<double>::quiet_NaN();
  bool ratio_argmax_essential = false;  // kappa^2 >= rho * M at the tau/kappa^2 argmax
};

struct BlowupSeries {
  std::vector<BlowupPoint> points;
  double rho = 0.5;
};

// Extracts the blow-up diagnostics from a snapshot series.
inline BlowupSeries collect(const std::vector<FlowSnapshot>& snapshots,
                            double rho = 0.5) {
  BlowupSeries series;
  series.rho = rho;
  for (const auto& snap : snapshots) {
    const FrenetField& fr = snap.frenet;
    const int n = fr.n();
    BlowupPoint pt;
    pt.t = snap.t;
    double kmax = -1.0;
    for (int i = 0; i < n; ++i) {
      if (fr.kappa[i] > kmax) {
        kmax = fr.kappa[i];
        pt.kappa_argmax_node = i;
      }
    }
    pt.m = kmax * kmax;

    double sup_tk = -std::numeric_limits<double>::infinity();
    double sup_tk2 = -std::numeric_limits<double>::infinity();
    double sup_tau = -std::numeric_limits<double>::infinity();
    int ratio_node = -1;
    bool any_valid = false;
    for (int i = 0; i < n; ++i) {
      if (!fr.tau_valid[i]) continue;
      any_valid = true;
      sup_tk = std::max(sup_tk, fr.tau[i] / fr.kappa[i]);
      const double ratio2 = fr.tau[i] / (fr.kappa[i] * fr.kappa[i]);
      if (ratio2 > sup_tk2) {
        sup_tk2 = ratio2;
        ratio_node = i;
      }
      if (fr.tau[i] > sup_tau) {
        sup_tau = fr.tau[i];
        pt.tau_argmax_node = i;
      }
    }
    if (any_valid) {
      pt.sup_tau_over_kappa = sup_tk;
      pt.sup_tau_over_kappa2 = sup_tk2;
      pt.sup_tau = sup_tau;
      pt.ratio_argmax_essential =
          fr.kappa[ratio_node] * fr.kappa[ratio_node] >= rho * pt.m;
    }
    if (fr.all_valid() && pt.tau_argmax_node >= 0) {
      // Q = 2 kappa^2 + 2 d^2(log kappa)/ds^2 at the torsion maximum.
      std::vector<double> log_kappa(n);
      for (int i = 0; i < n; ++i) log_kappa[i] = std::log(fr.kappa[i]);
      const auto d1 = spectral::derivative(log_kappa, 1);
      std::vector<double> ds_log(n);
      for (int i = 0; i < n; ++i) ds_log[i] = d1[i] / fr.v[i];
      const auto d2 = spectral::derivative(ds_log, 1);
      const int j = pt.tau_argmax_node;
      const double dss_log_kappa = d2[j] / fr.v[j];
      pt.q_at_tau_max = 2.0 * fr.kappa[j] * fr.kappa[j] + 2.0 * dss_log_kappa;
    }
    series.points.push_back(pt);
  }
  return series;
}

struct OmegaEstimate {
  double omega_hat = 0.0;
  double uncertainty = 0.0;
  bool inverse_m_monotone = true;
};

// Least-squares fit of 1/M_t = b - a t over the last half of the series;
// omega_hat = b / a. Exact for the shrinking circle, where 1/M_t = R0^2 - 2t.
inline OmegaEstimate estimate_omega(const BlowupSeries& series) {
  const auto& pts = series.points;
  int growing = 0;
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].m > pts[i - 1].m) ++growing;
  }
  if (pts.size() < 8 || growing < 7) {
    throw InsufficientData("estimate_omega: need >= 8 snapshots of growing M_t");
  }
  const size_t begin = pts.size() / 2;
  OmegaEstimate est;
  for (size_t i = begin + 1; i < pts.size(); ++i) {
    if (1.0 / pts[i].m >= 1.0 / pts[i - 1].m) est.inverse_m_monotone = false;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = double(pts.size() - begin);
  for (size_t i = begin; i < pts.size(); ++i) {
    const double x = pts[i].t, y = 1.0 / pts[i].m;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  const double slope = (count * sxy - sx * sy) / denom;  // = -a
  const double intercept = (sy * sxx - sx * sxy) / denom;
  const double a = -slope;
  if (!(a > 0.0)) {
    throw InsufficientData("estimate_omega: 1/M_t is not decreasing");
  }
  est.omega_hat = intercept / a;
  double ss_res = 0.0;
  for (size_t i = begin; i < pts.size(); ++i) {
    const double fit = intercept + slope * pts[i].t;
    const double r = 1.0 / pts[i].m - fit;
    ss_res += r * r;
  }
  const double sigma = std::sqrt(ss_res / std::max(1.0, count - 2.0));
  est.uncertainty = sigma / a;
  return est;
}

enum class SingularityType { TypeI, TypeII, Inconclusive };

inline const char* to_string(SingularityType t) {
  switch (t) {
    case SingularityType::TypeI: return "TypeI";
    case SingularityType::TypeII: return "TypeII";
    case SingularityType::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

struct SingularityVerdict {
  double omega_hat = 0.0;
  double omega_uncertainty = 0.0;
  std::vector<double> indicator;  // M_t * (omega_hat - t) per snapshot
  double indicator_spread = 0.0;  // relative spread over the last decade
  double indicator_growth = 0.0;  // last/first over the observed window
  SingularityType classification = SingularityType::Inconclusive;
  // Q * (omega_hat - t)^alpha, reported raw with no verdict attached.
  std::vector<double> alpha_weighted_05;
  std::vector<double> alpha_weighted_09;
  DiscreteCurve rescaled_profile;
  int profile_center_node = 0;
};

// Verdict thresholds: TypeI requires the indicator to stabilize (relative
// spread < 10% over the last decade of approach to omega_hat); TypeII
// requires monotone growth by >= 10x over the observed window. The Type I /
// Type II dichotomy is asymptotic; these cutoffs are numerical heuristics
// and are exposed as parameters.
inline SingularityVerdict classify_series(const BlowupSeries& series,
                                          const OmegaEstimate& omega,
                                          double spread_threshold = 0.10,
                                          double growth_threshold = 10.0) {
  SingularityVerdict verdict;
  verdict.omega_hat = omega.omega_hat;
  verdict.omega_uncertainty = omega.uncertainty;
  const auto& pts = series.points;
  for (const auto& p : pts) {
    verdict.indicator.push_back(p.m * (omega.omega_hat - p.t));
    const double gap = std::max(omega.omega_hat - p.t, 0.0);
    verdict.alpha_weighted_05.push_back(p.q_at_tau_max * std::pow(gap, 0.5));
    verdict.alpha_weighted_09.push_back(p.q_at_tau_max * std::pow(gap, 0.9));
  }
  const double gap_last = omega.omega_hat - pts.back().t;
  if (!(gap_last > 0.0)) return verdict;

  // Last decade of approach: omega_hat - t within [gap_last, 10 gap_last].
  std::vector<double> window;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double gap = omega.omega_hat - pts[i].t;
    if (gap <= 10.0 * gap_last) window.push_back(verdict.indicator[i]);
  }
  if (window.size() >= 3) {
    const double lo = *std::min_element(window.begin(), window.end());
    const double hi = *std::max_element(window.begin(), window.end());
    const double mid = 0.5 * (lo + hi);
    verdict.indicator_spread = mid > 0.0 ? (hi - lo) / mid : 0.0;
  } else {
    verdict.indicator_spread = std::numeric_limits<double>::infinity();
  }
  bool monotone_growth = true;
  for (size_t i = 1; i < verdict.indicator.size(); ++i) {
    if (verdict.indicator[i] <= verdict.indicator[i - 1]) {
      monotone_growth = false;
      break;
    }
  }
  verdict.indicator_growth =
      verdict.indicator.front() > 0.0
          ? verdict.indicator.back() / verdict.indicator.front()
          : std::numeric_limits<double>::infinity();

  if (window.size() >= 3 && verdict.indicator_spread < spread_threshold) {
    verdict.classification = SingularityType::TypeI;
  } else if (monotone_growth && verdict.indicator_growth >= growth_threshold) {
    verdict.classification = SingularityType::TypeII;
  }
  return verdict;
}

// Rescales so max kappa = 1 and recenters at the curvature argmax node.
inline DiscreteCurve rescaled_profile(const FlowSnapshot& final_snap,
                                      int* center_node = nullptr) {
  const FrenetField& fr = final_snap.frenet;
  int argmax = 0;
  for (int i = 1; i < fr.n(); ++i) {
    if (fr.kappa[i] > fr.kappa[argmax]) argmax = i;
  }
  const double scale = fr.kappa[argmax];
  DiscreteCurve profile;
  profile.points.resize(final_snap.curve.n());
  const Vec3 center = final_snap.curve.points[argmax];
  for (int i = 0; i < final_snap.curve.n(); ++i) {
    profile.points[i] = scale * (final_snap.curve.points[i] - center);
  }
  if (center_node) *center_node = argmax;
  return profile;
}

inline SingularityVerdict classify(const BlowupSeries& series,
                                   const OmegaEstimate& omega,
                                   const FlowSnapshot& final_snap,
                                   double spread_threshold = 0.10,
                                   double growth_threshold = 10.0) {
  SingularityVerdict verdict =
      classify_series(series, omega, spread_threshold, growth_threshold);
  verdict.rescaled_profile =
      rescaled_profile(final_snap, &verdict.profile_center_node);
  return verdict;
}

enum class ProfileModel { Circle, GrimReaper };

namespace detail {

// Mean distance from each sample of `queries` to the polyline `target`,
// using a locally hinted nearest-segment search (both curves are ordered by
// arclength).
inline double mean_distance_to_polyline(const std::vector<Vec3>& queries,
                                        const std::vector<Vec3>& target) {
  const int m = static_cast<int>(target.size()) - 1;
  auto seg_dist2 = [&](const Vec3& p, int s) {
    const Vec3 a = target[s], b = target[s + 1];
    const Vec3 ab = b - a;
    double tt = dot(p - a, ab) / norm2(ab);
    tt = std::clamp(tt, 0.0, 1.0);
    return norm2(p - (a + tt * ab));
  };
  double acc = 0.0;
  int hint = 0;
  for (const Vec3& p : queries) {
    const int radius = 400;
    double best = std::numeric_limits<double>::infinity();
    int best_seg = hint;
    const int lo = std::max(0, hint - radius);
    const int hi = std::min(m - 1, hint + radius);
    for (int s = lo; s <= hi; ++s) {
      const double d2 = seg_dist2(p, s);
      if (d2 < best) {
        best = d2;
        best_seg = s;
      }
    }
    // Fall back to a full scan if the local window looks pinned to its edge.
    if (best_seg == lo || best_seg == hi) {
      for (int s = 0; s < m; ++s) {
        const double d2 = seg_dist2(p, s);
        if (d2 < best) {
          best = d2;
          best_seg = s;
        }
      }
    }
    hint = best_seg;
    acc += std::sqrt(best);
  }
  return acc / double(queries.size());
}

inline std::vector<Vec3> model_samples(ProfileModel model, double s_window,
                                       int count) {
  std::vector<Vec3> pts;
  pts.reserve(count);
  if (model == ProfileModel::Circle) {
    // Unit circle, apex at the origin, tangent +x, curving toward +y.
    for (int i = 0; i < count; ++i) {
      const double s = -s_window + 2.0 * s_window * i / (count - 1);
      pts.push_back({std::sin(s), 1.0 - std::cos(s), 0.0});
    }
  } else {
    // Grim Reaper y = -log cos x; arclength s = arctanh(sin x).
    const double x_max = std::asin(std::tanh(s_window));
    for (int i = 0; i < count; ++i) {
      const double s = -s_window + 2.0 * s_window * i / (count - 1);
      const double x = std::asin(std::tanh(s));
      (void)x_max;
      pts.push_back({x, -std::log(std::cos(x)), 0.0});
    }
  }
  return pts;
}

// Symmetric mean distance between an ordered planar window (apex at origin,
// tangent along +x expected after alignment) and a model curve.
inline double window_model_distance(const std::vector<Vec3>& window,
                                    ProfileModel model, double s_window) {
  const int dense = 50000;
  const auto model_pts = model_samples(model, s_window, dense);
  const double d_forward = mean_distance_to_polyline(window, model_pts);
  const double d_backward = mean_distance_to_polyline(model_pts, window);
  return 0.5 * (d_forward + d_backward);
}

}  // namespace detail

// Distance over planar window samples already expressed in the osculating
// plane of the curvature maximum (2D points in x/y, apex near the origin).
// Tries the four tangent/normal sign combinations and keeps the best fit.
inline double profile_window_distance(const std::vector<Vec3>& window_2d,
                                      ProfileModel model,
                                      double s_window = 3.0) {
  double best = std::numeric_limits<double>::infinity();
  for (int flip_x = 0; flip_x < 2; ++flip_x) {
    for (int flip_y = 0; flip_y < 2; ++flip_y) {
      std::vector<Vec3> w = window_2d;
      for (auto& p : w) {
        if (flip_x) p.x = -p.x;
        if (flip_y) p.y = -p.y;
        p.z = 0.0;
      }
      best = std::min(best, detail::window_model_distance(w, model, s_window));
    }
  }
  return best;
}

// Extracts the +/- s_window arclength neighborhood of the curvature argmax,
// densified through the trigonometric interpolant, projects it onto the
// osculating plane there, and compares against the model curve.
inline double rescaled_profile_distance(const DiscreteCurve& profile,
                                        ProfileModel model,
                                        double s_window = 3.0) {
  const FrenetField fr = frenet(profile, DerivativeScheme::Spectral);
  int argmax = 0;
  for (int i = 1; i < fr.n(); ++i) {
    if (fr.kappa[i] > fr.kappa[argmax]) argmax = i;
  }
  const int n = profile.n();
  const auto comps = detail::component_arrays(profile);
  const std::array<spectral::Spectrum, 3> spec = {
      spectral::analyze(comps[0]), spectral::analyze(comps[1]),
      spectral::analyze(comps[2])};

  // Cumulative arclength from the argmax node in both directions, walking
  // the speed samples; map the +/- s_window range to a u interval.
  const double du = profile.param_step();
  auto speed_at = [&](double u) {
    const double dx = spectral::eval(spec[0], u, 1);
    const double dy = spectral::eval(spec[1], u, 1);
    const double dz = spectral::eval(spec[2], u, 1);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  };
  const double u0 = argmax * du;
  auto march = [&](double direction) {
    // Integrate |gamma'| from u0 until s_window arclength is covered, then
    // trim the final partial step so the window ends at s_window exactly
    // (to leading order).
    double u = u0, s = 0.0;
    const double step_u = du / 8.0;
    while (s < s_window && std::abs(u - u0) < std::numbers::pi) {
      s += speed_at(u + 0.5 * direction * step_u) * step_u;
      u += direction * step_u;
    }
    if (s > s_window) u -= direction * (s - s_window) / speed_at(u);
    return u;
  };
  const double u_lo = march(-1.0), u_hi = march(1.0);

  const Vec3 apex = profile.points[argmax];
  const Vec3 t_axis = fr.tangent[argmax];
  const Vec3 n_axis = fr.tau_valid[argmax]
                          ? fr.normal[argmax]
                          : normalized(velocity_field(profile)[argmax]);

  const int samples = 50000;
  std::vector<Vec3> window(samples);
  for (int i = 0; i < samples; ++i) {
    const double u = u_lo + (u_hi - u_lo) * i / (samples - 1);
    const Vec3 p = {spectral::eval(spec[0], u), spectral::eval(spec[1], u),
                    spectral::eval(spec[2], u)};
    const Vec3 rel = p - apex;
    window[i] = {dot(rel, t_axis), dot(rel, n_axis), 0.0};
  }
  return profile_window_distance(window, model, s_window);
}

}  // namespace csflab
