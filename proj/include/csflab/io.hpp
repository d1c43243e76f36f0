#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csflab/errors.hpp"
#include "csflab/functionals.hpp"
#include "csflab/run_lab.hpp"
#include "csflab/singularity.hpp"
#include "csflab/verify.hpp"

namespace csflab::io {

// Shortest round-trip decimal form.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{}) {
    throw ConfigError("cannot parse number: '" + text + "'");
  }
  return value;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

inline constexpr const char* kSeriesHeader =
    "t,dt,length,kappa_max,kappa_min,tau_max,tau_min,total_curvature,"
    "total_torsion,ct_entropy,tau_log_quantity,d_quantity,sup_tau_over_kappa,"
    "sup_tau_over_kappa2,gaussian_entropy,min_tau_margin,flat_point_count,"
    "twisted";

inline void write_series_csv(std::ostream& os,
                             const std::vector<FunctionalSample>& series) {
  os << kSeriesHeader << "\n";
  for (const auto& s : series) {
    os << format_double(s.t) << ',' << format_double(s.dt) << ','
       << format_double(s.length) << ',' << format_double(s.kappa_max) << ','
       << format_double(s.kappa_min) << ',' << format_double(s.tau_max) << ','
       << format_double(s.tau_min) << ',' << format_double(s.total_curvature)
       << ',' << format_double(s.total_torsion) << ','
       << (s.ct_entropy ? format_double(*s.ct_entropy) : std::string()) << ','
       << format_double(s.tau_log_quantity) << ','
       << format_double(s.d_quantity) << ','
       << format_double(s.sup_tau_over_kappa) << ','
       << format_double(s.sup_tau_over_kappa2) << ','
       << (s.gaussian_entropy ? format_double(*s.gaussian_entropy)
                              : std::string())
       << ',' << format_double(s.min_tau_margin) << ',' << s.flat_point_count
       << ',' << (s.twisted ? "true" : "false") << "\n";
  }
}

inline std::vector<FunctionalSample> parse_series_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kSeriesHeader) {
    throw ConfigError("series.csv: unexpected header");
  }
  std::vector<FunctionalSample> series;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 18) throw ConfigError("series.csv: bad row");
    FunctionalSample s;
    s.t = parse_double(cells[0]);
    s.dt = parse_double(cells[1]);
    s.length = parse_double(cells[2]);
    s.kappa_max = parse_double(cells[3]);
    s.kappa_min = parse_double(cells[4]);
    s.tau_max = parse_double(cells[5]);
    s.tau_min = parse_double(cells[6]);
    s.total_curvature = parse_double(cells[7]);
    s.total_torsion = parse_double(cells[8]);
    if (!cells[9].empty()) s.ct_entropy = parse_double(cells[9]);
    s.tau_log_quantity = parse_double(cells[10]);
    s.d_quantity = parse_double(cells[11]);
    s.sup_tau_over_kappa = parse_double(cells[12]);
    s.sup_tau_over_kappa2 = parse_double(cells[13]);
    if (!cells[14].empty()) s.gaussian_entropy = parse_double(cells[14]);
    s.min_tau_margin = parse_double(cells[15]);
    s.flat_point_count = std::stoi(cells[16]);
    s.twisted = (cells[17] == "true");
    series.push_back(s);
  }
  return series;
}

inline void write_events_jsonl(std::ostream& os,
                               const std::vector<EventRecord>& events) {
  for (const auto& e : events) {
    nlohmann::json j{{"t", e.t},
                     {"kind", e.kind},
                     {"node", e.node},
                     {"min_kappa", e.min_kappa},
                     {"min_tau", e.min_tau},
                     {"flat_count", e.flat_count}};
    os << j.dump() << "\n";
  }
}

inline nlohmann::json verdict_to_json(
    const std::optional<SingularityVerdict>& verdict) {
  nlohmann::json j;
  if (!verdict) {
    j["classification"] = "Inconclusive";
    j["note"] = "insufficient blow-up data";
    return j;
  }
  j["classification"] = to_string(verdict->classification);
  j["omega_hat"] = verdict->omega_hat;
  j["omega_uncertainty"] = verdict->omega_uncertainty;
  j["indicator"] = verdict->indicator;
  j["indicator_spread"] = verdict->indicator_spread;
  j["indicator_growth"] = verdict->indicator_growth;
  auto weighted = [](const std::vector<double>& xs) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : xs) {
      if (std::isfinite(x)) {
        arr.push_back(x);
      } else {
        arr.push_back(nullptr);  // Q undefined (torsion not defined everywhere)
      }
    }
    return arr;
  };
  j["alpha_weighted_05"] = weighted(verdict->alpha_weighted_05);
  j["alpha_weighted_09"] = weighted(verdict->alpha_weighted_09);
  j["profile_center_node"] = verdict->profile_center_node;
  auto& pts = j["rescaled_profile"] = nlohmann::json::array();
  for (const auto& p : verdict->rescaled_profile.points) {
    pts.push_back({p.x, p.y, p.z});
  }
  return j;
}

inline void write_snapshot_csv(std::ostream& os, const DiscreteCurve& curve) {
  os << "x,y,z\n";
  for (const auto& p : curve.points) {
    os << format_double(p.x) << ',' << format_double(p.y) << ','
       << format_double(p.z) << "\n";
  }
}

inline void write_identities_csv(std::ostream& os,
                                 const std::vector<IdentityRow>& rows) {
  os << "identity_id,resolution,t_mid,lhs,rhs,residual,scale,measured_order\n";
  for (const auto& r : rows) {
    os << to_string(r.id) << ",n=" << r.n
       << ";snap_dt=" << format_double(r.snapshot_dt) << ','
       << format_double(r.t_mid) << ',' << format_double(r.lhs) << ','
       << format_double(r.rhs) << ',' << format_double(r.residual) << ','
       << format_double(r.scale) << ','
       << (r.measured_order ? format_double(*r.measured_order) : std::string())
       << "\n";
  }
}

struct SweepRow {
  double kappa0 = 0.0;
  double tau0 = 0.0;
  std::optional<double> c;
  std::optional<double> tau_limit;
  std::optional<double> c_drift_max;
  std::string error;
};

inline void write_phase_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "kappa0,tau0,C,tau_limit,C_drift_max,error\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& r : rows) {
    os << format_double(r.kappa0) << ',' << format_double(r.tau0) << ','
       << opt(r.c) << ',' << opt(r.tau_limit) << ',' << opt(r.c_drift_max)
       << ',' << r.error << "\n";
  }
}

// Flat key=value configuration with one nesting level (dotted keys) for
// preset parameters. '#' starts a comment.
inline std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace csflab::io
