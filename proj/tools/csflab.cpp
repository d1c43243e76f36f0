// Command-line laboratory for curve shortening flow of closed space curves:
// evolves analytic presets, verifies the curvature/torsion evolution
// identities under refinement, and sweeps the spatially uniform reaction ODE.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csflab/io.hpp"
#include "csflab/reaction_ode.hpp"
#include "csflab/run_lab.hpp"
#include "csflab/verify.hpp"

namespace fs = std::filesystem;
using namespace csflab;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset;
  int n = 0;
  double t_end = -1.0;
  std::string out_dir = "out";
  unsigned seed = 0;
  bool lambda_entropy = false;
  std::string identities;
};

std::map<std::string, std::string> load_config(const CommonOptions& opts) {
  if (opts.config_path.empty()) return {};
  return io::parse_config_file(opts.config_path);
}

double get_num(const std::map<std::string, std::string>& kv,
               const std::string& key, double def) {
  auto it = kv.find(key);
  return it == kv.end() ? def : io::parse_double(it->second);
}

std::string get_str(const std::map<std::string, std::string>& kv,
                    const std::string& key, const std::string& def) {
  auto it = kv.find(key);
  return it == kv.end() ? def : it->second;
}

scenarios::Params preset_params_from(const std::map<std::string, std::string>& kv) {
  scenarios::Params params;
  for (const auto& [key, value] : kv) {
    if (key.rfind("preset.", 0) == 0) {
      params[key.substr(7)] = io::parse_double(value);
    }
  }
  return params;
}

std::vector<IdentityId> parse_identity_list(const std::string& csv) {
  if (csv.empty() || csv == "all") return all_identities();
  std::vector<IdentityId> ids;
  for (const auto& name : io::split(csv, ',')) {
    const auto id = identity_from_string(name);
    if (!id) throw ConfigError("unknown identity: " + name);
    ids.push_back(*id);
  }
  return ids;
}

std::vector<double> parse_number_list(const std::string& csv) {
  std::vector<double> out;
  for (const auto& cell : io::split(csv, ',')) {
    if (!cell.empty()) out.push_back(io::parse_double(cell));
  }
  return out;
}

int cmd_run(const CommonOptions& opts) {
  const auto kv = load_config(opts);
  RunConfig cfg;
  cfg.preset_id = !opts.preset.empty() ? opts.preset
                                       : get_str(kv, "preset", "circle");
  cfg.preset_params = preset_params_from(kv);
  cfg.n = opts.n > 0 ? opts.n : int(get_num(kv, "n", 256));
  cfg.seed = opts.seed ? opts.seed : unsigned(get_num(kv, "seed", 0));
  cfg.flow.t_end = opts.t_end >= 0.0 ? opts.t_end : get_num(kv, "t_end", 0.45);
  cfg.flow.sigma_cfl = get_num(kv, "sigma_cfl", cfg.flow.sigma_cfl);
  cfg.flow.kappa_stop = get_num(kv, "kappa_stop", cfg.flow.kappa_stop);
  cfg.flow.dt_floor = get_num(kv, "dt_floor", cfg.flow.dt_floor);
  cfg.flow.resample_every =
      int(get_num(kv, "resample_every", cfg.flow.resample_every));
  cfg.flow.snapshot_dt = get_num(kv, "snapshot_dt", cfg.flow.snapshot_dt);
  if (get_str(kv, "scheme", "spectral") == "fd4") {
    cfg.flow.scheme = DerivativeScheme::FiniteDifference4;
  }
  cfg.lambda_entropy = opts.lambda_entropy || get_num(kv, "lambda_entropy", 0) != 0;
  cfg.lambda_every = int(get_num(kv, "lambda_every", 1));
  cfg.rho = get_num(kv, "rho", cfg.rho);
  if (cfg.preset_id == "spherical_lissajous") {
    cfg.sphere_radius = scenarios::param_or(cfg.preset_params, "R", 1.0);
  }
  if (kv.count("sphere_radius")) {
    cfg.sphere_radius = get_num(kv, "sphere_radius", 1.0);
  }

  const fs::path out_dir = opts.out_dir;
  fs::create_directories(out_dir / "snapshots");

  const LabResult result = run_lab(cfg);

  {
    std::ofstream os(out_dir / "series.csv");
    io::write_series_csv(os, result.series);
  }
  {
    std::ofstream os(out_dir / "events.jsonl");
    io::write_events_jsonl(os, result.events);
  }
  {
    std::ofstream os(out_dir / "verdict.json");
    os << io::verdict_to_json(result.verdict).dump(2) << "\n";
  }
  for (size_t i = 0; i < result.flow.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%05zu.csv", i);
    std::ofstream os(out_dir / "snapshots" / name);
    io::write_snapshot_csv(os, result.flow.snapshots[i].curve);
  }

  std::cout << "run: preset=" << cfg.preset_id << " n=" << cfg.n
            << " stop=" << to_string(result.flow.stop)
            << " t_final=" << io::format_double(result.flow.t_final)
            << " snapshots=" << result.flow.snapshots.size() << "\n";
  if (result.verdict) {
    std::cout << "verdict: " << to_string(result.verdict->classification)
              << " omega_hat=" << io::format_double(result.verdict->omega_hat)
              << "\n";
  }
  return 0;
}

int cmd_verify(const CommonOptions& opts, const std::string& break_identity) {
  const auto kv = load_config(opts);
  VerifyConfig cfg;
  cfg.preset_id = !opts.preset.empty() ? opts.preset
                                       : get_str(kv, "preset", "torus_coil");
  cfg.preset_params = preset_params_from(kv);
  cfg.base_n = opts.n > 0 ? opts.n : int(get_num(kv, "base_n", cfg.base_n));
  cfg.base_snapshot_dt = get_num(kv, "base_snapshot_dt", cfg.base_snapshot_dt);
  cfg.t_end = opts.t_end >= 0.0 ? opts.t_end : get_num(kv, "t_end", cfg.t_end);
  cfg.refinements = int(get_num(kv, "refinements", cfg.refinements));
  cfg.identities = parse_identity_list(
      !opts.identities.empty() ? opts.identities
                               : get_str(kv, "identities", "all"));
  if (!break_identity.empty()) {
    const auto id = identity_from_string(break_identity);
    if (!id) throw ConfigError("unknown identity: " + break_identity);
    cfg.flip_rhs_of = *id;
  }

  const VerifyResult result = run_identity_suite(cfg);

  fs::create_directories(opts.out_dir);
  {
    std::ofstream os(fs::path(opts.out_dir) / "identities.csv");
    io::write_identities_csv(os, result.rows);
  }
  for (const auto& s : result.summaries) {
    std::cout << "identity " << to_string(s.id)
              << ": coarse residual/scale=" << io::format_double(s.worst_coarse_relative);
    for (double order : s.orders) {
      std::cout << " order=" << io::format_double(order);
    }
    std::cout << (s.pass ? " PASS" : " FAIL") << "\n";
  }
  if (!result.pass) {
    std::cerr << "verify failed: " << result.first_failure << "\n";
    return 1;
  }
  return 0;
}

int cmd_sweep(const CommonOptions& opts, const std::string& kappa0_list,
              const std::string& tau0_list) {
  const auto kv = load_config(opts);
  const auto kappas = parse_number_list(
      !kappa0_list.empty() ? kappa0_list : get_str(kv, "sweep.kappa0", "1"));
  const auto taus = parse_number_list(
      !tau0_list.empty() ? tau0_list : get_str(kv, "sweep.tau0", "1"));
  if (kappas.empty() || taus.empty()) {
    throw ConfigError("sweep: empty grid");
  }
  const double t_end =
      opts.t_end >= 0.0 ? opts.t_end : get_num(kv, "sweep.t_end", 5.0);

  std::vector<io::SweepRow> rows;
  for (double k0 : kappas) {
    for (double tau0 : taus) {
      io::SweepRow row;
      row.kappa0 = k0;
      row.tau0 = tau0;
      if (tau0 <= 0.0) {
        // tau = 0 ray: kappa' = kappa^3 blows up in finite time.
        const OdeResult r = integrate_reaction({k0, tau0, 0.0}, t_end, 1e-4);
        row.error = r.status == OdeStatus::BlowUp ? "BlowUp" : "NoLimit";
        rows.push_back(row);
        continue;
      }
      const double c = (k0 * k0 + tau0 * tau0) / tau0;
      // Step size resolving the fastest transient, kappa^2 <= C^2/4 on the arc.
      const double dt = std::min(1e-4, 0.01 / (c * c));
      const OdeResult r = integrate_reaction({k0, tau0, 0.0}, t_end, dt);
      row.c = c;
      double drift = 0.0;
      for (const auto& s : r.trajectory) {
        if (s.tau > 0.0) drift = std::max(drift, std::abs(conserved(s) - c));
      }
      row.c_drift_max = drift;
      if (r.status == OdeStatus::BlowUp) {
        row.error = "BlowUp";
      } else {
        row.tau_limit = r.trajectory.back().tau;
      }
      rows.push_back(row);
    }
  }

  fs::create_directories(opts.out_dir);
  std::ofstream os(fs::path(opts.out_dir) / "phase.csv");
  io::write_phase_csv(os, rows);
  std::cout << "sweep: " << rows.size() << " rows -> "
            << (fs::path(opts.out_dir) / "phase.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve shortening flow laboratory for closed space curves"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string break_identity, kappa0_list, tau0_list;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "key = value config file");
    cmd->add_option("--preset", opts.preset, "initial curve preset id");
    cmd->add_option("--n", opts.n, "node count");
    cmd->add_option("--t-end", opts.t_end, "simulation end time");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "seed for perturbed presets");
    cmd->add_flag("--lambda-entropy", opts.lambda_entropy,
                  "track the Gaussian entropy (expensive)");
    cmd->add_option("--identities", opts.identities,
                    "comma list of identities (default all)");
  };

  auto* run_cmd = app.add_subcommand("run", "evolve a preset and record series");
  add_common(run_cmd);
  auto* verify_cmd =
      app.add_subcommand("verify", "identity suite with refinement study");
  add_common(verify_cmd);
  verify_cmd
      ->add_option("--break-identity", break_identity,
                   "negate one identity's rhs (negative-control fixture)")
      ->group("");  // hidden
  auto* sweep_cmd =
      app.add_subcommand("sweep", "reaction-ODE sweep over initial conditions");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--kappa0", kappa0_list, "comma list of kappa0 values");
  sweep_cmd->add_option("--tau0", tau0_list, "comma list of tau0 values");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(opts);
    if (verify_cmd->parsed()) return cmd_verify(opts, break_identity);
    if (sweep_cmd->parsed()) return cmd_sweep(opts, kappa0_list, tau0_list);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const InvalidParams& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
