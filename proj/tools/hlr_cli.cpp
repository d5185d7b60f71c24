// Command-line front end for the hlrsolver shared library. Talks to the
// solver exclusively through the C API in hlr.h; all numerical work and
// file output happen behind it.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hlr.h"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::string method;
  std::string tol;
  std::string seed;
  std::string max_passes;
  bool center_rho = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "config file (key = value lines)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--method", f.method, "single|forward|zigzag");
  cmd->add_option("--tol", f.tol, "per-pass energy-drop tolerance");
  cmd->add_option("--seed", f.seed, "PRNG seed");
  cmd->add_option("--max-passes", f.max_passes, "pass budget");
  cmd->add_flag("--center-rho", f.center_rho,
                "subtract the discrete mean of rho instead of rejecting it");
}

class Config {
 public:
  Config() : cfg_(hlr_config_create()) {}
  ~Config() { hlr_config_destroy(cfg_); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;

  bool load(const std::string& path) {
    return check(hlr_config_load_file(cfg_, path.c_str(), err_, sizeof err_));
  }
  bool set(const std::string& key, const std::string& value) {
    return check(
        hlr_config_set(cfg_, key.c_str(), value.c_str(), err_, sizeof err_));
  }
  // CLI flags override config-file keys.
  bool apply(const CommonFlags& f) {
    if (!f.config.empty() && !load(f.config)) return false;
    if (!f.out.empty() && !set("out", f.out)) return false;
    if (!f.method.empty() && !set("method", f.method)) return false;
    if (!f.tol.empty() && !set("tol", f.tol)) return false;
    if (!f.seed.empty() && !set("seed", f.seed)) return false;
    if (!f.max_passes.empty() && !set("max_passes", f.max_passes)) return false;
    if (f.center_rho && !set("center_rho", "true")) return false;
    return true;
  }
  int run(const char* command) {
    hlr_status s = hlr_run_command(cfg_, command, err_, sizeof err_);
    if (s != HLR_OK && err_[0] != '\0')
      std::fprintf(stderr, "hlr %s: %s\n", command, err_);
    return static_cast<int>(s);
  }

 private:
  bool check(hlr_status s) {
    if (s == HLR_OK) return true;
    std::fprintf(stderr, "hlr: %s\n", err_);
    return false;
  }
  hlr_config* cfg_;
  char err_[1024] = {0};
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Curl-free local-relaxation Poisson solver (single-mesh and "
      "hierarchical sweep schedules)"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string cas, cells, dim, rho_csv, eps_csv, ns, methods, steps,
      checkpoints;
  bool emit_phi = false;

  auto* solve = app.add_subcommand("solve", "solve one problem, emit fields + report");
  add_common(solve, flags);
  solve->add_option("--case", cas, "builtin case (varcoef|varcoef_3d|timeseries_hom|timeseries_inhom)");
  solve->add_option("--N", cells, "cells per axis");
  solve->add_option("--dim", dim, "grid dimension for CSV problems");
  solve->add_option("--rho-csv", rho_csv, "node CSV with the charge density");
  solve->add_option("--eps-csv", eps_csv, "node CSV with the permittivity");
  solve->add_flag("--emit-phi", emit_phi, "also recover and write phi.csv");

  auto* study = app.add_subcommand("study", "manufactured-solution convergence study");
  add_common(study, flags);
  study->add_option("--case", cas, "varcoef (default) or varcoef_3d");
  study->add_option("--Ns", ns, "comma list of grid sizes");
  study->add_option("--methods", methods, "comma list of methods");

  auto* profile = app.add_subcommand("profile", "curl-residual cross-sections per pass checkpoint");
  add_common(profile, flags);
  profile->add_option("--N", cells, "grid size");
  profile->add_option("--methods", methods, "comma list of methods");
  profile->add_option("--checkpoints", checkpoints, "comma list of pass counts");

  auto* timeseries = app.add_subcommand("timeseries", "seeded time-dependent benchmark");
  add_common(timeseries, flags);
  timeseries->add_option("--case", cas, "timeseries_hom (default) or timeseries_inhom");
  timeseries->add_option("--N", cells, "grid size");
  timeseries->add_option("--steps", steps, "number of time steps");
  timeseries->add_option("--methods", methods, "comma list of methods");

  auto* oracle = app.add_subcommand("oracle-check", "compare relaxation against the direct solver");
  add_common(oracle, flags);
  oracle->add_option("--N", cells, "grid size");
  oracle->add_option("--methods", methods, "comma list of methods");

  CLI11_PARSE(app, argc, argv);

  Config cfg;
  if (!cfg.apply(flags)) return 1;
  bool ok = true;
  if (!cas.empty()) ok = ok && cfg.set("case", cas);
  if (!cells.empty()) ok = ok && cfg.set("grid.cells", cells);
  if (!dim.empty()) ok = ok && cfg.set("grid.dim", dim);
  if (!rho_csv.empty()) ok = ok && cfg.set("rho_csv", rho_csv);
  if (!eps_csv.empty()) ok = ok && cfg.set("eps_csv", eps_csv);
  if (!ns.empty()) ok = ok && cfg.set("study.ns", ns);
  if (!methods.empty()) ok = ok && cfg.set("methods", methods);
  if (!steps.empty()) ok = ok && cfg.set("timeseries.steps", steps);
  if (!checkpoints.empty()) ok = ok && cfg.set("profile.checkpoints", checkpoints);
  if (emit_phi) ok = ok && cfg.set("emit_phi", "true");
  if (!ok) return 1;

  if (solve->parsed()) return cfg.run("solve");
  if (study->parsed()) return cfg.run("study");
  if (profile->parsed()) return cfg.run("profile");
  if (timeseries->parsed()) return cfg.run("timeseries");
  if (oracle->parsed()) return cfg.run("oracle-check");
  return 1;
}
