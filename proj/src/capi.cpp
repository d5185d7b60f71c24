#include "hlr.h"

#include <cstring>
#include <map>
#include <string>

#include "hlr/io.hpp"
#include "hlr/run.hpp"
#include "hlr/solver.hpp"
#include "hlr/cases.hpp"

namespace {

void fill_err(char* errbuf, size_t errlen, const std::string& msg) {
  if (!errbuf || errlen == 0) return;
  std::strncpy(errbuf, msg.c_str(), errlen - 1);
  errbuf[errlen - 1] = '\0';
}

}  // namespace

struct hlr_config {
  std::map<std::string, std::string> kv;
};

struct hlr_solution {
  hlr::StaggeredField field;
  hlr::SolveReport report;
  std::string report_json;
};

extern "C" {

hlr_config* hlr_config_create(void) { return new hlr_config; }

void hlr_config_destroy(hlr_config* cfg) { delete cfg; }

hlr_status hlr_config_load_file(hlr_config* cfg, const char* path,
                                char* errbuf, size_t errlen) {
  try {
    for (auto& [k, v] : hlr::io::parse_config_file(path)) cfg->kv[k] = v;
    return HLR_OK;
  } catch (const std::exception& e) {
    fill_err(errbuf, errlen, e.what());
    return HLR_ERROR;
  }
}

hlr_status hlr_config_set(hlr_config* cfg, const char* key, const char* value,
                          char* errbuf, size_t errlen) {
  if (!cfg || !key || !value) {
    fill_err(errbuf, errlen, "null argument");
    return HLR_ERROR;
  }
  cfg->kv[key] = value;
  return HLR_OK;
}

hlr_status hlr_run_command(const hlr_config* cfg, const char* command,
                           char* errbuf, size_t errlen) {
  hlr::run::CommandResult res = hlr::run::run_command(command, cfg->kv);
  if (!res.message.empty()) fill_err(errbuf, errlen, res.message);
  switch (res.exit_code) {
    case 0: return HLR_OK;
    case 2: return HLR_MAX_PASSES;
    default: return HLR_ERROR;
  }
}

hlr_status hlr_solve(const hlr_config* cfg, hlr_solution** out, char* errbuf,
                     size_t errlen) {
  if (!out) {
    fill_err(errbuf, errlen, "null output handle");
    return HLR_ERROR;
  }
  *out = nullptr;
  try {
    // reuse the command-level assembly by round-tripping through a builtin
    // case or CSV config, same key set as run_command
    auto kv = cfg->kv;
    std::string cas = kv.count("case") ? kv["case"] : "";
    hlr::RelaxMethod method =
        hlr::parse_method(kv.count("method") ? kv["method"] : "zigzag");
    double tol = kv.count("tol") ? std::stod(kv["tol"]) : 1e-7;
    int max_passes = kv.count("max_passes") ? std::stoi(kv["max_passes"]) : 200000;
    int n = kv.count("grid.cells") ? std::stoi(kv["grid.cells"]) : 32;
    if (cas != "varcoef" && cas != "varcoef_3d")
      throw std::runtime_error(
          "hlr_solve: set case=varcoef or case=varcoef_3d (use hlr_run_command for "
          "CSV-driven problems)");
    hlr::cases::ManufacturedCase mc =
        (cas == "varcoef") ? hlr::cases::varcoef(n) : hlr::cases::varcoef_3d(n);
    hlr::Problem p = hlr::Problem::make(mc.spec, mc.sample_rho(),
                                        mc.sample_eps(), method, tol,
                                        max_passes);
    auto [E, rep] = hlr::solve(p);
    rep.error_inf = mc.error_inf(E);
    auto* sol = new hlr_solution{std::move(E), std::move(rep), {}};
    sol->report_json = hlr::io::report_to_json(sol->report);
    *out = sol;
    return sol->report.status == hlr::SolveStatus::MaxPassesReached
               ? HLR_MAX_PASSES
               : HLR_OK;
  } catch (const std::exception& e) {
    fill_err(errbuf, errlen, e.what());
    return HLR_ERROR;
  }
}

void hlr_solution_destroy(hlr_solution* sol) { delete sol; }

int hlr_solution_dim(const hlr_solution* sol) { return sol->field.spec.dim; }

size_t hlr_solution_component_size(const hlr_solution* sol) {
  return sol->field.spec.num_nodes();
}

hlr_status hlr_solution_get_component(const hlr_solution* sol, int axis,
                                      double* out, size_t n) {
  if (!sol || !out || axis < 0 || axis >= sol->field.spec.dim ||
      n < sol->field.spec.num_nodes())
    return HLR_ERROR;
  std::memcpy(out, sol->field.comp[axis].data(),
              sol->field.spec.num_nodes() * sizeof(double));
  return HLR_OK;
}

const char* hlr_solution_report_json(const hlr_solution* sol) {
  return sol->report_json.c_str();
}

}  // extern "C"
