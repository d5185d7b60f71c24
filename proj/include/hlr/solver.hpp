#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hlr/grid.hpp"
#include "hlr/relax.hpp"

namespace hlr {

/// Fully assembled periodic Poisson problem in electric-field form.
struct Problem {
  GridSpec spec;
  NodeField rho;
  NodeField eps_nodes;
  EdgeCoeff eps;  // derived from eps_nodes
  RelaxMethod method = RelaxMethod::ZigzagHLR;
  double tol = 1e-7;       // per-pass energy-drop threshold
  int max_passes = 200000;
  bool center_rho = false;  // opt-in: subtract the discrete mean of rho
  double rho_shift = 0.0;   // mean that was subtracted, when center_rho fired

  static Problem make(const GridSpec& spec, NodeField rho, NodeField eps_nodes,
                      RelaxMethod method, double tol = 1e-7,
                      int max_passes = 200000, bool center_rho = false);
};

enum class SolveStatus { Converged, MaxPassesReached };

struct SolveReport {
  SolveStatus status = SolveStatus::Converged;
  int dim = 2;  // how many avg_field entries are meaningful
  int passes = 0;
  std::vector<double> energy_history;  // F^h after pass 0 (initial), 1, ...
  double gauss_residual = 0.0;         // final max-node |div(eps E) - rho|
  double curl_residual = 0.0;          // final max-plaquette |curl E|
  std::array<double, 3> avg_field{0.0, 0.0, 0.0};
  double wall_time_ms = 0.0;
  std::optional<double> error_inf;     // vs. supplied exact field, if any
  double rho_mean_shift = 0.0;         // recorded when center_rho fired
  // acceptance bookkeeping: worst per-pass values when per-pass checks are on
  double max_gauss_residual_any_pass = 0.0;
  double max_avg_field_any_pass = 0.0;
};

/// Called after each pass; return false to abort the pass loop early.
using PassCallback =
    std::function<bool(int pass, const StaggeredField& E, const SweepTrace&)>;

struct SolveOptions {
  std::optional<StaggeredField> start;  // must satisfy Gauss's law for rho
  bool check_gauss_every_pass = false;
  PassCallback on_pass;  // optional instrumentation hook
};

/// Gauss-consistent sweep initialization: line/plane-averaged charge feeds
/// the outer-axis sweep, residuals fill the inner sweeps; the result
/// satisfies the discrete Gauss law to round-off and is linear in rho.
StaggeredField init_field(const Problem& problem);

/// Full outer iteration: init (or validated start), repeated relaxation
/// passes until the per-pass energy drop falls below tol or max_passes is
/// exhausted (flagged on the report, not an error).
std::pair<StaggeredField, SolveReport> solve(const Problem& problem,
                                             const SolveOptions& opts = {});

/// E_prev + init_field(rho_new - rho_prev); exact for the new Gauss law by
/// linearity of the initialization sweeps.
StaggeredField warm_start(const StaggeredField& E_prev,
                          const NodeField& rho_prev, const Problem& next);

/// Invert the discrete gradient of a (near) curl-free field; gauge fixed by
/// mean subtraction. Rejects fields whose curl residual exceeds
/// 1e-8 * max|E| (path dependence would corrupt the line integrals).
NodeField recover_potential(const StaggeredField& E);

/// Assemble the residual/energy diagnostics of a field for a problem.
struct Diagnostics {
  double gauss_residual = 0.0;
  double curl_residual = 0.0;
  std::array<double, 3> avg_field{0.0, 0.0, 0.0};
  double energy = 0.0;
};
Diagnostics diagnostics(const StaggeredField& E, const Problem& problem);

}  // namespace hlr
