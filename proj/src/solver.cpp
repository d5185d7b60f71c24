#include "hlr/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace hlr {

namespace {

double gauss_residual_of(const StaggeredField& E, const EdgeCoeff& eps,
                         const NodeField& rho) {
  NodeField div = discrete_div(E, eps);
  double m = 0.0;
  for (std::size_t p = 0; p < div.values.size(); ++p)
    m = std::max(m, std::fabs(div.values[p] - rho.values[p]));
  return m;
}

// Gauss-consistent initialization from a mean-zero charge field, linear in
// rho. Sweeps the outermost axis with plane-averaged charge, the next with
// line averages, and fills the rest with the row residual.
StaggeredField init_from_rho(const GridSpec& g, const NodeField& rho,
                             const EdgeCoeff& eps) {
  StaggeredField E(g);
  const int nx = g.cells[0], ny = g.cells[1], nz = g.cells[2];
  const double hx = g.spacing(0), hy = g.spacing(1);

  if (g.dim == 2) {
    std::vector<double> rho_bar(ny, 0.0);  // x-line averages
    for (int j = 0; j < ny; ++j) {
      double s = 0.0;
      for (int i = 0; i < nx; ++i) s += rho.at(i, j);
      rho_bar[j] = s / nx;
    }
    // y-sweep: D_y(j) - D_y(j-1) = hy * rho_bar(j), D_y(·,0) = 0
    std::vector<double> dy(ny, 0.0);
    for (int j = 1; j < ny; ++j) dy[j] = dy[j - 1] + hy * rho_bar[j];
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        E.comp[1][g.idx(i, j)] = dy[j] / eps.eps[1][g.idx(i, j)];
    // x-sweep: residual fill, D_x(0,·) = 0
    for (int j = 0; j < ny; ++j) {
      double dx = 0.0;
      for (int i = 1; i < nx; ++i) {
        dx += hx * (rho.at(i, j) - rho_bar[j]);
        E.comp[0][g.idx(i, j)] = dx / eps.eps[0][g.idx(i, j)];
      }
    }
    return E;
  }

  const double hz = g.spacing(2);
  // z-sweep from xy-plane averages
  std::vector<double> plane_bar(nz, 0.0);
  for (int k = 0; k < nz; ++k) {
    double s = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) s += rho.at(i, j, k);
    plane_bar[k] = s / (static_cast<double>(nx) * ny);
  }
  std::vector<double> dz(nz, 0.0);
  for (int k = 1; k < nz; ++k) dz[k] = dz[k - 1] + hz * plane_bar[k];
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        E.comp[2][g.idx(i, j, k)] = dz[k] / eps.eps[2][g.idx(i, j, k)];
  // y-sweep from x-line averages, minus the plane average already handled
  for (int k = 0; k < nz; ++k) {
    std::vector<double> line_bar(ny, 0.0);
    for (int j = 0; j < ny; ++j) {
      double s = 0.0;
      for (int i = 0; i < nx; ++i) s += rho.at(i, j, k);
      line_bar[j] = s / nx;
    }
    std::vector<double> dy(ny, 0.0);
    for (int j = 1; j < ny; ++j)
      dy[j] = dy[j - 1] + hy * (line_bar[j] - plane_bar[k]);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        E.comp[1][g.idx(i, j, k)] = dy[j] / eps.eps[1][g.idx(i, j, k)];
    // x-sweep: row residual
    for (int j = 0; j < ny; ++j) {
      double dx = 0.0;
      for (int i = 1; i < nx; ++i) {
        dx += hx * (rho.at(i, j, k) - line_bar[j]);
        E.comp[0][g.idx(i, j, k)] = dx / eps.eps[0][g.idx(i, j, k)];
      }
    }
  }
  return E;
}

}  // namespace

Problem Problem::make(const GridSpec& spec, NodeField rho, NodeField eps_nodes,
                      RelaxMethod method, double tol, int max_passes,
                      bool center_rho) {
  if (!(rho.spec == spec) || !(eps_nodes.spec == spec))
    throw std::invalid_argument("Problem: field/grid spec mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("Problem: tol must be > 0");
  if (max_passes < 1)
    throw std::invalid_argument("Problem: max_passes must be >= 1");
  Problem p;
  p.spec = spec;
  p.eps_nodes = std::move(eps_nodes);
  p.eps = edge_coeff(p.eps_nodes);
  p.method = method;
  p.tol = tol;
  p.max_passes = max_passes;
  p.center_rho = center_rho;

  double mean = average_node(rho);
  double scale = std::max(1.0, max_abs(rho.values));
  if (std::fabs(mean) > 1e-12 * scale) {
    if (!center_rho)
      throw std::invalid_argument(
          "Problem: rho has nonzero discrete mean (" + std::to_string(mean) +
          "); periodic solvability needs mean zero. Pass center_rho to "
          "subtract it explicitly.");
    for (double& v : rho.values) v -= mean;
    p.rho_shift = mean;
  }
  p.rho = std::move(rho);
  return p;
}

StaggeredField init_field(const Problem& problem) {
  return init_from_rho(problem.spec, problem.rho, problem.eps);
}

std::pair<StaggeredField, SolveReport> solve(const Problem& problem,
                                             const SolveOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  const double rho_scale = std::max(1.0, max_abs(problem.rho.values));

  StaggeredField E(problem.spec);
  if (opts.start) {
    E = *opts.start;
    double res = gauss_residual_of(E, problem.eps, problem.rho);
    if (res > 1e-10 * rho_scale)
      throw std::invalid_argument(
          "solve: start field violates the discrete Gauss law (residual " +
          std::to_string(res) + ")");
  } else {
    E = init_field(problem);
  }

  Sweeper sweeper(problem.eps, problem.method);
  SolveReport rep;
  rep.rho_mean_shift = problem.rho_shift;
  rep.energy_history.push_back(energy(E, problem.eps));

  for (int pass = 1; pass <= problem.max_passes; ++pass) {
    SweepTrace trace = sweeper.pass(E);
    rep.passes = pass;
    rep.energy_history.push_back(rep.energy_history.back() -
                                 trace.energy_drop);
    if (opts.check_gauss_every_pass) {
      rep.max_gauss_residual_any_pass =
          std::max(rep.max_gauss_residual_any_pass,
                   gauss_residual_of(E, problem.eps, problem.rho));
      auto avg = average_staggered(E);
      for (int a = 0; a < problem.spec.dim; ++a)
        rep.max_avg_field_any_pass =
            std::max(rep.max_avg_field_any_pass, std::fabs(avg[a]));
    }
    bool keep_going = true;
    if (opts.on_pass) keep_going = opts.on_pass(pass, E, trace);
    if (trace.energy_drop < problem.tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
    if (!keep_going) {
      rep.status = SolveStatus::Converged;
      break;
    }
    if (pass == problem.max_passes) rep.status = SolveStatus::MaxPassesReached;
  }

  Diagnostics d = diagnostics(E, problem);
  rep.dim = problem.spec.dim;
  rep.gauss_residual = d.gauss_residual;
  rep.curl_residual = d.curl_residual;
  rep.avg_field = d.avg_field;
  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return {std::move(E), std::move(rep)};
}

StaggeredField warm_start(const StaggeredField& E_prev,
                          const NodeField& rho_prev, const Problem& next) {
  if (!(E_prev.spec == next.spec) || !(rho_prev.spec == next.spec))
    throw std::invalid_argument("warm_start: grid spec mismatch");
  NodeField delta(next.spec);
  for (std::size_t p = 0; p < delta.values.size(); ++p)
    delta.values[p] = next.rho.values[p] - rho_prev.values[p];
  StaggeredField inc = init_from_rho(next.spec, delta, next.eps);
  StaggeredField out = E_prev;
  for (int a = 0; a < next.spec.dim; ++a)
    for (std::size_t p = 0; p < out.comp[a].size(); ++p)
      out.comp[a][p] += inc.comp[a][p];
  return out;
}

NodeField recover_potential(const StaggeredField& E) {
  const GridSpec& g = E.spec;
  double curl_max = max_abs(discrete_curl(E));
  double field_max = max_abs(E);
  if (curl_max > 1e-8 * std::max(1.0, field_max))
    throw std::runtime_error(
        "recover_potential: curl residual " + std::to_string(curl_max) +
        " too large for path-independent integration; relax further first");

  NodeField phi(g);
  const int nx = g.cells[0], ny = g.cells[1], nz = g.cells[2];
  const double hx = g.spacing(0), hy = g.spacing(1);
  // E_a = (phi(p) - phi(p + a)) / h_a, so phi accumulates as -h*E.
  for (int i = 0; i + 1 < nx; ++i)
    phi.at(i + 1, 0, 0) = phi.at(i, 0, 0) - hx * E.comp[0][g.idx(i, 0, 0)];
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j + 1 < ny; ++j)
      phi.at(i, j + 1, 0) = phi.at(i, j, 0) - hy * E.comp[1][g.idx(i, j, 0)];
  if (g.dim == 3) {
    const double hz = g.spacing(2);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (int k = 0; k + 1 < nz; ++k)
          phi.at(i, j, k + 1) =
              phi.at(i, j, k) - hz * E.comp[2][g.idx(i, j, k)];
  }
  double mean = average_node(phi);
  for (double& v : phi.values) v -= mean;
  return phi;
}

Diagnostics diagnostics(const StaggeredField& E, const Problem& problem) {
  Diagnostics d;
  d.gauss_residual = gauss_residual_of(E, problem.eps, problem.rho);
  d.curl_residual = max_abs(discrete_curl(E));
  d.avg_field = average_staggered(E);
  d.energy = energy(E, problem.eps);
  return d;
}

}  // namespace hlr
