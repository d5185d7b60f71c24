#include "hlr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hlr/io.hpp"
#include "hlr/oracle.hpp"

namespace hlr::bench {

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::vector<StudyRow> run_convergence_study(const std::vector<int>& ns,
                                            const std::vector<RelaxMethod>& methods,
                                            bool three_d, double tol,
                                            int max_passes) {
  std::vector<StudyRow> rows;
  for (RelaxMethod m : methods) {
    double prev_error = 0.0;
    for (std::size_t r = 0; r < ns.size(); ++r) {
      int n = ns[r];
      cases::ManufacturedCase mc =
          three_d ? cases::varcoef_3d(n) : cases::varcoef(n);
      Problem p = Problem::make(mc.spec, mc.sample_rho(), mc.sample_eps(), m,
                                tol, max_passes);
      auto [E, rep] = solve(p);
      StudyRow row;
      row.n = n;
      row.method = m;
      row.error_inf = mc.error_inf(E);
      row.order = (r > 0 && ns[r] == 2 * ns[r - 1])
                      ? std::log2(prev_error / row.error_inf)
                      : 0.0;
      row.passes = rep.passes;
      row.wall_time_ms = rep.wall_time_ms;
      prev_error = row.error_inf;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ProfilePoint> residual_profile(int n,
                                           const std::vector<RelaxMethod>& methods,
                                           const std::vector<int>& checkpoints,
                                           double section_y) {
  std::vector<ProfilePoint> points;
  if (checkpoints.empty()) return points;
  int last = *std::max_element(checkpoints.begin(), checkpoints.end());

  for (RelaxMethod m : methods) {
    cases::ManufacturedCase mc = cases::varcoef(n);
    const GridSpec& g = mc.spec;
    double hy = g.spacing(1);
    int row = g.wrap(1, static_cast<int>(std::lround(section_y / hy - 0.5)));

    auto capture = [&](int pass, const StaggeredField& E) {
      CurlField c = discrete_curl(E);
      for (int i = 0; i < g.cells[0]; ++i)
        points.push_back({m, pass, (i + 0.5) * g.spacing(0),
                          c.comp[0][g.idx(i, row)]});
    };

    Problem p = Problem::make(g, mc.sample_rho(), mc.sample_eps(), m,
                              1e-300, std::max(last, 1));
    StaggeredField init = init_field(p);
    for (int cp : checkpoints)
      if (cp == 0) capture(0, init);
    SolveOptions opts;
    opts.start = init;
    opts.on_pass = [&](int pass, const StaggeredField& E, const SweepTrace&) {
      if (std::find(checkpoints.begin(), checkpoints.end(), pass) !=
          checkpoints.end())
        capture(pass, E);
      return pass < last;
    };
    solve(p, opts);
  }
  return points;
}

TimeSeriesResult run_time_series(const cases::TimeSeriesSpec& tss,
                                 RelaxMethod method) {
  TimeSeriesResult res;
  res.method = method;
  const GridSpec& g = tss.spec;

  NodeField rho(g);
  NodeField eps_nodes = cases::timeseries_eps(tss);
  StaggeredField E(g);
  bool spectral_warmed = false;

  for (int step = 0; step < tss.steps; ++step) {
    NodeField inc = cases::timeseries_increment(tss, step);
    NodeField rho_prev = rho;
    for (std::size_t q = 0; q < rho.values.size(); ++q)
      rho.values[q] += inc.values[q];

    Problem p = Problem::make(g, rho, eps_nodes, method, tss.tol, 200000,
                              /*center_rho=*/true);

    TimeStepRow row;
    row.step = step;
    std::int64_t work = 0;
    double t0 = now_ms();
    SolveOptions opts;
    opts.start = warm_start(E, rho_prev, p);
    opts.on_pass = [&](int, const StaggeredField&, const SweepTrace& tr) {
      // counted work: cell/block edge touches plus the line-shift touches
      work += tr.edge_touches +
              static_cast<std::int64_t>(g.dim) * static_cast<std::int64_t>(g.num_nodes());
      return true;
    };
    auto [Enew, rep] = solve(p, opts);
    row.wall_time_ms = now_ms() - t0;
    E = std::move(Enew);
    row.passes = rep.passes;
    row.gauss_residual = rep.gauss_residual;
    row.work = work;

    if (tss.homogeneous) {
      if (!spectral_warmed) {  // discard one warm-up solve (plan setup etc.)
        oracle::spectral_solve(rho, 1.0);
        spectral_warmed = true;
      }
      std::array<double, 3> t{};
      for (int r = 0; r < 3; ++r) {
        double s0 = now_ms();
        oracle::spectral_solve(rho, 1.0);
        t[r] = now_ms() - s0;
      }
      std::sort(t.begin(), t.end());
      row.spectral_ms = t[1];
    }
    res.rows.push_back(row);
  }

  for (const TimeStepRow& r : res.rows) {
    res.avg_wall_ms += r.wall_time_ms;
    res.avg_passes += r.passes;
    res.total_work += r.work;
  }
  res.avg_wall_ms /= std::max<std::size_t>(1, res.rows.size());
  res.avg_passes /= std::max<std::size_t>(1, res.rows.size());
  if (tss.homogeneous && !res.rows.empty()) {
    res.avg_spectral_ms = 0.0;
    for (const TimeStepRow& r : res.rows) res.avg_spectral_ms += r.spectral_ms;
    res.avg_spectral_ms /= res.rows.size();
  }
  return res;
}

void write_study_csv(const std::string& path,
                     const std::vector<StudyRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "N,method,error_inf,order,passes,wall_time_ms\n";
  for (const StudyRow& r : rows)
    out << r.n << ',' << method_name(r.method) << ','
        << io::format_double(r.error_inf) << ',' << io::format_double(r.order)
        << ',' << r.passes << ',' << io::format_double(r.wall_time_ms) << '\n';
}

void write_profile_csv(const std::string& path,
                       const std::vector<ProfilePoint>& points) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "method,pass,x,curl\n";
  for (const ProfilePoint& p : points)
    out << method_name(p.method) << ',' << p.pass << ','
        << io::format_double(p.x) << ',' << io::format_double(p.curl) << '\n';
}

void write_timeseries_csv(const std::string& path,
                          const std::vector<TimeSeriesResult>& results) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "step,method,passes,wall_time_ms,gauss_residual\n";
  for (const TimeSeriesResult& res : results)
    for (const TimeStepRow& r : res.rows)
      out << r.step << ',' << method_name(res.method) << ',' << r.passes << ','
          << io::format_double(r.wall_time_ms) << ','
          << io::format_double(r.gauss_residual) << '\n';
}

}  // namespace hlr::bench
