#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hlr/cases.hpp"
#include "hlr/relax.hpp"

namespace hlr::bench {

struct StudyRow {
  int n = 0;
  RelaxMethod method = RelaxMethod::SingleMesh;
  double error_inf = 0.0;
  double order = 0.0;  // log2(error(N/2)/error(N)); 0 for the coarsest row
  int passes = 0;
  double wall_time_ms = 0.0;
};

/// Manufactured-solution convergence study: solve the closed-form benchmark
/// problem on each grid with each method at a tolerance tight enough that
/// discretization error dominates, and measure the staggered max-norm field
/// error against the analytic field.
std::vector<StudyRow> run_convergence_study(const std::vector<int>& ns,
                                            const std::vector<RelaxMethod>& methods,
                                            bool three_d = false,
                                            double tol = 1e-16,
                                            int max_passes = 2000000);

struct ProfilePoint {
  RelaxMethod method = RelaxMethod::SingleMesh;
  int pass = 0;  // 0 = initial field
  double x = 0.0;
  double curl = 0.0;
};

/// Curl-residual cross-section along x at the plaquette row nearest the
/// given y, captured at the requested pass counts.
std::vector<ProfilePoint> residual_profile(int n,
                                           const std::vector<RelaxMethod>& methods,
                                           const std::vector<int>& checkpoints,
                                           double section_y = 0.5);

struct TimeStepRow {
  int step = 0;
  int passes = 0;
  double wall_time_ms = 0.0;
  double gauss_residual = 0.0;
  std::int64_t work = 0;  // counted staggered-entry touches of the step
  double spectral_ms = -1.0;  // FFT baseline; <0 when not applicable
};

struct TimeSeriesResult {
  RelaxMethod method = RelaxMethod::SingleMesh;
  std::vector<TimeStepRow> rows;
  double avg_wall_ms = 0.0;
  double avg_passes = 0.0;
  std::int64_t total_work = 0;
  double avg_spectral_ms = -1.0;
};

/// Seeded time-dependent harness: accumulate the random charge increments,
/// warm-start each step from the previous field, and record per-step pass
/// counts, timings and counted work. The homogeneous case also times the
/// spectral baseline (warmed up, median of 3).
TimeSeriesResult run_time_series(const cases::TimeSeriesSpec& tss,
                                 RelaxMethod method);

void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows);
void write_profile_csv(const std::string& path,
                       const std::vector<ProfilePoint>& points);
void write_timeseries_csv(const std::string& path,
                          const std::vector<TimeSeriesResult>& results);

}  // namespace hlr::bench
