#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "hlr/grid.hpp"
#include "hlr/solver.hpp"

namespace hlr::cases {

/// Closed-form benchmark problem: exact potential and permittivity with the
/// charge density derived analytically, plus the exact field at staggered
/// points for error measurement.
struct ManufacturedCase {
  GridSpec spec;
  std::function<double(double, double, double)> phi_exact;
  std::function<double(double, double, double)> eps_exact;
  std::function<double(double, double, double)> rho_exact;
  // component a of -grad phi at an arbitrary point
  std::function<double(int, double, double, double)> e_exact;

  NodeField sample_rho() const;
  NodeField sample_eps() const;
  StaggeredField sample_e_exact() const;
  /// Max over both/all staggered component arrays of |E - E_exact|.
  double error_inf(const StaggeredField& E) const;
};

/// phi = cos(pi x/2) sin(pi y/2), eps = 2 + cos(pi x/2) cos(pi y/2) on
/// (0,4)^2, N x N cells.
ManufacturedCase varcoef(int n);

/// 3D analog: phi = cos(pi x/2) sin(pi y/2) cos(pi z/2),
/// eps = 2 + cos(pi x/2) cos(pi y/2) cos(pi z/2) on (0,4)^3.
ManufacturedCase varcoef_3d(int n);

/// Deterministic splitmix64 stream; the per-step coefficient draws of the
/// time series are fully pinned by (seed, step).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// uniform draw in the open interval (0,1)
  double next_uniform();

 private:
  std::uint64_t state_;
};

/// Seeded time-dependent charge sequence: each step adds 16 random cosine/
/// sine mode pairs with coefficients a_1..a_16, b_1..b_16 ~ U(0,1) drawn in
/// fixed order from a per-step stream, scaled by 1/(64 sum(a_k + b_k)).
struct TimeSeriesSpec {
  GridSpec spec;
  int steps = 100;
  std::uint64_t seed = 0;
  double tol = 1e-7;
  bool homogeneous = true;  // eps == 1; otherwise the varcoef permittivity
  bool zero_coefficients = false;  // test hook: force a_k = b_k = 0
};

/// The analytic increment of step `step` sampled at nodes, discretely
/// mean-centered.
NodeField timeseries_increment(const TimeSeriesSpec& tss, int step);

NodeField timeseries_eps(const TimeSeriesSpec& tss);

}  // namespace hlr::cases
