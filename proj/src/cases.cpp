#include "hlr/cases.hpp"

#include <cmath>
#include <numbers>

namespace hlr::cases {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

NodeField ManufacturedCase::sample_rho() const {
  NodeField rho(spec);
  for (int k = 0; k < spec.cells[2]; ++k)
    for (int j = 0; j < spec.cells[1]; ++j)
      for (int i = 0; i < spec.cells[0]; ++i)
        rho.at(i, j, k) = rho_exact(i * spec.spacing(0), j * spec.spacing(1),
                                    k * spec.spacing(2));
  // analytic mean is zero; remove the round-off drift of the samples
  double mean = average_node(rho);
  for (double& v : rho.values) v -= mean;
  return rho;
}

NodeField ManufacturedCase::sample_eps() const {
  NodeField eps(spec);
  for (int k = 0; k < spec.cells[2]; ++k)
    for (int j = 0; j < spec.cells[1]; ++j)
      for (int i = 0; i < spec.cells[0]; ++i)
        eps.at(i, j, k) = eps_exact(i * spec.spacing(0), j * spec.spacing(1),
                                    k * spec.spacing(2));
  return eps;
}

StaggeredField ManufacturedCase::sample_e_exact() const {
  StaggeredField E(spec);
  for (int a = 0; a < spec.dim; ++a)
    for (int k = 0; k < spec.cells[2]; ++k)
      for (int j = 0; j < spec.cells[1]; ++j)
        for (int i = 0; i < spec.cells[0]; ++i) {
          double x = i * spec.spacing(0), y = j * spec.spacing(1),
                 z = k * spec.spacing(2);
          if (a == 0) x += 0.5 * spec.spacing(0);
          if (a == 1) y += 0.5 * spec.spacing(1);
          if (a == 2) z += 0.5 * spec.spacing(2);
          E.comp[a][spec.idx(i, j, k)] = e_exact(a, x, y, z);
        }
  return E;
}

double ManufacturedCase::error_inf(const StaggeredField& E) const {
  StaggeredField exact = sample_e_exact();
  double m = 0.0;
  for (int a = 0; a < spec.dim; ++a)
    for (std::size_t p = 0; p < E.comp[a].size(); ++p)
      m = std::max(m, std::fabs(E.comp[a][p] - exact.comp[a][p]));
  return m;
}

ManufacturedCase varcoef(int n) {
  ManufacturedCase c;
  c.spec = GridSpec(2, {n, n, 1}, {4.0, 4.0, 1.0});
  const double w = kHalfPi;
  c.phi_exact = [w](double x, double y, double) {
    return std::cos(w * x) * std::sin(w * y);
  };
  c.eps_exact = [w](double x, double y, double) {
    return 2.0 + std::cos(w * x) * std::cos(w * y);
  };
  // rho = -div(eps grad phi) = 2 w^2 eps phi + w^2 sin(wy) cos(wy) cos(2wx)
  c.rho_exact = [w](double x, double y, double) {
    double eps = 2.0 + std::cos(w * x) * std::cos(w * y);
    double phi = std::cos(w * x) * std::sin(w * y);
    return 2.0 * w * w * eps * phi +
           w * w * std::sin(w * y) * std::cos(w * y) * std::cos(2.0 * w * x);
  };
  c.e_exact = [w](int a, double x, double y, double) {
    if (a == 0) return w * std::sin(w * x) * std::sin(w * y);
    return -w * std::cos(w * x) * std::cos(w * y);
  };
  return c;
}

ManufacturedCase varcoef_3d(int n) {
  ManufacturedCase c;
  c.spec = GridSpec(3, {n, n, n}, {4.0, 4.0, 4.0});
  const double w = kHalfPi;
  c.phi_exact = [w](double x, double y, double z) {
    return std::cos(w * x) * std::sin(w * y) * std::cos(w * z);
  };
  c.eps_exact = [w](double x, double y, double z) {
    return 2.0 + std::cos(w * x) * std::cos(w * y) * std::cos(w * z);
  };
  // rho = 3 w^2 eps phi
  //       - w^2 sin(wy) cos(wy) (sin^2(wx) cos^2(wz) - cos^2(wx) cos(2wz))
  c.rho_exact = [w](double x, double y, double z) {
    double cx = std::cos(w * x), sx = std::sin(w * x);
    double cy = std::cos(w * y), sy = std::sin(w * y);
    double cz = std::cos(w * z);
    double eps = 2.0 + cx * cy * cz;
    double phi = cx * sy * cz;
    return 3.0 * w * w * eps * phi -
           w * w * sy * cy *
               (sx * sx * cz * cz - cx * cx * std::cos(2.0 * w * z));
  };
  c.e_exact = [w](int a, double x, double y, double z) {
    double cx = std::cos(w * x), sx = std::sin(w * x);
    double cy = std::cos(w * y), sy = std::sin(w * y);
    double cz = std::cos(w * z), sz = std::sin(w * z);
    if (a == 0) return w * sx * sy * cz;
    if (a == 1) return -w * cx * cy * cz;
    return w * cx * sy * sz;
  };
  return c;
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::next_uniform() {
  // 53-bit mantissa, shifted into the open interval (0,1)
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

NodeField timeseries_increment(const TimeSeriesSpec& tss, int step) {
  const GridSpec& g = tss.spec;
  NodeField inc(g);

  double a[16], b[16];
  if (tss.zero_coefficients) {
    for (int k = 0; k < 16; ++k) a[k] = b[k] = 0.0;
    return inc;
  }
  // per-step stream: the step index is folded into the seed, then
  // a_1..a_16, b_1..b_16 are drawn in fixed order
  SplitMix64 rng(tss.seed ^
                 (0xD1B54A32D192ED03ull * (static_cast<std::uint64_t>(step) + 1)));
  double coeff_sum = 0.0;
  for (int k = 0; k < 16; ++k) {
    a[k] = rng.next_uniform();
    coeff_sum += a[k];
  }
  for (int k = 0; k < 16; ++k) {
    b[k] = rng.next_uniform();
    coeff_sum += b[k];
  }
  const double norm = 1.0 / (64.0 * coeff_sum);

  const double w = kHalfPi;
  for (int j = 0; j < g.cells[1]; ++j)
    for (int i = 0; i < g.cells[0]; ++i) {
      double x = i * g.spacing(0), y = j * g.spacing(1);
      double v = 0.0;
      for (int k = 1; k <= 16; ++k) {
        v += a[k - 1] * std::cos(k * w * x) * std::sin(k * w * y) +
             b[k - 1] * std::sin(k * w * x) * std::cos(k * w * y);
      }
      inc.at(i, j) = norm * v;
    }
  double mean = average_node(inc);
  for (double& v : inc.values) v -= mean;
  return inc;
}

NodeField timeseries_eps(const TimeSeriesSpec& tss) {
  NodeField eps(tss.spec);
  const double w = kHalfPi;
  for (int j = 0; j < tss.spec.cells[1]; ++j)
    for (int i = 0; i < tss.spec.cells[0]; ++i) {
      double x = i * tss.spec.spacing(0), y = j * tss.spec.spacing(1);
      eps.at(i, j) =
          tss.homogeneous ? 1.0 : 2.0 + std::cos(w * x) * std::cos(w * y);
    }
  return eps;
}

}  // namespace hlr::cases
