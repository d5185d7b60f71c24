#include "hlr/oracle.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace hlr::oracle {

namespace {

constexpr std::size_t kSizeGuard = 200000;
constexpr std::size_t kDenseLimit = 4096;  // below this: dense factorization

StaggeredField field_from_potential(const GridSpec& g, const NodeField& phi) {
  StaggeredField E(g);
  for (int a = 0; a < g.dim; ++a) {
    double ih = 1.0 / g.spacing(a);
    for (int k = 0; k < g.cells[2]; ++k)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
          int m[3] = {i, j, k};
          m[a] = g.wrap(a, m[a] + 1);
          E.comp[a][g.idx(i, j, k)] =
              (phi.at(i, j, k) - phi.at(m[0], m[1], m[2])) * ih;
        }
  }
  return E;
}

void subtract_mean(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  s /= static_cast<double>(v.size());
  for (double& x : v) x -= s;
}

}  // namespace

std::vector<double> apply_operator(const GridSpec& g, const EdgeCoeff& eps,
                                   const std::vector<double>& phi) {
  std::vector<double> out(phi.size(), 0.0);
  for (int k = 0; k < g.cells[2]; ++k)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int i = 0; i < g.cells[0]; ++i) {
        std::size_t p = g.idx(i, j, k);
        double acc = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          int up[3] = {i, j, k};
          up[a] = g.wrap(a, up[a] + 1);
          int dn[3] = {i, j, k};
          dn[a] = g.wrap(a, dn[a] - 1);
          std::size_t pu = g.idx(up[0], up[1], up[2]);
          std::size_t pd = g.idx(dn[0], dn[1], dn[2]);
          double ih2 = 1.0 / (g.spacing(a) * g.spacing(a));
          acc += ih2 * (eps.eps[a][p] * (phi[p] - phi[pu]) -
                        eps.eps[a][pd] * (phi[pd] - phi[p]));
        }
        out[p] = acc;
      }
  return out;
}

std::pair<NodeField, StaggeredField> direct_solve(const Problem& problem) {
  const GridSpec& g = problem.spec;
  const std::size_t n = g.num_nodes();
  if (n > kSizeGuard)
    throw std::invalid_argument("direct_solve: grid too large for the oracle (" +
                                std::to_string(n) + " nodes)");

  NodeField phi(g);
  const std::vector<double>& b = problem.rho.values;

  if (n < kDenseLimit) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    // assemble column-by-column from the operator action on unit vectors
    std::vector<double> e(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      e[c] = 1.0;
      std::vector<double> col = apply_operator(g, problem.eps, e);
      for (std::size_t r = 0; r < n; ++r) A(r, c) = col[r];
      e[c] = 0.0;
    }
    // pin the constant nullspace: rank-one mean term keeps mean-zero
    // solutions untouched for mean-zero right-hand sides
    double scale = A.diagonal().mean();
    A.array() += scale / static_cast<double>(n);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), n);
    Eigen::VectorXd x = A.ldlt().solve(rhs);
    for (std::size_t p = 0; p < n; ++p) phi.values[p] = x(p);
  } else {
    // mean-projected Jacobi-preconditioned CG
    std::vector<double> diag(n, 0.0);
    {
      std::vector<double> e(n, 0.0);
      for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
          for (int i = 0; i < g.cells[0]; ++i) {
            std::size_t p = g.idx(i, j, k);
            double d = 0.0;
            for (int a = 0; a < g.dim; ++a) {
              int dn[3] = {i, j, k};
              dn[a] = g.wrap(a, dn[a] - 1);
              double ih2 = 1.0 / (g.spacing(a) * g.spacing(a));
              d += ih2 * (problem.eps.eps[a][p] +
                          problem.eps.eps[a][g.idx(dn[0], dn[1], dn[2])]);
            }
            diag[p] = d;
          }
    }
    std::vector<double> x(n, 0.0), r = b, z(n), p(n), ap(n);
    subtract_mean(r);
    double bmax = max_abs(r);
    if (bmax == 0.0) bmax = 1.0;
    double rz = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      z[q] = r[q] / diag[q];
    }
    subtract_mean(z);
    p = z;
    for (std::size_t q = 0; q < n; ++q) rz += r[q] * z[q];
    const int max_iter = 200000;
    for (int it = 0; it < max_iter; ++it) {
      if (max_abs(r) <= 1e-13 * bmax) break;
      ap = apply_operator(g, problem.eps, p);
      double pap = 0.0;
      for (std::size_t q = 0; q < n; ++q) pap += p[q] * ap[q];
      double alpha = rz / pap;
      for (std::size_t q = 0; q < n; ++q) {
        x[q] += alpha * p[q];
        r[q] -= alpha * ap[q];
      }
      subtract_mean(r);
      double rz_new = 0.0;
      for (std::size_t q = 0; q < n; ++q) z[q] = r[q] / diag[q];
      subtract_mean(z);
      for (std::size_t q = 0; q < n; ++q) rz_new += r[q] * z[q];
      double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t q = 0; q < n; ++q) p[q] = z[q] + beta * p[q];
    }
    phi.values = std::move(x);
  }

  subtract_mean(phi.values);
  return {phi, field_from_potential(g, phi)};
}

std::pair<NodeField, StaggeredField> spectral_solve(const NodeField& rho,
                                                    double eps_const) {
  if (!(eps_const > 0.0))
    throw std::invalid_argument("spectral_solve: eps must be positive");
  const GridSpec& g = rho.spec;
  const int nx = g.cells[0], ny = g.cells[1], nz = g.cells[2];
  const std::size_t n = g.num_nodes();
  const int nxc = nx / 2 + 1;

  std::vector<double> in = rho.values;
  std::vector<std::complex<double>> freq(static_cast<std::size_t>(nxc) * ny *
                                         nz);
  // FFTW is row-major with the first dimension slowest; our x index is
  // fastest, so dims run (z, y, x).
  int dims[3];
  int rank = g.dim;
  if (g.dim == 2) {
    dims[0] = ny;
    dims[1] = nx;
  } else {
    dims[0] = nz;
    dims[1] = ny;
    dims[2] = nx;
  }
  fftw_plan fwd = fftw_plan_dft_r2c(
      rank, dims, in.data(), reinterpret_cast<fftw_complex*>(freq.data()),
      FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  // divide by eps * (discrete 5/7-point stencil symbol)
  auto symbol1d = [&](int kk, int axis) {
    double h = g.spacing(axis);
    double s = std::sin(std::numbers::pi * kk / g.cells[axis]);
    return 4.0 * s * s / (h * h);
  };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nxc; ++i) {
        std::size_t p = static_cast<std::size_t>(i) +
                        static_cast<std::size_t>(nxc) * (j + static_cast<std::size_t>(ny) * k);
        double lam = symbol1d(i, 0) + symbol1d(j, 1);
        if (g.dim == 3) lam += symbol1d(k, 2);
        if (lam == 0.0)
          freq[p] = 0.0;  // zero mode pinned
        else
          freq[p] /= eps_const * lam;
      }

  NodeField phi(g);
  fftw_plan bwd = fftw_plan_dft_c2r(
      rank, dims, reinterpret_cast<fftw_complex*>(freq.data()),
      phi.values.data(), FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  for (double& v : phi.values) v /= static_cast<double>(n);

  return {phi, field_from_potential(g, phi)};
}

}  // namespace hlr::oracle
