#include <cmath>
#include <random>

#include "doctest.h"
#include "hlr/grid.hpp"

using namespace hlr;

namespace {

GridSpec grid2d(int n, double L = 1.0) {
  return GridSpec(2, {n, n, 1}, {L, L, 1.0});
}

StaggeredField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StaggeredField E(g);
  for (int a = 0; a < g.dim; ++a)
    for (double& v : E.comp[a]) v = u(rng);
  return E;
}

}  // namespace

TEST_CASE("flat index is x-fastest and wrap is modular") {
  GridSpec g(3, {4, 3, 2}, {1.0, 1.0, 1.0});
  CHECK(g.idx(1, 0, 0) == 1);
  CHECK(g.idx(0, 1, 0) == 4);
  CHECK(g.idx(0, 0, 1) == 12);
  CHECK(g.wrap(0, 4) == 0);
  CHECK(g.wrap(0, -1) == 3);
  CHECK(g.wrap(1, 7) == 1);

  NodeField f(g);
  f.at(2, 1, 1) = 5.0;
  CHECK(f.wrapped(2 + 4, 1 - 3, 1 + 2) == 5.0);
}

TEST_CASE("edge coefficient of a constant field is the constant") {
  GridSpec g = grid2d(8);
  NodeField eps(g);
  for (double& v : eps.values) v = 2.0;
  EdgeCoeff e = edge_coeff(eps);
  for (int a = 0; a < 2; ++a)
    for (double v : e.eps[a]) CHECK(v == 2.0);
  CHECK(e.eps_min == 2.0);
  CHECK(e.eps_max == 2.0);
}

TEST_CASE("edge coefficient averages adjacent nodes with periodic wrap") {
  GridSpec g = grid2d(4);
  NodeField eps(g);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) eps.at(i, j) = i + 1.0;  // 1D-in-x pattern
  EdgeCoeff e = edge_coeff(eps);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 3; ++i)
      CHECK(e.eps[0][g.idx(i, j)] == doctest::Approx(i + 1.5));
    // wrap edge between i=3 (value 4) and i=0 (value 1)
    CHECK(e.eps[0][g.idx(3, j)] == doctest::Approx(2.5));
    // y-edges join equal values
    for (int i = 0; i < 4; ++i)
      CHECK(e.eps[1][g.idx(i, j)] == doctest::Approx(i + 1.0));
  }
}

TEST_CASE("edge coefficient rejects nonpositive permittivity by index") {
  GridSpec g = grid2d(4);
  NodeField eps(g);
  for (double& v : eps.values) v = 1.0;
  eps.at(2, 3) = 0.0;  // flat index 2 + 3*4 = 14
  CHECK_THROWS_WITH_AS(edge_coeff(eps), doctest::Contains("index 14"),
                       std::invalid_argument);
}

TEST_CASE("divergence is linear in the field") {
  GridSpec g = grid2d(8);
  NodeField eps(g);
  for (std::size_t q = 0; q < eps.values.size(); ++q)
    eps.values[q] = 1.5 + 0.3 * std::sin(0.7 * q);
  EdgeCoeff e = edge_coeff(eps);
  StaggeredField A = random_field(g, 1), B = random_field(g, 2);
  StaggeredField C(g);
  for (int a = 0; a < 2; ++a)
    for (std::size_t q = 0; q < C.comp[a].size(); ++q)
      C.comp[a][q] = 2.0 * A.comp[a][q] - 3.0 * B.comp[a][q];
  NodeField dA = discrete_div(A, e), dB = discrete_div(B, e),
            dC = discrete_div(C, e);
  for (std::size_t q = 0; q < dC.values.size(); ++q)
    CHECK(dC.values[q] ==
          doctest::Approx(2.0 * dA.values[q] - 3.0 * dB.values[q])
              .epsilon(1e-12));
}

TEST_CASE("curl of a discrete gradient vanishes to round-off") {
  for (int dim : {2, 3}) {
    GridSpec g = dim == 2 ? grid2d(16) : GridSpec(3, {8, 8, 8}, {1, 1, 1});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NodeField phi(g);
    for (double& v : phi.values) v = u(rng);
    StaggeredField E(g);
    for (int a = 0; a < dim; ++a) {
      double h = g.spacing(a);
      for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
          for (int i = 0; i < g.cells[0]; ++i) {
            int p[3] = {i, j, k};
            int q[3] = {i, j, k};
            q[a] = g.wrap(a, q[a] + 1);
            E.comp[a][g.idx(i, j, k)] =
                (phi.at(p[0], p[1], p[2]) - phi.at(q[0], q[1], q[2])) / h;
          }
    }
    CurlField c = discrete_curl(E);
    double phimax = max_abs(phi.values);
    CHECK(max_abs(c) <= 1e-13 * phimax / g.spacing(0));
  }
}

TEST_CASE("energy of the zero field is zero and energy is convex") {
  GridSpec g = grid2d(12);
  NodeField eps(g);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ue(0.5, 3.0), ut(0.0, 1.0);
  for (double& v : eps.values) v = ue(rng);
  EdgeCoeff e = edge_coeff(eps);

  CHECK(energy(StaggeredField(g), e) == 0.0);

  for (int trial = 0; trial < 100; ++trial) {
    StaggeredField A = random_field(g, 100 + trial),
                   B = random_field(g, 200 + trial);
    double th = ut(rng);
    StaggeredField M(g);
    for (int a = 0; a < 2; ++a)
      for (std::size_t q = 0; q < M.comp[a].size(); ++q)
        M.comp[a][q] = th * A.comp[a][q] + (1.0 - th) * B.comp[a][q];
    double fa = energy(A, e), fb = energy(B, e), fm = energy(M, e);
    double scale = std::max({fa, fb, 1.0});
    CHECK(fm <= th * fa + (1.0 - th) * fb + 1e-12 * scale);
  }
}

TEST_CASE("uniform field energy matches the closed form") {
  GridSpec g = grid2d(8, 2.0);
  NodeField eps(g);
  for (double& v : eps.values) v = 3.0;
  EdgeCoeff e = edge_coeff(eps);
  StaggeredField E(g);
  for (double& v : E.comp[0]) v = 0.5;
  // (dV/2) * sum eps E^2 = (0.0625/2) * 64 * 3 * 0.25
  CHECK(energy(E, e) == doctest::Approx(1.5));
}

TEST_CASE("averages and norms") {
  GridSpec g = grid2d(6);
  StaggeredField E(g);
  for (double& v : E.comp[0]) v = 2.0;
  auto avg = average_staggered(E);
  CHECK(avg[0] == doctest::Approx(2.0));
  CHECK(avg[1] == doctest::Approx(0.0));
  // ||E||_h = sqrt(dV * sum E^2) = sqrt((1/36) * 36 * 4)
  CHECK(norm_h(E) == doctest::Approx(2.0));

  NodeField f(g);
  f.at(0, 0) = 36.0;
  CHECK(average_node(f) == doctest::Approx(1.0));
}
