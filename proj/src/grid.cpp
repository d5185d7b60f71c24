#include "hlr/grid.hpp"

#include <cmath>

namespace hlr {

GridSpec::GridSpec(int dim_, std::array<int, 3> cells_,
                   std::array<double, 3> extent_)
    : dim(dim_), cells(cells_), extent(extent_) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("GridSpec: dim must be 2 or 3");
  if (dim == 2) {
    cells[2] = 1;
    extent[2] = 1.0;
  }
  for (int a = 0; a < dim; ++a) {
    if (cells[a] < 2)
      throw std::invalid_argument("GridSpec: cells[" + std::to_string(a) +
                                  "] must be >= 2");
    if (!(extent[a] > 0.0))
      throw std::invalid_argument("GridSpec: extent[" + std::to_string(a) +
                                  "] must be positive");
  }
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing(a);
  return v;
}

namespace {

// Kahan-compensated accumulator for the reductions.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

void require_same_spec(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw std::invalid_argument("grid spec mismatch");
}

}  // namespace

EdgeCoeff edge_coeff(const NodeField& eps_nodes) {
  const GridSpec& g = eps_nodes.spec;
  for (std::size_t p = 0; p < eps_nodes.values.size(); ++p) {
    if (!(eps_nodes.values[p] > 0.0))
      throw std::invalid_argument(
          "edge_coeff: nonpositive permittivity at flat node index " +
          std::to_string(p));
  }
  EdgeCoeff out;
  out.spec = g;
  out.eps_min = eps_nodes.values[0];
  out.eps_max = eps_nodes.values[0];
  for (int a = 0; a < g.dim; ++a) {
    out.eps[a].assign(g.num_nodes(), 0.0);
    for (int k = 0; k < g.cells[2]; ++k)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
          int n[3] = {i, j, k};
          int m[3] = {i, j, k};
          m[a] = g.wrap(a, m[a] + 1);
          double v = 0.5 * (eps_nodes.at(n[0], n[1], n[2]) +
                            eps_nodes.at(m[0], m[1], m[2]));
          out.eps[a][g.idx(i, j, k)] = v;
          out.eps_min = std::min(out.eps_min, v);
          out.eps_max = std::max(out.eps_max, v);
        }
  }
  return out;
}

NodeField discrete_div(const StaggeredField& E, const EdgeCoeff& eps) {
  require_same_spec(E.spec, eps.spec);
  const GridSpec& g = E.spec;
  NodeField out(g);
  for (int k = 0; k < g.cells[2]; ++k)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int i = 0; i < g.cells[0]; ++i) {
        double d = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          int m[3] = {i, j, k};
          m[a] = g.wrap(a, m[a] - 1);
          std::size_t hi = g.idx(i, j, k);
          std::size_t lo = g.idx(m[0], m[1], m[2]);
          d += (eps.eps[a][hi] * E.comp[a][hi] -
                eps.eps[a][lo] * E.comp[a][lo]) /
               g.spacing(a);
        }
        out.at(i, j, k) = d;
      }
  return out;
}

CurlField discrete_curl(const StaggeredField& E) {
  const GridSpec& g = E.spec;
  CurlField out;
  out.spec = g;
  out.orientations = (g.dim == 2) ? 1 : 3;
  for (int o = 0; o < out.orientations; ++o) {
    int a = kPlaneAxes[o][0], b = kPlaneAxes[o][1];
    out.comp[o].assign(g.num_nodes(), 0.0);
    double ha = g.spacing(a), hb = g.spacing(b);
    for (int k = 0; k < g.cells[2]; ++k)
      for (int j = 0; j < g.cells[1]; ++j)
        for (int i = 0; i < g.cells[0]; ++i) {
          int n[3] = {i, j, k};
          int na[3] = {i, j, k};
          na[a] = g.wrap(a, na[a] + 1);
          int nb[3] = {i, j, k};
          nb[b] = g.wrap(b, nb[b] + 1);
          std::size_t p = g.idx(n[0], n[1], n[2]);
          std::size_t pa = g.idx(na[0], na[1], na[2]);
          std::size_t pb = g.idx(nb[0], nb[1], nb[2]);
          // circulation: d(E_b)/da - d(E_a)/db
          out.comp[o][p] = (E.comp[b][pa] - E.comp[b][p]) / ha -
                           (E.comp[a][pb] - E.comp[a][p]) / hb;
        }
  }
  return out;
}

double energy(const StaggeredField& E, const EdgeCoeff& eps) {
  require_same_spec(E.spec, eps.spec);
  const GridSpec& g = E.spec;
  Kahan acc;
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t p = 0; p < E.comp[a].size(); ++p)
      acc.add(eps.eps[a][p] * E.comp[a][p] * E.comp[a][p]);
  return 0.5 * g.cell_volume() * acc.sum;
}

double average_node(const NodeField& f) {
  Kahan acc;
  for (double v : f.values) acc.add(v);
  return acc.sum / static_cast<double>(f.values.size());
}

std::array<double, 3> average_staggered(const StaggeredField& E) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int a = 0; a < E.spec.dim; ++a) {
    Kahan acc;
    for (double v : E.comp[a]) acc.add(v);
    out[a] = acc.sum / static_cast<double>(E.comp[a].size());
  }
  return out;
}

double norm_h(const StaggeredField& E) {
  Kahan acc;
  for (int a = 0; a < E.spec.dim; ++a)
    for (double v : E.comp[a]) acc.add(v * v);
  return std::sqrt(E.spec.cell_volume() * acc.sum);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double max_abs(const StaggeredField& E) {
  double m = 0.0;
  for (int a = 0; a < E.spec.dim; ++a) m = std::max(m, max_abs(E.comp[a]));
  return m;
}

double max_abs(const CurlField& c) {
  double m = 0.0;
  for (int o = 0; o < c.orientations; ++o) m = std::max(m, max_abs(c.comp[o]));
  return m;
}

}  // namespace hlr
