#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlr {

/// Uniform periodic structured grid, 2D or 3D. Axis 0 is x, 1 is y, 2 is z.
/// Unused axes of a 2D grid carry cells=1, extent=1 so index math is uniform.
struct GridSpec {
  int dim = 2;
  std::array<int, 3> cells{1, 1, 1};
  std::array<double, 3> extent{1.0, 1.0, 1.0};

  GridSpec() = default;
  GridSpec(int dim_, std::array<int, 3> cells_, std::array<double, 3> extent_);

  double spacing(int axis) const { return extent[axis] / cells[axis]; }
  double cell_volume() const;
  std::size_t num_nodes() const {
    return static_cast<std::size_t>(cells[0]) * cells[1] * cells[2];
  }

  // Flat index, x fastest. Callers pass in-range indices; wrap() handles
  // periodic neighbors.
  std::size_t idx(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(cells[0]) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(cells[1]) * k);
  }
  int wrap(int axis, int i) const {
    int n = cells[axis];
    i %= n;
    return i < 0 ? i + n : i;
  }

  bool operator==(const GridSpec&) const = default;
};

/// Node-centered periodic scalar field (rho, eps samples, phi).
struct NodeField {
  GridSpec spec;
  std::vector<double> values;

  NodeField() = default;
  explicit NodeField(const GridSpec& s) : spec(s), values(s.num_nodes(), 0.0) {}

  double& at(int i, int j, int k = 0) { return values[spec.idx(i, j, k)]; }
  double at(int i, int j, int k = 0) const { return values[spec.idx(i, j, k)]; }
  // Periodic access for out-of-range indices.
  double wrapped(int i, int j, int k = 0) const {
    return values[spec.idx(spec.wrap(0, i), spec.wrap(1, j), spec.wrap(2, k))];
  }
};

/// Edge-midpoint staggered vector field: comp[a] lives at points displaced
/// +1/2 along axis a, keyed by the lower node index.
struct StaggeredField {
  GridSpec spec;
  std::array<std::vector<double>, 3> comp;

  StaggeredField() = default;
  explicit StaggeredField(const GridSpec& s) : spec(s) {
    for (int a = 0; a < s.dim; ++a) comp[a].assign(s.num_nodes(), 0.0);
  }
};

/// Permittivity averaged to the staggered locations, same layout as
/// StaggeredField so E and eps pair positionally.
struct EdgeCoeff {
  GridSpec spec;
  std::array<std::vector<double>, 3> eps;
  double eps_min = 0.0;
  double eps_max = 0.0;
};

/// Plaquette-centered discrete curl. 2D has one orientation (xy); 3D has
/// three, stored in the fixed order xy, yz, xz.
struct CurlField {
  GridSpec spec;
  std::array<std::vector<double>, 3> comp;
  int orientations = 0;
};

// Orientation table shared by curl and the 3D relaxation kernels.
// plane_axes[o] = {a, b}: the in-plane axes of orientation o.
inline constexpr std::array<std::array<int, 2>, 3> kPlaneAxes{
    {{0, 1}, {1, 2}, {0, 2}}};

/// Arithmetic mean of the two adjacent node samples along each axis
/// (periodic wrap). Rejects nonpositive node values.
EdgeCoeff edge_coeff(const NodeField& eps_nodes);

/// Divergence of eps*E at nodes: sum_a (D_a|_{+1/2} - D_a|_{-1/2}) / h_a.
NodeField discrete_div(const StaggeredField& E, const EdgeCoeff& eps);

/// Plaquette circulation per cell (2D) or per face orientation (3D).
CurlField discrete_curl(const StaggeredField& E);

/// Discrete energy: (cell volume / 2) * sum over staggered points of
/// eps * E^2, compensated summation.
double energy(const StaggeredField& E, const EdgeCoeff& eps);

double average_node(const NodeField& f);
std::array<double, 3> average_staggered(const StaggeredField& E);
double norm_h(const StaggeredField& E);

double max_abs(const std::vector<double>& v);
double max_abs(const StaggeredField& E);
double max_abs(const CurlField& c);

}  // namespace hlr
