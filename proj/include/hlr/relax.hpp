#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hlr/grid.hpp"

namespace hlr {

enum class RelaxMethod { SingleMesh, ForwardHLR, ZigzagHLR };

const char* method_name(RelaxMethod m);
RelaxMethod parse_method(const std::string& name);

/// Hierarchical block at refinement level `level`: an axis-aligned box of
/// `side = N >> level` finest cells, lower corner `lo` in node indices.
struct Block {
  int level = 1;
  std::array<int, 3> lo{0, 0, 0};
  int side = 1;
};

/// Per-pass instrumentation. energy_drop is the accumulated -dF of all
/// updates applied in the pass; edge_touches counts staggered entries
/// incremented in the cell/block stage (line shifts excluded).
struct SweepTrace {
  std::int64_t updates_applied = 0;
  double flux_max = 0.0;
  double energy_drop = 0.0;
  std::int64_t edge_touches = 0;
};

// ---- elementary circulation updates ----
//
// The rectangle primitive underlies every cell/block update: a uniform
// rotational flux eta around the boundary of an sa-by-sb rectangle of finest
// cells in the (a,b) coordinate plane anchored at node `base` (periodic
// wrap). sa = sb = 1 is the plaquette; 2D blocks use the full square; 3D
// blocks apply it layer by layer per orientation.

/// Optimal flux for the rectangle loop (zero when the enclosed circulation
/// vanishes). Denominator is strictly positive for positive eps.
double rect_flux(const StaggeredField& E, const EdgeCoeff& eps, int a, int b,
                 std::array<int, 3> base, int sa, int sb);

/// Apply flux eta around the rectangle boundary: the four signed increments
/// scaled by 1/(eps*h). Leaves discrete_div(eps*E) unchanged at every node.
void apply_rect(StaggeredField& E, const EdgeCoeff& eps, int a, int b,
                std::array<int, 3> base, int sa, int sb, double eta);

double plaquette_flux(const StaggeredField& E, const EdgeCoeff& eps, int i,
                      int j, int k = 0, int orientation = 0);
void apply_plaquette(StaggeredField& E, const EdgeCoeff& eps, int i, int j,
                     int k, int orientation, double eta);

// 2D block updates (delegate to the rectangle primitive, so a side-1 block
// is bit-identical to the plaquette update).
double block_flux(const StaggeredField& E, const EdgeCoeff& eps,
                  const Block& blk);
void apply_block(StaggeredField& E, const EdgeCoeff& eps, const Block& blk,
                 double eta);

/// Shift the full periodic line of component `axis` through node
/// `line_origin` by eta/eps, with the energy-optimal eta. Returns eta;
/// afterwards the line sum of E_axis is zero to round-off.
double line_shift(StaggeredField& E, const EdgeCoeff& eps, int axis,
                  std::array<int, 3> line_origin);

// ---- sweep schedules ----

/// forward(M) = [1, 2, ..., M].
std::vector<int> forward_schedule(int depth);
/// zigzag(M) = concat over l = 1..M-2 of [l, l+1, l+2]; requires M >= 3.
std::vector<int> zigzag_schedule(int depth);

/// Precomputed sweep state for one (eps, method) pair: cached inverse
/// coefficients, per-cell and per-block curvature factors, and the level
/// schedule. Reused across passes of a solve.
class Sweeper {
 public:
  Sweeper(const EdgeCoeff& eps, RelaxMethod method);

  /// One full pass: all cells (single mesh) or all blocks of every level in
  /// the schedule (hierarchical), lexicographic x-fastest, each with its
  /// exact optimal flux; then line shifts along every line of every axis.
  SweepTrace pass(StaggeredField& E);

  RelaxMethod method() const { return method_; }
  int depth() const { return depth_; }
  const std::vector<int>& schedule() const { return schedule_; }

 private:
  void pass_cells_2d(StaggeredField& E, SweepTrace& t);
  void pass_cells_3d(StaggeredField& E, SweepTrace& t);
  void pass_blocks(StaggeredField& E, SweepTrace& t);
  void pass_lines(StaggeredField& E, SweepTrace& t);

  const EdgeCoeff& eps_;
  GridSpec grid_;
  RelaxMethod method_;
  int depth_ = 0;  // log2(N) for hierarchical methods
  std::vector<int> schedule_;
  // 1/(eps_a * h_other) per staggered entry, per orientation role.
  std::array<std::vector<double>, 3> inv_eps_;
  // single-mesh: 1/q per cell per orientation
  std::array<std::vector<double>, 3> invq_cell_;
  // hierarchical 2D: 1/q per block, indexed [level][block]
  std::vector<std::vector<double>> invq_block_;
  // line shifts: 1/sum(1/eps) and sum(1/eps) per line, per axis
  std::array<std::vector<double>, 3> line_inv_sum_;
};

/// Convenience wrapper building a throwaway Sweeper.
SweepTrace relax_pass(StaggeredField& E, const EdgeCoeff& eps,
                      RelaxMethod method);

}  // namespace hlr
