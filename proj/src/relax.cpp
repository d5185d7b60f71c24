#include "hlr/relax.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hlr {

const char* method_name(RelaxMethod m) {
  switch (m) {
    case RelaxMethod::SingleMesh: return "single";
    case RelaxMethod::ForwardHLR: return "forward";
    case RelaxMethod::ZigzagHLR: return "zigzag";
  }
  return "?";
}

RelaxMethod parse_method(const std::string& name) {
  if (name == "single") return RelaxMethod::SingleMesh;
  if (name == "forward") return RelaxMethod::ForwardHLR;
  if (name == "zigzag") return RelaxMethod::ZigzagHLR;
  throw std::invalid_argument("unknown relaxation method '" + name +
                              "' (expected single|forward|zigzag)");
}

double rect_flux(const StaggeredField& E, const EdgeCoeff& eps, int a, int b,
                 std::array<int, 3> base, int sa, int sb) {
  const GridSpec& g = E.spec;
  const double ha = g.spacing(a), hb = g.spacing(b);
  const int hiA = g.wrap(a, base[a] + sa);
  const int hiB = g.wrap(b, base[b] + sb);

  double sum_b = 0.0, q_b = 0.0;  // b-component edges at a = lo / hi
  for (int t = 0; t < sb; ++t) {
    std::array<int, 3> lo = base, hi = base;
    lo[b] = hi[b] = g.wrap(b, base[b] + t);
    hi[a] = hiA;
    std::size_t plo = g.idx(lo[0], lo[1], lo[2]);
    std::size_t phi = g.idx(hi[0], hi[1], hi[2]);
    sum_b += E.comp[b][phi] - E.comp[b][plo];
    q_b += 1.0 / eps.eps[b][plo] + 1.0 / eps.eps[b][phi];
  }
  double sum_a = 0.0, q_a = 0.0;  // a-component edges at b = lo / hi
  for (int t = 0; t < sa; ++t) {
    std::array<int, 3> lo = base, hi = base;
    lo[a] = hi[a] = g.wrap(a, base[a] + t);
    hi[b] = hiB;
    std::size_t plo = g.idx(lo[0], lo[1], lo[2]);
    std::size_t phi = g.idx(hi[0], hi[1], hi[2]);
    sum_a += E.comp[a][plo] - E.comp[a][phi];
    q_a += 1.0 / eps.eps[a][plo] + 1.0 / eps.eps[a][phi];
  }
  double lin = sum_b / ha + sum_a / hb;
  double quad = q_b / (ha * ha) + q_a / (hb * hb);
  return -lin / quad;
}

void apply_rect(StaggeredField& E, const EdgeCoeff& eps, int a, int b,
                std::array<int, 3> base, int sa, int sb, double eta) {
  const GridSpec& g = E.spec;
  const double ha = g.spacing(a), hb = g.spacing(b);
  const int hiA = g.wrap(a, base[a] + sa);
  const int hiB = g.wrap(b, base[b] + sb);
  for (int t = 0; t < sb; ++t) {
    std::array<int, 3> lo = base, hi = base;
    lo[b] = hi[b] = g.wrap(b, base[b] + t);
    hi[a] = hiA;
    std::size_t plo = g.idx(lo[0], lo[1], lo[2]);
    std::size_t phi = g.idx(hi[0], hi[1], hi[2]);
    E.comp[b][plo] -= eta / (eps.eps[b][plo] * ha);
    E.comp[b][phi] += eta / (eps.eps[b][phi] * ha);
  }
  for (int t = 0; t < sa; ++t) {
    std::array<int, 3> lo = base, hi = base;
    lo[a] = hi[a] = g.wrap(a, base[a] + t);
    hi[b] = hiB;
    std::size_t plo = g.idx(lo[0], lo[1], lo[2]);
    std::size_t phi = g.idx(hi[0], hi[1], hi[2]);
    E.comp[a][plo] += eta / (eps.eps[a][plo] * hb);
    E.comp[a][phi] -= eta / (eps.eps[a][phi] * hb);
  }
}

double plaquette_flux(const StaggeredField& E, const EdgeCoeff& eps, int i,
                      int j, int k, int orientation) {
  auto [a, b] = kPlaneAxes[orientation];
  return rect_flux(E, eps, a, b, {i, j, k}, 1, 1);
}

void apply_plaquette(StaggeredField& E, const EdgeCoeff& eps, int i, int j,
                     int k, int orientation, double eta) {
  auto [a, b] = kPlaneAxes[orientation];
  apply_rect(E, eps, a, b, {i, j, k}, 1, 1, eta);
}

double block_flux(const StaggeredField& E, const EdgeCoeff& eps,
                  const Block& blk) {
  if (E.spec.dim != 2)
    throw std::invalid_argument("block_flux: 2D only; 3D blocks are swept "
                                "per-layer via the rectangle primitive");
  return rect_flux(E, eps, 0, 1, blk.lo, blk.side, blk.side);
}

void apply_block(StaggeredField& E, const EdgeCoeff& eps, const Block& blk,
                 double eta) {
  if (E.spec.dim != 2)
    throw std::invalid_argument("apply_block: 2D only");
  apply_rect(E, eps, 0, 1, blk.lo, blk.side, blk.side, eta);
}

double line_shift(StaggeredField& E, const EdgeCoeff& eps, int axis,
                  std::array<int, 3> line_origin) {
  const GridSpec& g = E.spec;
  double sum_e = 0.0, sum_inv = 0.0;
  std::array<int, 3> p = line_origin;
  for (int t = 0; t < g.cells[axis]; ++t) {
    p[axis] = t;
    std::size_t q = g.idx(p[0], p[1], p[2]);
    sum_e += E.comp[axis][q];
    sum_inv += 1.0 / eps.eps[axis][q];
  }
  double eta = -sum_e / sum_inv;
  for (int t = 0; t < g.cells[axis]; ++t) {
    p[axis] = t;
    std::size_t q = g.idx(p[0], p[1], p[2]);
    E.comp[axis][q] += eta / eps.eps[axis][q];
  }
  return eta;
}

std::vector<int> forward_schedule(int depth) {
  if (depth < 1)
    throw std::invalid_argument("forward_schedule: depth must be >= 1");
  std::vector<int> s(depth);
  for (int k = 0; k < depth; ++k) s[k] = k + 1;
  return s;
}

std::vector<int> zigzag_schedule(int depth) {
  if (depth < 3)
    throw std::invalid_argument("zigzag_schedule: depth must be >= 3");
  std::vector<int> s;
  s.reserve(3 * (depth - 2));
  for (int l = 1; l <= depth - 2; ++l)
    for (int k = l; k <= l + 2; ++k) s.push_back(k);
  return s;
}

namespace {

int log2_exact(int n) {
  int m = 0;
  while ((1 << m) < n) ++m;
  return ((1 << m) == n) ? m : -1;
}

}  // namespace

Sweeper::Sweeper(const EdgeCoeff& eps, RelaxMethod method)
    : eps_(eps), grid_(eps.spec), method_(method) {
  const GridSpec& g = grid_;
  const bool hierarchical = method != RelaxMethod::SingleMesh;

  if (hierarchical) {
    int n0 = g.cells[0];
    for (int a = 0; a < g.dim; ++a) {
      if (g.cells[a] != n0)
        throw std::invalid_argument(
            "hierarchical methods require equal per-axis resolution");
      if (log2_exact(g.cells[a]) < 0)
        throw std::invalid_argument(
            "hierarchical methods require power-of-two resolution");
    }
    depth_ = log2_exact(n0);
    if (method == RelaxMethod::ZigzagHLR && depth_ < 3) {
      std::fprintf(stderr,
                   "hlr: zigzag needs depth M >= 3 (have M=%d); "
                   "falling back to the forward schedule\n",
                   depth_);
      schedule_ = forward_schedule(depth_);
    } else {
      schedule_ = (method == RelaxMethod::ForwardHLR)
                      ? forward_schedule(depth_)
                      : zigzag_schedule(depth_);
    }
  }

  for (int a = 0; a < g.dim; ++a) {
    inv_eps_[a].resize(g.num_nodes());
    for (std::size_t p = 0; p < inv_eps_[a].size(); ++p)
      inv_eps_[a][p] = 1.0 / eps.eps[a][p];
  }

  // Per-cell curvature factors for the single-mesh sweep.
  if (!hierarchical) {
    int norient = (g.dim == 2) ? 1 : 3;
    for (int o = 0; o < norient; ++o) {
      auto [a, b] = kPlaneAxes[o];
      double iha2 = 1.0 / (g.spacing(a) * g.spacing(a));
      double ihb2 = 1.0 / (g.spacing(b) * g.spacing(b));
      invq_cell_[o].resize(g.num_nodes());
      for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
          for (int i = 0; i < g.cells[0]; ++i) {
            int na[3] = {i, j, k};
            na[a] = g.wrap(a, na[a] + 1);
            int nb[3] = {i, j, k};
            nb[b] = g.wrap(b, nb[b] + 1);
            std::size_t p = g.idx(i, j, k);
            std::size_t pa = g.idx(na[0], na[1], na[2]);
            std::size_t pb = g.idx(nb[0], nb[1], nb[2]);
            double q = iha2 * (inv_eps_[b][p] + inv_eps_[b][pa]) +
                       ihb2 * (inv_eps_[a][p] + inv_eps_[a][pb]);
            invq_cell_[o][p] = 1.0 / q;
          }
    }
  }

  // Per-block curvature factors, 2D hierarchical only (3D computes them on
  // the fly; blocks there are swept layer by layer).
  if (hierarchical && g.dim == 2) {
    int N = g.cells[0];
    double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
    double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    invq_block_.resize(depth_ + 1);
    for (int lev = 1; lev <= depth_; ++lev) {
      int s = N >> lev;
      int nb = 1 << lev;
      invq_block_[lev].resize(static_cast<std::size_t>(nb) * nb);
      for (int n = 0; n < nb; ++n)
        for (int m = 0; m < nb; ++m) {
          int loX = m * s, loY = n * s;
          int hiX = g.wrap(0, loX + s), hiY = g.wrap(1, loY + s);
          double qy = 0.0, qx = 0.0;
          for (int j = loY; j < loY + s; ++j)
            qy += inv_eps_[1][g.idx(loX, j)] + inv_eps_[1][g.idx(hiX, j)];
          for (int i = loX; i < loX + s; ++i)
            qx += inv_eps_[0][g.idx(i, loY)] + inv_eps_[0][g.idx(i, hiY)];
          invq_block_[lev][m + static_cast<std::size_t>(nb) * n] =
              1.0 / (ihx2 * qy + ihy2 * qx);
        }
    }
  }

  // Line-shift denominators.
  for (int a = 0; a < g.dim; ++a) {
    int u = (a == 0) ? 1 : 0;          // first perpendicular axis
    int v = (a == 2) ? 1 : 2;          // second perpendicular axis
    std::size_t nlines =
        static_cast<std::size_t>(g.cells[u]) * g.cells[v];
    line_inv_sum_[a].resize(nlines);
    std::size_t line = 0;
    for (int cv = 0; cv < g.cells[v]; ++cv)
      for (int cu = 0; cu < g.cells[u]; ++cu, ++line) {
        std::array<int, 3> p{0, 0, 0};
        p[u] = cu;
        p[v] = cv;
        double s = 0.0;
        for (int t = 0; t < g.cells[a]; ++t) {
          p[a] = t;
          s += inv_eps_[a][g.idx(p[0], p[1], p[2])];
        }
        line_inv_sum_[a][line] = 1.0 / s;
      }
  }
}

void Sweeper::pass_cells_2d(StaggeredField& E, SweepTrace& t) {
  const GridSpec& g = grid_;
  const int nx = g.cells[0], ny = g.cells[1];
  const double ihx = 1.0 / g.spacing(0), ihy = 1.0 / g.spacing(1);
  const double dv = g.cell_volume();
  double* __restrict ex = E.comp[0].data();
  double* __restrict ey = E.comp[1].data();
  const double* __restrict iex = inv_eps_[0].data();
  const double* __restrict iey = inv_eps_[1].data();
  const double* __restrict ivq = invq_cell_[0].data();
  double drop = 0.0, fmax = t.flux_max;
  for (int j = 0; j < ny; ++j) {
    const std::size_t r = static_cast<std::size_t>(j) * nx;
    const std::size_t r1 = static_cast<std::size_t>(j + 1 == ny ? 0 : j + 1) * nx;
    for (int i = 0; i < nx; ++i) {
      const int i1 = (i + 1 == nx) ? 0 : i + 1;
      const double lin = (ey[r + i1] - ey[r + i]) * ihx +
                         (ex[r + i] - ex[r1 + i]) * ihy;
      const double eta = -lin * ivq[r + i];
      drop += lin * lin * ivq[r + i];
      const double af = std::fabs(eta);
      if (af > fmax) fmax = af;
      ey[r + i] -= eta * iey[r + i] * ihx;
      ey[r + i1] += eta * iey[r + i1] * ihx;
      ex[r + i] += eta * iex[r + i] * ihy;
      ex[r1 + i] -= eta * iex[r1 + i] * ihy;
    }
  }
  t.energy_drop += 0.5 * dv * drop;
  t.flux_max = fmax;
  t.updates_applied += static_cast<std::int64_t>(nx) * ny;
  t.edge_touches += static_cast<std::int64_t>(nx) * ny * 4;
}

void Sweeper::pass_cells_3d(StaggeredField& E, SweepTrace& t) {
  const GridSpec& g = grid_;
  const double dv = g.cell_volume();
  double drop = 0.0, fmax = t.flux_max;
  for (int k = 0; k < g.cells[2]; ++k)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int i = 0; i < g.cells[0]; ++i)
        for (int o = 0; o < 3; ++o) {
          auto [a, b] = kPlaneAxes[o];
          const double iha = 1.0 / g.spacing(a), ihb = 1.0 / g.spacing(b);
          int na[3] = {i, j, k};
          na[a] = g.wrap(a, na[a] + 1);
          int nb[3] = {i, j, k};
          nb[b] = g.wrap(b, nb[b] + 1);
          const std::size_t p = g.idx(i, j, k);
          const std::size_t pa = g.idx(na[0], na[1], na[2]);
          const std::size_t pb = g.idx(nb[0], nb[1], nb[2]);
          const double lin = (E.comp[b][pa] - E.comp[b][p]) * iha +
                             (E.comp[a][p] - E.comp[a][pb]) * ihb;
          const double eta = -lin * invq_cell_[o][p];
          drop += lin * lin * invq_cell_[o][p];
          const double af = std::fabs(eta);
          if (af > fmax) fmax = af;
          E.comp[b][p] -= eta * inv_eps_[b][p] * iha;
          E.comp[b][pa] += eta * inv_eps_[b][pa] * iha;
          E.comp[a][p] += eta * inv_eps_[a][p] * ihb;
          E.comp[a][pb] -= eta * inv_eps_[a][pb] * ihb;
          ++t.updates_applied;
          t.edge_touches += 4;
        }
  t.energy_drop += 0.5 * dv * drop;
  t.flux_max = fmax;
}

void Sweeper::pass_blocks(StaggeredField& E, SweepTrace& t) {
  const GridSpec& g = grid_;
  const int N = g.cells[0];
  const double dv = g.cell_volume();

  if (g.dim == 2) {
    const double ihx = 1.0 / g.spacing(0), ihy = 1.0 / g.spacing(1);
    double* __restrict ex = E.comp[0].data();
    double* __restrict ey = E.comp[1].data();
    const double* __restrict iex = inv_eps_[0].data();
    const double* __restrict iey = inv_eps_[1].data();
    double drop = 0.0, fmax = t.flux_max;
    for (int lev : schedule_) {
      const int s = N >> lev;
      const int nb = 1 << lev;
      const double* ivq = invq_block_[lev].data();
      for (int n = 0; n < nb; ++n)
        for (int m = 0; m < nb; ++m) {
          const int loX = m * s, loY = n * s;
          const int hiX = (loX + s == N) ? 0 : loX + s;
          const int hiY = (loY + s == N) ? 0 : loY + s;
          double sy = 0.0, sx = 0.0;
          for (int j = loY; j < loY + s; ++j) {
            const std::size_t r = static_cast<std::size_t>(j) * N;
            sy += ey[r + hiX] - ey[r + loX];
          }
          const std::size_t rlo = static_cast<std::size_t>(loY) * N;
          const std::size_t rhi = static_cast<std::size_t>(hiY) * N;
          for (int i = loX; i < loX + s; ++i) sx += ex[rlo + i] - ex[rhi + i];
          const double lin = sy * ihx + sx * ihy;
          const double eta =
              -lin * ivq[m + static_cast<std::size_t>(nb) * n];
          drop += lin * lin * ivq[m + static_cast<std::size_t>(nb) * n];
          const double af = std::fabs(eta);
          if (af > fmax) fmax = af;
          for (int j = loY; j < loY + s; ++j) {
            const std::size_t r = static_cast<std::size_t>(j) * N;
            ey[r + loX] -= eta * iey[r + loX] * ihx;
            ey[r + hiX] += eta * iey[r + hiX] * ihx;
          }
          for (int i = loX; i < loX + s; ++i) {
            ex[rlo + i] += eta * iex[rlo + i] * ihy;
            ex[rhi + i] -= eta * iex[rhi + i] * ihy;
          }
          ++t.updates_applied;
          t.edge_touches += 4 * s;
        }
    }
    t.energy_drop += 0.5 * dv * drop;
    t.flux_max = fmax;
    return;
  }

  // 3D: per block and orientation, one large-rectangle update on every
  // perpendicular layer of the block, each with its own optimal flux.
  double drop_total = 0.0;
  for (int lev : schedule_) {
    const int s = N >> lev;
    const int nb = 1 << lev;
    for (int bz = 0; bz < nb; ++bz)
      for (int by = 0; by < nb; ++by)
        for (int bx = 0; bx < nb; ++bx) {
          const std::array<int, 3> lo{bx * s, by * s, bz * s};
          for (int o = 0; o < 3; ++o) {
            auto [a, b] = kPlaneAxes[o];
            const int perp = 3 - a - b;
            for (int layer = 0; layer < s; ++layer) {
              std::array<int, 3> base = lo;
              base[perp] = lo[perp] + layer;
              const double eta = rect_flux(E, eps_, a, b, base, s, s);
              // -dF = (dv/2) * q * eta^2; recover q from the definition of
              // eta = -lin/q via one extra flux evaluation is wasteful, so
              // recompute the quadratic coefficient directly.
              double q = 0.0;
              {
                const double ha = g.spacing(a), hb = g.spacing(b);
                const int hiA = g.wrap(a, base[a] + s);
                const int hiB = g.wrap(b, base[b] + s);
                double qb = 0.0, qa = 0.0;
                for (int tt = 0; tt < s; ++tt) {
                  std::array<int, 3> plo = base, phi = base;
                  plo[b] = phi[b] = g.wrap(b, base[b] + tt);
                  phi[a] = hiA;
                  qb += inv_eps_[b][g.idx(plo[0], plo[1], plo[2])] +
                        inv_eps_[b][g.idx(phi[0], phi[1], phi[2])];
                }
                for (int tt = 0; tt < s; ++tt) {
                  std::array<int, 3> plo = base, phi = base;
                  plo[a] = phi[a] = g.wrap(a, base[a] + tt);
                  phi[b] = hiB;
                  qa += inv_eps_[a][g.idx(plo[0], plo[1], plo[2])] +
                        inv_eps_[a][g.idx(phi[0], phi[1], phi[2])];
                }
                q = qb / (ha * ha) + qa / (hb * hb);
              }
              apply_rect(E, eps_, a, b, base, s, s, eta);
              drop_total += q * eta * eta;
              const double af = std::fabs(eta);
              if (af > t.flux_max) t.flux_max = af;
              ++t.updates_applied;
              t.edge_touches += 4 * s;
            }
          }
        }
  }
  t.energy_drop += 0.5 * g.cell_volume() * drop_total;
}

void Sweeper::pass_lines(StaggeredField& E, SweepTrace& t) {
  const GridSpec& g = grid_;
  const double dv = g.cell_volume();
  double drop = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const int u = (a == 0) ? 1 : 0;
    const int v = (a == 2) ? 1 : 2;
    std::size_t line = 0;
    for (int cv = 0; cv < g.cells[v]; ++cv)
      for (int cu = 0; cu < g.cells[u]; ++cu, ++line) {
        std::array<int, 3> p{0, 0, 0};
        p[u] = cu;
        p[v] = cv;
        double se = 0.0;
        for (int tt = 0; tt < g.cells[a]; ++tt) {
          p[a] = tt;
          se += E.comp[a][g.idx(p[0], p[1], p[2])];
        }
        const double inv_sum = line_inv_sum_[a][line];
        const double eta = -se * inv_sum;
        for (int tt = 0; tt < g.cells[a]; ++tt) {
          p[a] = tt;
          const std::size_t q = g.idx(p[0], p[1], p[2]);
          E.comp[a][q] += eta * inv_eps_[a][q];
        }
        drop += se * se * inv_sum;
        const double af = std::fabs(eta);
        if (af > t.flux_max) t.flux_max = af;
        ++t.updates_applied;
      }
  }
  t.energy_drop += 0.5 * dv * drop;
}

SweepTrace Sweeper::pass(StaggeredField& E) {
  if (!(E.spec == grid_))
    throw std::invalid_argument("Sweeper::pass: field/coefficient spec mismatch");
  SweepTrace t;
  if (method_ == RelaxMethod::SingleMesh) {
    if (grid_.dim == 2)
      pass_cells_2d(E, t);
    else
      pass_cells_3d(E, t);
  } else {
    pass_blocks(E, t);
  }
  pass_lines(E, t);
  return t;
}

SweepTrace relax_pass(StaggeredField& E, const EdgeCoeff& eps,
                      RelaxMethod method) {
  Sweeper sw(eps, method);
  return sw.pass(E);
}

}  // namespace hlr
