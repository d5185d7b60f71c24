#pragma once

#include "hlr/grid.hpp"
#include "hlr/solver.hpp"

namespace hlr::oracle {

/// Ground-truth variable-coefficient solve of -div(eps grad phi) = rho on
/// the periodic grid, independent of the relaxation path: dense symmetric
/// factorization for small systems, mean-projected preconditioned CG above
/// that. phi is mean-zero; E = -grad_h phi on the staggered points.
std::pair<NodeField, StaggeredField> direct_solve(const Problem& problem);

/// Constant-eps solve via the discrete 5/7-point stencil symbol in Fourier
/// space (exact for the discrete system, zero mode pinned).
std::pair<NodeField, StaggeredField> spectral_solve(const NodeField& rho,
                                                    double eps_const);

/// Matrix action of the discrete operator, exposed for symmetry tests.
std::vector<double> apply_operator(const GridSpec& g, const EdgeCoeff& eps,
                                   const std::vector<double>& phi);

}  // namespace hlr::oracle
