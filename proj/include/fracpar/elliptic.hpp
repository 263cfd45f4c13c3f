#ifndef FRACPAR_ELLIPTIC_HPP
#define FRACPAR_ELLIPTIC_HPP

#include <Eigen/Sparse>

#include "fracpar/coeff.hpp"
#include "fracpar/grid.hpp"

namespace fracpar {

enum class Boundary { Dirichlet, Neumann };

// Discrete -div(A grad) on the truncation box; conservative flux form with
// edge-midpoint coefficient sampling (diagonal entries of A) plus a
// symmetrized centered-difference treatment of the mixed term (2d only).
struct DiscreteElliptic {
  Eigen::SparseMatrix<double> matrix;  // acting on flattened node vectors
  Boundary boundary = Boundary::Dirichlet;
};

DiscreteElliptic assemble_elliptic(const Grid& grid, const CoefficientField& a,
                                   Boundary boundary = Boundary::Dirichlet);

}  // namespace fracpar

#endif
