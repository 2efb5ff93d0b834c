#pragma once

// P1 finite-element eigenpairs of -Laplace on meshed curve interiors,
// Dirichlet or Neumann, with mass-normalized eigenvectors and boundary traces
// resampled onto the uniform theta grid. The Dirichlet flux trace is
// recovered variationally from the boundary rows of the residual.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "shapelab/disk_spectrum.hpp"
#include "shapelab/mesh.hpp"
#include "shapelab/spectral.hpp"

namespace shapelab {

struct FemSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
};

FemSystem assemble_p1(const Mesh& mesh);

struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd nodal;       // all mesh vertices (zeros on the boundary for Dirichlet)
  BoundaryScalar value_trace;  // u restricted to the boundary, on the theta grid
  BoundaryScalar flux_trace;   // du/dnu on the theta grid
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  double energy = 0.0;         // integral of |grad u|^2
  double residual = 0.0;       // ||K u - lambda M u|| / ||M u|| on free dofs
};

// The `count` smallest eigenpairs, mass-orthonormal, eigenvalues ascending.
std::vector<EigenPair> solve_eigs(const Mesh& mesh, BoundaryCondition bc, int count,
                                  int trace_nodes = 256);

// All computed eigenpairs with |lambda - target| <= tol * target.
// Throws EmptyCluster when none match.
std::vector<EigenPair> eig_with_multiplicity(const Mesh& mesh, BoundaryCondition bc,
                                             double target, double tol,
                                             int trace_nodes = 256);

}  // namespace shapelab
