#pragma once

// Closed-form disk spectra built from Bessel roots: the exact ground truth
// the finite-element solver is measured against.

#include <vector>

#include "shapelab/bessel.hpp"

namespace shapelab {

enum class BoundaryCondition { dirichlet, neumann };

struct DiskEigen {
  double radius = 1.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  double lambda = 0.0;     // (root / R)^2
  int angular_order = 0;   // n
  int radial_index = 0;    // m (0 marks the Neumann constant mode)
  double root = 0.0;
  // Boundary data of the L2-normalized radial profile. Angular factors are
  // cos/sin(n theta); n >= 1 entries appear twice (cosine and sine copies).
  double boundary_value = 0.0;
  double boundary_flux = 0.0;
};

// The `count` smallest eigenvalues in ascending order, double eigenvalues
// listed twice. The Neumann list starts with the constant mode (lambda = 0).
std::vector<DiskEigen> disk_spectrum(double radius, BoundaryCondition bc, int count);

// Maximum principle for -Delta - k^2 on the disk B_R: holds iff the first
// Dirichlet eigenvalue of -Delta exceeds k^2, i.e. |k| < j_{0,1} / R.
bool max_principle_holds(double k, double radius);

// Constant flux magnitude |du/dnu| of the normalized first Dirichlet
// eigenfunction on B_R; equals j_{0,1} / (sqrt(pi) R^2).
double lambda_disk(double radius);

}  // namespace shapelab
