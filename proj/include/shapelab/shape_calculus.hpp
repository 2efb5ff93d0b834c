#pragma once

// Hadamard shape derivatives of the Dirichlet energy and of Laplace
// eigenvalues, the boundary functionals J2/J3 with their reduced derivatives,
// optimality and overdetermined-problem residuals, and an independent
// finite-difference differentiator that re-solves the PDE on perturbed curves.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "shapelab/eigensolve.hpp"
#include "shapelab/fourier_curve.hpp"

namespace shapelab {

// Normal perturbation field V = alpha nu sampled on the theta grid.
struct PerturbationField {
  BoundaryScalar normal_component;
};

struct DerivativeReport {
  double value = 0.0;          // primary (classical Hadamard factor where relevant)
  double paper_variant = 0.0;  // the -1/2 flavor reported alongside
  std::string formula;
  int grid = 0;
  double fd_value = std::numeric_limits<double>::quiet_NaN();
  double fd_step = 0.0;
  double rel_gap = std::numeric_limits<double>::quiet_NaN();
};

// Fills the finite-difference companion fields; gap is relative to the FD
// value with a 1e-12 floor.
void attach_fd(DerivativeReport& report, double fd_value, double fd_step);

// Dirichlet energy J = integral of |grad u|^2; equals lambda for normalized
// eigenfunctions.
double functional_J(const EigenPair& eig);

// dJ for the Dirichlet problem. value = -int f^2 alpha ds (classical),
// paper_variant = -1/2 int f^2 alpha ds, with f the flux trace.
DerivativeReport dJ_dirichlet(const CurveFrame& frame, const EigenPair& eig,
                              const BoundaryScalar& alpha);

// Simple Neumann eigenvalue derivative: int (|grad u|^2 - lambda u^2) alpha ds
// with the boundary gradient taken tangentially (the flux vanishes).
DerivativeReport dlambda_neumann(const CurveFrame& frame, const EigenPair& eig,
                                 const BoundaryScalar& alpha);
DerivativeReport dlambda_neumann(const CurveFrame& frame,
                                 const std::vector<EigenPair>& cluster,
                                 const BoundaryScalar& alpha);

struct ClusterDerivative {
  Eigen::MatrixXd matrix;        // symmetric p x p
  Eigen::VectorXd eigenvalues;   // ascending: the directional derivatives
};

ClusterDerivative multi_matrix_dirichlet(const CurveFrame& frame,
                                         const std::vector<EigenPair>& cluster,
                                         const BoundaryScalar& alpha);
ClusterDerivative multi_matrix_neumann(const CurveFrame& frame,
                                       const std::vector<EigenPair>& cluster,
                                       const BoundaryScalar& alpha);

// J2 = int_boundary u^2 ds + gamma |Omega| (Neumann constraint) and its
// reduced derivative density K u^2 + gamma.
double functional_J2(const CurveFrame& frame, const EigenPair& eig, double gamma);
BoundaryScalar dJ2_density(const CurveFrame& frame, const EigenPair& eig, double gamma);
double dJ2_reduced(const CurveFrame& frame, const EigenPair& eig, double gamma,
                   const BoundaryScalar& alpha);

// J3 = int |grad u|^2 + gamma |Omega| (Dirichlet constraint); density
// -1/2 f^2 + gamma; the classical-factor variant -f^2 + gamma is reported too.
double functional_J3(const CurveFrame& frame, const EigenPair& eig, double gamma);
BoundaryScalar dJ3_density(const CurveFrame& frame, const EigenPair& eig, double gamma);
DerivativeReport dJ3(const CurveFrame& frame, const EigenPair& eig, double gamma,
                     const BoundaryScalar& alpha);

struct OptimalityResidual {
  double tau = 0.0;        // arc-length mean of -1/2 f^2
  double lambda_bar = 0.0; // sqrt(-2 tau)
  double deviation = 0.0;  // max-node relative deviation of -1/2 f^2 from tau
};

OptimalityResidual optimality_residual(const CurveFrame& frame, const EigenPair& eig);

struct SchifferResiduals {
  double conj4 = 0.0;  // Neumann witness: constant nonzero boundary value
  double conj5 = 0.0;  // Dirichlet witness: constant flux magnitude
  int conj4_mode = -1; // index into the nonconstant Neumann modes (0-based)
  int conj5_mode = -1;
  double conj4_lambda = 0.0;
  double conj5_lambda = 0.0;
  double conj4_trace_mean = 0.0;
  double conj5_flux_mean = 0.0;
};

// Solves both eigenvalue problems on the meshed domain and scans the first
// `modes_scanned` candidate modes for near-constant boundary data.
SchifferResiduals schiffer_residuals(const FourierCurve& curve, double h,
                                     int modes_scanned = 6, int trace_nodes = 256);

// --- independent finite-difference oracle ---

enum class FdQuantityKind { lambda_dirichlet, lambda_neumann, j2, j3 };

struct FdQuantity {
  FdQuantityKind kind = FdQuantityKind::lambda_dirichlet;
  int mode = 1;        // 1-based eigenvalue index (tracked across solves)
  double gamma = 0.0;  // used by j2/j3
};

struct FdOptions {
  double step = 1e-3;
  double mesh_h = 0.05;
  int trace_nodes = 256;
  bool richardson = true;  // evaluate at t and t/2, keep the t/2 value
};

struct FdResult {
  double value = 0.0;       // central difference at the finest step
  double coarse_value = 0.0;
  double step = 0.0;
};

// Central difference of the tracked quantity between the curves
// c +/- t alpha nu (projected to the curve's harmonic band). The base mesh is
// morphed onto the perturbed curves so the difference is numerically smooth;
// eigenvalues are tracked by boundary-trace correlation (threshold 0.9).
FdResult fd_shape_derivative(const FourierCurve& curve, const BoundaryScalar& alpha,
                             const FdQuantity& quantity, const FdOptions& options);

// Correlation-based mode tracking: index in `candidates` matching the
// reference trace; throws ModeTrackingFailure below the threshold.
int track_mode(const std::vector<EigenPair>& candidates, const EigenPair& reference,
               double threshold = 0.9);

}  // namespace shapelab
