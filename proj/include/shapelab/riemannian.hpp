#pragma once

// Riemannian structure on the space of embedded curves: the L2 metric, the
// curvature-weighted metric, the first Sobolev metric with L1 = I - A D_s^2,
// shape gradients, the covariant derivative and its torsion, the Riemannian
// Hessian boundary form, and the finite-difference connection identity check.

#include <Eigen/Dense>

#include "shapelab/ambient_field.hpp"
#include "shapelab/eigensolve.hpp"
#include "shapelab/fourier_curve.hpp"
#include "shapelab/shape_calculus.hpp"

namespace shapelab {

enum class MetricKind { g0, ga, sobolev_h1 };

struct MetricSpec {
  MetricKind kind = MetricKind::ga;
  double smoothing = 0.0;  // the constant A; must be > 0 for sobolev_h1
};

// G0(a,b) = int a b ds;  GA adds the (1 + A K^2) weight;  the Sobolev metric
// is int (a - A D_s^2 a) b ds with D_s applied spectrally.
double metric(const MetricSpec& spec, const CurveFrame& frame, const BoundaryScalar& a,
              const BoundaryScalar& b);

// (I - A D_s^2) discretized as a periodic second difference in arc length.
BoundaryScalar apply_l1(const CurveFrame& frame, double smoothing,
                        const BoundaryScalar& values);
// Inverse of the same discrete operator (cyclic tridiagonal solve).
BoundaryScalar invert_l1(const CurveFrame& frame, double smoothing,
                         const BoundaryScalar& values);

// Gradient dual to a boundary density G with dJ(V) = int G (V.nu) ds:
//   g0: G,  ga: G / (1 + A K^2),  sobolev_h1: L1^{-1} G.
BoundaryScalar riemannian_gradient(const MetricSpec& spec, const CurveFrame& frame,
                                   const BoundaryScalar& density);

// nabla_V W = <D_V W, nu> + (3 A K^3 + K)/(1 + A K^2) <V,nu><W,nu> nodewise.
BoundaryScalar covariant_derivative(const CurveFrame& frame, double smoothing,
                                    const AmbientField& v, const AmbientField& w);

// T(V,W) = nabla_V W - nabla_W V - [V,W] paired with the normal; expected 0.
BoundaryScalar torsion(const CurveFrame& frame, double smoothing, const AmbientField& v,
                       const AmbientField& w);

enum class HessFunctional { j2, j3 };

struct HessianForm {
  BoundaryScalar density;  // d psi/dnu + K psi on the theta grid
  HessFunctional functional = HessFunctional::j2;
  int curvature_convention = +1;  // sign s in dK/dnu := s K^2
};

// Termwise normal derivative of psi: dK/dnu := s K^2, d(u^2)/dnu = 2 u du/dnu
// (zero for Neumann pairs), constants drop. For j3 the flux term uses the
// boundary identity d(f^2)/dnu = -2 K f^2 of Dirichlet eigenfunctions.
HessianForm hessian_form(const CurveFrame& frame, const EigenPair& eig,
                         HessFunctional functional, double gamma,
                         int curvature_convention = +1);

double evaluate(const HessianForm& form, const CurveFrame& frame,
                const BoundaryScalar& alpha, const BoundaryScalar& beta);

struct ConnectionCheck {
  double lhs = 0.0;  // second difference of J along the flow of V
  double rhs = 0.0;  // Hessian form + dJ(nabla_V V)
  double gap = 0.0;  // |lhs - rhs| / max(|lhs|, eps)
};

struct ConnectionOptions {
  double smoothing = 1.0;     // A
  int curvature_convention = +1;
  double gamma = 0.0;
  int mode = 1;               // 1-based eigenvalue index
  double step = 1e-2;         // flow parameter t
  double mesh_h = 0.05;
  int trace_nodes = 256;
};

// lhs re-solves the PDE on the curves c + t V(c) and c - t V(c) (morphed
// meshes, tracked mode); rhs evaluates the Riemannian Hessian identity.
ConnectionCheck connection_identity_check(const FourierCurve& curve,
                                          HessFunctional functional, const AmbientField& v,
                                          const ConnectionOptions& options);

}  // namespace shapelab
