#pragma once

// Riemannian gradient descent on the space of curves at fixed enclosed area:
// move the boundary along -grad . nu, project back to the harmonic band,
// rescale to the target area, and accept steps by backtracking on the
// functional value.

#include <string>
#include <vector>

#include "shapelab/geometry.hpp"
#include "shapelab/riemannian.hpp"
#include "shapelab/shape_calculus.hpp"

namespace shapelab {

struct FlowConfig {
  HessFunctional functional = HessFunctional::j3;
  double gamma = 0.0;
  MetricSpec metric{MetricKind::ga, 0.1};
  double step0 = 0.5;
  int max_iterations = 200;
  double grad_tol = 1e-3;       // on sqrt(G(grad, grad))
  double area_target = M_PI;
  int harmonics_cap = 8;
  double mesh_h = 0.08;
  int remesh_cadence = 1;       // full remesh every k accepted steps
  int trace_nodes = 256;
  int mode = 1;                 // tracked eigenvalue index (j2 flows)
};

struct FlowState {
  int iteration = 0;
  FourierCurve curve = make_circle(1.0);
  double functional_value = 0.0;
  double grad_norm = 0.0;
  double disk_defect_value = 0.0;
  double accepted_step = 0.0;
  bool convex = true;  // monitored via curvature sign, not enforced
};

struct FlowResult {
  std::vector<FlowState> history;
  bool converged = false;
  std::string verdict;
  double final_disk_defect = 0.0;
  SchifferResiduals residuals;
  double optimality_deviation = 0.0;
};

// Evaluates the functional and gradient at the state's curve and takes one
// backtracking step; throws StepFailure when no decrease is found.
FlowState step(const FlowState& state, const FlowConfig& config);

FlowResult run(const FourierCurve& initial, const FlowConfig& config);

// Curve update alone (no PDE): c - s grad nu projected to the harmonic band
// and rescaled to the target area. Exposed for the fixed-point tests.
FourierCurve move_curve(const FourierCurve& curve, const CurveFrame& frame,
                        const BoundaryScalar& grad, double step_size, double area_target);

}  // namespace shapelab
