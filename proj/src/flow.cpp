#include "shapelab/flow.hpp"

#include <cmath>
#include <optional>

#include "shapelab/errors.hpp"

namespace shapelab {

namespace {

struct Evaluation {
  double functional_value = 0.0;
  BoundaryScalar grad;
  double grad_norm = 0.0;
  CurveFrame frm;
  EigenPair mode;
  Mesh mesh;
};

// Mesh reuse between full remeshes: every `remesh_cadence` accepted steps the
// domain is triangulated from scratch, otherwise the cached mesh is morphed
// onto the current curve (falling back to a remesh if an element inverts).
struct StepContext {
  std::optional<Mesh> cached_mesh;
  int steps_since_remesh = 0;
};

Mesh mesh_for(const FourierCurve& curve, const FlowConfig& config, StepContext* ctx) {
  if (ctx && ctx->cached_mesh && ctx->steps_since_remesh < config.remesh_cadence) {
    try {
      return morph_to_curve(*ctx->cached_mesh, curve);
    } catch (const MeshFailure&) {
      // fall through to a full remesh
    }
  }
  return triangulate(curve, config.mesh_h);
}

// Meshes, solves and differentiates the configured functional at `curve`.
// `reference` tracks the eigenvalue branch across iterates (j2 flows follow
// a possibly higher mode; j3 follows the first Dirichlet mode).
Evaluation evaluate(const FourierCurve& curve, const FlowConfig& config,
                    const EigenPair* reference, StepContext* ctx) {
  Evaluation eval;
  eval.frm = frame(curve, config.trace_nodes);
  eval.mesh = mesh_for(curve, config, ctx);

  const BoundaryCondition bc = config.functional == HessFunctional::j2
                                   ? BoundaryCondition::neumann
                                   : BoundaryCondition::dirichlet;
  const int count = config.functional == HessFunctional::j2 ? config.mode + 2 : 3;
  std::vector<EigenPair> modes = solve_eigs(eval.mesh, bc, count, config.trace_nodes);

  int index = config.functional == HessFunctional::j2 ? config.mode - 1 : 0;
  if (reference) index = track_mode(modes, *reference);
  eval.mode = modes[static_cast<size_t>(index)];

  BoundaryScalar density;
  if (config.functional == HessFunctional::j2) {
    eval.functional_value = functional_J2(eval.frm, eval.mode, config.gamma);
    density = dJ2_density(eval.frm, eval.mode, config.gamma);
  } else {
    eval.functional_value = functional_J3(eval.frm, eval.mode, config.gamma);
    density = dJ3_density(eval.frm, eval.mode, config.gamma);
  }
  eval.grad = riemannian_gradient(config.metric, eval.frm, density);
  eval.grad_norm =
      std::sqrt(std::max(metric(config.metric, eval.frm, eval.grad, eval.grad), 0.0));
  return eval;
}

bool curvature_positive(const CurveFrame& frm) { return frm.curvature.minCoeff() > 0.0; }

FlowState make_state(int iteration, const FourierCurve& curve, const Evaluation& eval,
                     double accepted_step) {
  FlowState state;
  state.iteration = iteration;
  state.curve = curve;
  state.functional_value = eval.functional_value;
  state.grad_norm = eval.grad_norm;
  state.disk_defect_value = disk_defect(curve).defect;
  state.accepted_step = accepted_step;
  state.convex = curvature_positive(eval.frm);
  return state;
}

FlowState step_impl(const FlowState& state, const FlowConfig& config, StepContext* ctx) {
  const Evaluation here = evaluate(state.curve, config, nullptr, ctx);

  // Below tolerance the iterate is declared stationary and left untouched.
  if (here.grad_norm <= config.grad_tol)
    return make_state(state.iteration + 1, state.curve, here, 0.0);

  double s = config.step0;
  for (int halving = 0; halving <= 10; ++halving, s *= 0.5) {
    std::optional<FourierCurve> candidate;
    try {
      candidate = move_curve(state.curve, here.frm, here.grad, s, config.area_target);
      validate_curve(*candidate);
    } catch (const Error&) {
      continue;  // immersion or embedding lost; shrink the step
    }
    try {
      const Evaluation there = evaluate(*candidate, config, &here.mode, ctx);
      if (there.functional_value < here.functional_value) {
        if (ctx) {
          ctx->steps_since_remesh += 1;
          if (!ctx->cached_mesh || ctx->steps_since_remesh >= config.remesh_cadence) {
            ctx->cached_mesh = triangulate(*candidate, config.mesh_h);
            ctx->steps_since_remesh = 0;
          }
        }
        return make_state(state.iteration + 1, *candidate, there, s);
      }
    } catch (const Error&) {
      continue;  // mesh or solver failure at the candidate; shrink the step
    }
  }
  throw StepFailure("backtracking found no decrease within 10 halvings");
}

}  // namespace

FourierCurve move_curve(const FourierCurve& curve, const CurveFrame& frame,
                        const BoundaryScalar& grad, double step_size, double area_target) {
  const FourierCurve moved = normal_perturbation(curve, frame, ArrayXd(-step_size * grad));
  return rescale_to_area(moved, area_target);
}

FlowState step(const FlowState& state, const FlowConfig& config) {
  return step_impl(state, config, nullptr);
}

FlowResult run(const FourierCurve& initial, const FlowConfig& config) {
  validate_curve(initial);
  FourierCurve start = rescale_to_area(initial, config.area_target);

  StepContext ctx;
  ctx.cached_mesh = triangulate(start, config.mesh_h);

  FlowResult result;
  Evaluation eval = evaluate(start, config, nullptr, &ctx);
  FlowState state = make_state(0, start, eval, 0.0);
  result.history.push_back(state);

  while (state.iteration < config.max_iterations) {
    if (state.grad_norm <= config.grad_tol) {
      result.converged = true;
      break;
    }
    state = step_impl(state, config, &ctx);
    result.history.push_back(state);
    if (state.accepted_step == 0.0) {  // stationary under tolerance
      result.converged = true;
      break;
    }
  }

  const FlowState& final_state = result.history.back();
  result.final_disk_defect = final_state.disk_defect_value;
  result.verdict = result.converged ? "converged" : "not converged";

  // Disk diagnostics at the terminal curve.
  result.residuals =
      schiffer_residuals(final_state.curve, config.mesh_h, 6, config.trace_nodes);
  const Mesh mesh = triangulate(final_state.curve, config.mesh_h);
  const auto dirichlet = solve_eigs(mesh, BoundaryCondition::dirichlet, 1, config.trace_nodes);
  const CurveFrame frm = frame(final_state.curve, config.trace_nodes);
  result.optimality_deviation = optimality_residual(frm, dirichlet[0]).deviation;
  return result;
}

}  // namespace shapelab
