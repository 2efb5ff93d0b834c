#include "shapelab/shape_calculus.hpp"

#include <cmath>

#include "shapelab/errors.hpp"

namespace shapelab {

namespace {

double trace_correlation(const BoundaryScalar& a, const BoundaryScalar& b) {
  const double na = std::sqrt((a * a).sum());
  const double nb = std::sqrt((b * b).sum());
  if (na < 1e-300 || nb < 1e-300) return 0.0;
  return std::abs((a * b).sum()) / (na * nb);
}

const BoundaryScalar& tracking_trace(const EigenPair& pair) {
  return pair.bc == BoundaryCondition::dirichlet ? pair.flux_trace : pair.value_trace;
}

// Quantity value on one solved domain, with the mode matched to `reference`.
double evaluate_quantity(const FourierCurve& curve, const Mesh& mesh,
                         const FdQuantity& quantity, const EigenPair* reference,
                         int trace_nodes, EigenPair* matched_out) {
  const BoundaryCondition bc = (quantity.kind == FdQuantityKind::lambda_neumann ||
                                quantity.kind == FdQuantityKind::j2)
                                   ? BoundaryCondition::neumann
                                   : BoundaryCondition::dirichlet;
  const int solve_count = quantity.mode + 2;
  std::vector<EigenPair> modes = solve_eigs(mesh, bc, solve_count, trace_nodes);

  int index = quantity.mode - 1;
  if (reference) index = track_mode(modes, *reference);
  const EigenPair& mode = modes[static_cast<size_t>(index)];
  if (matched_out) *matched_out = mode;

  const CurveFrame frm = frame(curve, trace_nodes);
  switch (quantity.kind) {
    case FdQuantityKind::lambda_dirichlet:
    case FdQuantityKind::lambda_neumann:
      return mode.lambda;
    case FdQuantityKind::j2:
      return functional_J2(frm, mode, quantity.gamma);
    case FdQuantityKind::j3:
      return functional_J3(frm, mode, quantity.gamma);
  }
  throw Error("unreachable");
}

}  // namespace

int track_mode(const std::vector<EigenPair>& candidates, const EigenPair& reference,
               double threshold) {
  int best = -1;
  double best_corr = -1.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const double corr =
        trace_correlation(tracking_trace(candidates[i]), tracking_trace(reference));
    // Prefer the closer eigenvalue among near-equal correlations.
    const double tie_break =
        corr - 1e-9 * std::abs(candidates[i].lambda - reference.lambda);
    if (tie_break > best_corr) {
      best_corr = tie_break;
      best = static_cast<int>(i);
    }
  }
  if (best < 0 || best_corr < threshold)
    throw ModeTrackingFailure("trace correlation below threshold while tracking a mode");
  return best;
}

FdResult fd_shape_derivative(const FourierCurve& curve, const BoundaryScalar& alpha,
                             const FdQuantity& quantity, const FdOptions& options) {
  if (!(options.step >= 1e-4 && options.step <= 1e-2))
    throw Error("fd step must lie in [1e-4, 1e-2]");

  const CurveFrame frm = frame(curve, static_cast<int>(alpha.size()));
  const Mesh base = triangulate(curve, options.mesh_h);

  // Resolve the reference mode once on the base mesh.
  EigenPair reference;
  evaluate_quantity(curve, base, quantity, nullptr, options.trace_nodes, &reference);

  auto central_difference = [&](double t) {
    const FourierCurve plus = normal_perturbation(curve, frm, ArrayXd(t * alpha));
    const FourierCurve minus = normal_perturbation(curve, frm, ArrayXd(-t * alpha));
    // Morphing the one base mesh keeps the difference free of remeshing noise
    // while both end points remain honestly re-solved problems.
    const Mesh mesh_plus = morph_to_curve(base, plus);
    const Mesh mesh_minus = morph_to_curve(base, minus);
    const double q_plus =
        evaluate_quantity(plus, mesh_plus, quantity, &reference, options.trace_nodes, nullptr);
    const double q_minus = evaluate_quantity(minus, mesh_minus, quantity, &reference,
                                             options.trace_nodes, nullptr);
    return (q_plus - q_minus) / (2.0 * t);
  };

  FdResult result;
  result.coarse_value = central_difference(options.step);
  if (options.richardson) {
    result.value = central_difference(0.5 * options.step);
    result.step = 0.5 * options.step;
  } else {
    result.value = result.coarse_value;
    result.step = options.step;
  }
  return result;
}

}  // namespace shapelab
