#include "shapelab/riemannian.hpp"

#include <cmath>

#include "shapelab/errors.hpp"

namespace shapelab {

namespace {

constexpr double kEps = 1e-12;

void check_grid(const CurveFrame& frame, const BoundaryScalar& values) {
  if (values.size() != frame.theta.size())
    throw GridMismatch("boundary field does not match the frame grid");
}

// Nonuniform periodic 3-point second difference in arc length.
struct L1Stencil {
  Eigen::VectorXd lower, diag, upper;
};

L1Stencil l1_stencil(const CurveFrame& frame, double smoothing) {
  const int n = frame.node_count();
  L1Stencil st{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    const double h_prev = frame.ds[(i + n - 1) % n];
    const double h_next = frame.ds[i];
    const double c_prev = 2.0 / (h_prev * (h_prev + h_next));
    const double c_next = 2.0 / (h_next * (h_prev + h_next));
    st.lower[i] = -smoothing * c_prev;
    st.upper[i] = -smoothing * c_next;
    st.diag[i] = 1.0 + smoothing * (c_prev + c_next);
  }
  return st;
}

}  // namespace

double metric(const MetricSpec& spec, const CurveFrame& frame, const BoundaryScalar& a,
              const BoundaryScalar& b) {
  check_grid(frame, a);
  check_grid(frame, b);
  switch (spec.kind) {
    case MetricKind::g0:
      return boundary_integral(frame, a * b);
    case MetricKind::ga:
      return boundary_integral(frame, (1.0 + spec.smoothing * frame.curvature.square()) * a * b);
    case MetricKind::sobolev_h1: {
      if (!(spec.smoothing > 0.0))
        throw SingularOperator("sobolev metric needs A > 0");
      const ArrayXd d2a = arc_length_derivative(frame, arc_length_derivative(frame, a));
      return boundary_integral(frame, (a - spec.smoothing * d2a) * b);
    }
  }
  throw Error("unreachable");
}

BoundaryScalar apply_l1(const CurveFrame& frame, double smoothing,
                        const BoundaryScalar& values) {
  check_grid(frame, values);
  const int n = frame.node_count();
  const L1Stencil st = l1_stencil(frame, smoothing);
  BoundaryScalar out(n);
  for (int i = 0; i < n; ++i)
    out[i] = st.lower[i] * values[(i + n - 1) % n] + st.diag[i] * values[i] +
             st.upper[i] * values[(i + 1) % n];
  return out;
}

BoundaryScalar invert_l1(const CurveFrame& frame, double smoothing,
                         const BoundaryScalar& values) {
  check_grid(frame, values);
  if (!(smoothing > 0.0)) throw SingularOperator("L1 inversion needs A > 0");
  const L1Stencil st = l1_stencil(frame, smoothing);
  const Eigen::VectorXd solution =
      cyclic_tridiagonal_solve(st.lower, st.diag, st.upper, values.matrix());

  BoundaryScalar out = solution.array();
  const BoundaryScalar residual = apply_l1(frame, smoothing, out) - values;
  if (residual.abs().maxCoeff() > 1e-8 * std::max(values.abs().maxCoeff(), kEps))
    throw SingularOperator("L1 inversion residual above 1e-8");
  return out;
}

BoundaryScalar riemannian_gradient(const MetricSpec& spec, const CurveFrame& frame,
                                   const BoundaryScalar& density) {
  check_grid(frame, density);
  switch (spec.kind) {
    case MetricKind::g0:
      return density;
    case MetricKind::ga:
      return density / (1.0 + spec.smoothing * frame.curvature.square());
    case MetricKind::sobolev_h1:
      return invert_l1(frame, spec.smoothing, density);
  }
  throw Error("unreachable");
}

BoundaryScalar covariant_derivative(const CurveFrame& frame, double smoothing,
                                    const AmbientField& v, const AmbientField& w) {
  const int n = frame.node_count();
  BoundaryScalar out(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 p = frame.position.col(i);
    const Vec2 nu = frame.normal.col(i);
    const double k = frame.curvature[i];
    const double weight = (3.0 * smoothing * k * k * k + k) / (1.0 + smoothing * k * k);
    out[i] = w.directional_derivative(v, p).dot(nu) + weight * v(p).dot(nu) * w(p).dot(nu);
  }
  return out;
}

BoundaryScalar torsion(const CurveFrame& frame, double smoothing, const AmbientField& v,
                       const AmbientField& w) {
  const BoundaryScalar forward = covariant_derivative(frame, smoothing, v, w);
  const BoundaryScalar backward = covariant_derivative(frame, smoothing, w, v);
  BoundaryScalar bracket(frame.node_count());
  for (int i = 0; i < frame.node_count(); ++i)
    bracket[i] = field_bracket(v, w, frame.position.col(i)).dot(frame.normal.col(i));
  return forward - backward - bracket;
}

HessianForm hessian_form(const CurveFrame& frame, const EigenPair& eig,
                         HessFunctional functional, double gamma,
                         int curvature_convention) {
  if (curvature_convention != 1 && curvature_convention != -1)
    throw Error("curvature convention must be +1 or -1");
  const ArrayXd& k = frame.curvature;

  HessianForm form;
  form.functional = functional;
  form.curvature_convention = curvature_convention;

  if (functional == HessFunctional::j2) {
    if (eig.bc != BoundaryCondition::neumann) throw WrongBC("J2 Hessian needs Neumann");
    check_grid(frame, eig.value_trace);
    const ArrayXd u2 = eig.value_trace * eig.value_trace;
    const ArrayXd psi = k * u2 + gamma;
    const ArrayXd dpsi_dnu = curvature_convention * k.square() * u2 +
                             k * 2.0 * eig.value_trace * eig.flux_trace;
    form.density = dpsi_dnu + k * psi;
  } else {
    if (eig.bc != BoundaryCondition::dirichlet) throw WrongBC("J3 Hessian needs Dirichlet");
    if (eig.flux_trace.size() == 0) throw MissingFlux("flux trace absent");
    check_grid(frame, eig.flux_trace);
    const ArrayXd f2 = eig.flux_trace * eig.flux_trace;
    const ArrayXd psi = -0.5 * f2 + gamma;
    // d(f^2)/dnu = 2 f f_nu = -2 K f^2 on a Dirichlet boundary (u_ss = 0 and
    // the PDE give u_nunu = -K u_nu there).
    const ArrayXd dpsi_dnu = k * f2;
    form.density = dpsi_dnu + k * psi;
  }
  return form;
}

double evaluate(const HessianForm& form, const CurveFrame& frame,
                const BoundaryScalar& alpha, const BoundaryScalar& beta) {
  check_grid(frame, form.density);
  check_grid(frame, alpha);
  check_grid(frame, beta);
  return boundary_integral(frame, form.density * alpha * beta);
}

ConnectionCheck connection_identity_check(const FourierCurve& curve,
                                          HessFunctional functional, const AmbientField& v,
                                          const ConnectionOptions& options) {
  const BoundaryCondition bc = functional == HessFunctional::j2
                                   ? BoundaryCondition::neumann
                                   : BoundaryCondition::dirichlet;
  const int nq = options.trace_nodes;
  const CurveFrame base_frame = frame(curve, nq);
  const Mesh base_mesh = triangulate(curve, options.mesh_h);

  std::vector<EigenPair> modes = solve_eigs(base_mesh, bc, options.mode + 2, nq);
  const EigenPair& mode = modes[static_cast<size_t>(options.mode - 1)];

  // rhs: Hessian form plus the reduced derivative along nabla_V V.
  BoundaryScalar alpha(nq);
  for (int i = 0; i < nq; ++i)
    alpha[i] = v(base_frame.position.col(i)).dot(base_frame.normal.col(i));

  const HessianForm form =
      hessian_form(base_frame, mode, functional, options.gamma, options.curvature_convention);
  const BoundaryScalar nabla_vv =
      covariant_derivative(base_frame, options.smoothing, v, v);
  const BoundaryScalar reduced_density =
      functional == HessFunctional::j2 ? dJ2_density(base_frame, mode, options.gamma)
                                       : dJ3_density(base_frame, mode, options.gamma);

  ConnectionCheck check;
  check.rhs = evaluate(form, base_frame, alpha, alpha) +
              boundary_integral(base_frame, reduced_density * nabla_vv);

  // lhs: second difference of the true functional along the flow of V.
  auto functional_at = [&](double t) {
    Eigen::Matrix2Xd points = base_frame.position;
    for (int i = 0; i < nq; ++i) points.col(i) += t * v(points.col(i));
    const FourierCurve flowed = project_to_harmonics(points, curve.harmonics_max());
    const Mesh mesh = (t == 0.0) ? base_mesh : morph_to_curve(base_mesh, flowed);
    std::vector<EigenPair> solved = solve_eigs(mesh, bc, options.mode + 2, nq);
    const int idx = track_mode(solved, mode);
    const CurveFrame frm = frame(flowed, nq);
    return functional == HessFunctional::j2
               ? functional_J2(frm, solved[static_cast<size_t>(idx)], options.gamma)
               : functional_J3(frm, solved[static_cast<size_t>(idx)], options.gamma);
  };

  const double t = options.step;
  const double j_plus = functional_at(t);
  const double j_zero = functional_at(0.0);
  const double j_minus = functional_at(-t);
  check.lhs = (j_plus - 2.0 * j_zero + j_minus) / (t * t);
  check.gap = std::abs(check.lhs - check.rhs) / std::max(std::abs(check.lhs), kEps);
  return check;
}

}  // namespace shapelab
