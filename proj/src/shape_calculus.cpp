#include "shapelab/shape_calculus.hpp"

#include <cmath>

#include "shapelab/errors.hpp"

namespace shapelab {

namespace {

constexpr double kEps = 1e-12;

void check_grid(const CurveFrame& frame, const BoundaryScalar& values) {
  if (values.size() != frame.theta.size())
    throw GridMismatch("boundary field does not match the frame grid");
}

void check_orthonormal(const std::vector<EigenPair>& cluster) {
  for (const auto& pair : cluster)
    if (pair.residual > 1e-6)
      throw NonOrthonormalCluster("cluster eigenpair residual out of contract");
}

// Enclosed area from the frame samples (shoelace; exact for band-limited c).
double frame_area(const CurveFrame& frame) {
  double acc = 0.0;
  const int n = frame.node_count();
  for (int i = 0; i < n; ++i) {
    const Vec2 p = frame.position.col(i);
    const Vec2 c_theta = frame.tangent.col(i) * frame.speed[i];
    acc += 0.5 * (p.x() * c_theta.y() - p.y() * c_theta.x());
  }
  return acc * 2.0 * M_PI / n;
}

}  // namespace

void attach_fd(DerivativeReport& report, double fd_value, double fd_step) {
  report.fd_value = fd_value;
  report.fd_step = fd_step;
  report.rel_gap = std::abs(report.value - fd_value) / std::max(std::abs(fd_value), kEps);
}

double functional_J(const EigenPair& eig) {
  if (eig.bc != BoundaryCondition::dirichlet)
    throw WrongBC("Dirichlet energy needs a Dirichlet eigenpair");
  return eig.energy;
}

DerivativeReport dJ_dirichlet(const CurveFrame& frame, const EigenPair& eig,
                              const BoundaryScalar& alpha) {
  if (eig.bc != BoundaryCondition::dirichlet) throw WrongBC("expected Dirichlet eigenpair");
  if (eig.flux_trace.size() == 0) throw MissingFlux("flux trace absent");
  check_grid(frame, alpha);
  check_grid(frame, eig.flux_trace);

  const double classical =
      -boundary_integral(frame, eig.flux_trace * eig.flux_trace * alpha);
  DerivativeReport report;
  report.value = classical;
  report.paper_variant = 0.5 * classical;
  report.formula = "dJ_dirichlet";
  report.grid = frame.node_count();
  return report;
}

DerivativeReport dlambda_neumann(const CurveFrame& frame, const EigenPair& eig,
                                 const BoundaryScalar& alpha) {
  if (eig.bc != BoundaryCondition::neumann) throw WrongBC("expected Neumann eigenpair");
  check_grid(frame, alpha);

  // Same quadrature as the p x p matrix path, specialized to p = 1.
  ClusterDerivative m = multi_matrix_neumann(frame, {eig}, alpha);
  DerivativeReport report;
  report.value = m.matrix(0, 0);
  report.paper_variant = m.matrix(0, 0);
  report.formula = "dlambda_neumann";
  report.grid = frame.node_count();
  return report;
}

DerivativeReport dlambda_neumann(const CurveFrame& frame,
                                 const std::vector<EigenPair>& cluster,
                                 const BoundaryScalar& alpha) {
  if (cluster.empty()) throw EmptyCluster("empty cluster");
  if (cluster.size() > 1)
    throw MultipleEigenvalue("eigenvalue is multiple; use multi_matrix_neumann");
  return dlambda_neumann(frame, cluster.front(), alpha);
}

ClusterDerivative multi_matrix_dirichlet(const CurveFrame& frame,
                                         const std::vector<EigenPair>& cluster,
                                         const BoundaryScalar& alpha) {
  if (cluster.empty()) throw EmptyCluster("empty cluster");
  check_orthonormal(cluster);
  check_grid(frame, alpha);
  const int p = static_cast<int>(cluster.size());

  ClusterDerivative out;
  out.matrix.resize(p, p);
  for (int i = 0; i < p; ++i) {
    if (cluster[i].bc != BoundaryCondition::dirichlet)
      throw WrongBC("expected Dirichlet cluster");
    for (int j = i; j < p; ++j) {
      const double value = -boundary_integral(
          frame, cluster[i].flux_trace * cluster[j].flux_trace * alpha);
      out.matrix(i, j) = value;
      out.matrix(j, i) = value;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.matrix);
  out.eigenvalues = es.eigenvalues();
  return out;
}

ClusterDerivative multi_matrix_neumann(const CurveFrame& frame,
                                       const std::vector<EigenPair>& cluster,
                                       const BoundaryScalar& alpha) {
  if (cluster.empty()) throw EmptyCluster("empty cluster");
  check_orthonormal(cluster);
  check_grid(frame, alpha);
  const int p = static_cast<int>(cluster.size());

  double lambda_bar = 0.0;
  for (const auto& pair : cluster) lambda_bar += pair.lambda;
  lambda_bar /= p;

  std::vector<ArrayXd> tangential(cluster.size());
  for (int i = 0; i < p; ++i) {
    if (cluster[i].bc != BoundaryCondition::neumann) throw WrongBC("expected Neumann cluster");
    tangential[i] = arc_length_derivative(frame, cluster[i].value_trace);
  }

  // m_ij = int (grad u_i . grad u_j - k^2 u_i u_j) (V.nu) ds, the normal
  // displacement weighting both terms so p = 1 reduces to the simple formula.
  ClusterDerivative out;
  out.matrix.resize(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      const ArrayXd density = tangential[i] * tangential[j] -
                              lambda_bar * cluster[i].value_trace * cluster[j].value_trace;
      const double value = boundary_integral(frame, density * alpha);
      out.matrix(i, j) = value;
      out.matrix(j, i) = value;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.matrix);
  out.eigenvalues = es.eigenvalues();
  return out;
}

double functional_J2(const CurveFrame& frame, const EigenPair& eig, double gamma) {
  if (eig.bc != BoundaryCondition::neumann) throw WrongBC("J2 needs a Neumann eigenpair");
  const double boundary_mass = boundary_integral(frame, eig.value_trace * eig.value_trace);
  return boundary_mass + gamma * frame_area(frame);
}

BoundaryScalar dJ2_density(const CurveFrame& frame, const EigenPair& eig, double gamma) {
  if (eig.bc != BoundaryCondition::neumann) throw WrongBC("J2 needs a Neumann eigenpair");
  return frame.curvature * eig.value_trace * eig.value_trace + gamma;
}

double dJ2_reduced(const CurveFrame& frame, const EigenPair& eig, double gamma,
                   const BoundaryScalar& alpha) {
  check_grid(frame, alpha);
  return boundary_integral(frame, dJ2_density(frame, eig, gamma) * alpha);
}

double functional_J3(const CurveFrame& frame, const EigenPair& eig, double gamma) {
  if (eig.bc != BoundaryCondition::dirichlet) throw WrongBC("J3 needs a Dirichlet eigenpair");
  return eig.energy + gamma * frame_area(frame);
}

BoundaryScalar dJ3_density(const CurveFrame& frame, const EigenPair& eig, double gamma) {
  if (eig.bc != BoundaryCondition::dirichlet) throw WrongBC("J3 needs a Dirichlet eigenpair");
  if (eig.flux_trace.size() == 0) throw MissingFlux("flux trace absent");
  check_grid(frame, eig.flux_trace);
  return -0.5 * eig.flux_trace * eig.flux_trace + gamma;
}

DerivativeReport dJ3(const CurveFrame& frame, const EigenPair& eig, double gamma,
                     const BoundaryScalar& alpha) {
  check_grid(frame, alpha);
  const BoundaryScalar paper_density = dJ3_density(frame, eig, gamma);
  const BoundaryScalar classical_density = -eig.flux_trace * eig.flux_trace + gamma;

  // `value` carries the classical eigenvalue factor (what finite differences
  // of J3 reproduce); `paper_variant` the halved flavor the gradient flow uses.
  DerivativeReport report;
  report.value = boundary_integral(frame, classical_density * alpha);
  report.paper_variant = boundary_integral(frame, paper_density * alpha);
  report.formula = "dJ3";
  report.grid = frame.node_count();
  return report;
}

OptimalityResidual optimality_residual(const CurveFrame& frame, const EigenPair& eig) {
  if (eig.bc != BoundaryCondition::dirichlet)
    throw WrongBC("optimality residual needs a Dirichlet eigenpair");
  if (eig.flux_trace.size() == 0) throw MissingFlux("flux trace absent");
  check_grid(frame, eig.flux_trace);

  const ArrayXd density = -0.5 * eig.flux_trace * eig.flux_trace;
  if (density.abs().maxCoeff() < 1e-14)
    throw ZeroFlux("flux trace is identically zero");

  OptimalityResidual result;
  result.tau = boundary_integral(frame, density) / frame.length;
  result.lambda_bar = std::sqrt(std::max(-2.0 * result.tau, 0.0));
  result.deviation = (density - result.tau).abs().maxCoeff() / std::abs(result.tau);
  return result;
}

SchifferResiduals schiffer_residuals(const FourierCurve& curve, double h,
                                     int modes_scanned, int trace_nodes) {
  const Mesh mesh = triangulate(curve, h);
  const CurveFrame frm = frame(curve, trace_nodes);

  auto constancy = [&](const BoundaryScalar& field) {
    const double mean = boundary_integral(frm, field) / frm.length;
    const double dev = (field - mean).abs().maxCoeff();
    return std::make_pair(dev / std::max(std::abs(mean), kEps), mean);
  };

  SchifferResiduals out;
  out.conj4 = std::numeric_limits<double>::max();
  out.conj5 = std::numeric_limits<double>::max();

  // Conjecture 4 side: nonconstant Neumann modes with near-constant trace.
  const auto neumann = solve_eigs(mesh, BoundaryCondition::neumann, modes_scanned + 1,
                                  trace_nodes);
  for (int i = 1; i <= modes_scanned; ++i) {
    const auto [residual, mean] = constancy(neumann[i].value_trace);
    if (residual < out.conj4) {
      out.conj4 = residual;
      out.conj4_mode = i - 1;
      out.conj4_lambda = neumann[i].lambda;
      out.conj4_trace_mean = mean;
    }
  }

  // Conjecture 5 side: Dirichlet modes with near-constant flux magnitude.
  const auto dirichlet =
      solve_eigs(mesh, BoundaryCondition::dirichlet, modes_scanned, trace_nodes);
  for (int i = 0; i < modes_scanned; ++i) {
    const auto [residual, mean] = constancy(dirichlet[i].flux_trace.abs());
    if (residual < out.conj5) {
      out.conj5 = residual;
      out.conj5_mode = i;
      out.conj5_lambda = dirichlet[i].lambda;
      out.conj5_flux_mean = mean;
    }
  }
  return out;
}

}  // namespace shapelab
