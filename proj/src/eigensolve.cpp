#include "shapelab/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shapelab/errors.hpp"

namespace shapelab {

FemSystem assemble_p1(const Mesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> k_trips, m_trips;
  k_trips.reserve(static_cast<size_t>(mesh.triangle_count()) * 9);
  m_trips.reserve(static_cast<size_t>(mesh.triangle_count()) * 9);

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const int i0 = mesh.triangles(0, t), i1 = mesh.triangles(1, t), i2 = mesh.triangles(2, t);
    const Vec2 p0 = mesh.vertices.col(i0), p1 = mesh.vertices.col(i1),
               p2 = mesh.vertices.col(i2);
    const double twice_area =
        (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p1.y() - p0.y()) * (p2.x() - p0.x());
    if (twice_area <= 0.0) throw SingularMass("degenerate or inverted triangle");
    const double area = 0.5 * twice_area;

    // Gradients of the barycentric hat functions.
    const Vec2 g0(p1.y() - p2.y(), p2.x() - p1.x());
    const Vec2 g1(p2.y() - p0.y(), p0.x() - p2.x());
    const Vec2 g2(p0.y() - p1.y(), p1.x() - p0.x());
    const Vec2 grads[3] = {g0 / twice_area, g1 / twice_area, g2 / twice_area};
    const int idx[3] = {i0, i1, i2};

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        k_trips.emplace_back(idx[a], idx[b], area * grads[a].dot(grads[b]));
        m_trips.emplace_back(idx[a], idx[b], area / 12.0 * (a == b ? 2.0 : 1.0));
      }
  }

  FemSystem sys;
  sys.stiffness.resize(n, n);
  sys.mass.resize(n, n);
  sys.stiffness.setFromTriplets(k_trips.begin(), k_trips.end());
  sys.mass.setFromTriplets(m_trips.begin(), m_trips.end());
  return sys;
}

namespace {

Eigen::SparseMatrix<double> restrict_to(const Eigen::SparseMatrix<double>& full,
                                        const std::vector<int>& dof_of_vertex, int nfree) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(full.nonZeros()));
  for (int col = 0; col < full.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(full, col); it; ++it) {
      const int i = dof_of_vertex[it.row()], j = dof_of_vertex[it.col()];
      if (i >= 0 && j >= 0) trips.emplace_back(i, j, it.value());
    }
  Eigen::SparseMatrix<double> out(nfree, nfree);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

struct RawSolution {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd vectors;  // free-dof columns, mass-orthonormal
  Eigen::VectorXd residuals;
};

// Shift-inverted block subspace iteration with Rayleigh-Ritz extraction.
RawSolution subspace_iterate(const Eigen::SparseMatrix<double>& stiffness,
                             const Eigen::SparseMatrix<double>& mass, int count,
                             double shift) {
  const int n = static_cast<int>(stiffness.rows());
  if (count > n) throw SolverDivergence("more eigenpairs requested than dofs");
  const int q = std::min(n, std::max(2 * count + 8, 16));

  Eigen::SparseMatrix<double> shifted = stiffness - shift * mass;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
  if (factor.info() != Eigen::Success)
    throw SolverDivergence("factorization of the shifted operator failed");

  std::mt19937_64 rng(0x5eed5eedULL);
  Eigen::MatrixXd basis(n, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < n; ++i)
      basis(i, j) = 2.0 * (static_cast<double>(rng()) / 18446744073709551616.0) - 1.0;

  Eigen::VectorXd lambdas;
  double worst = 1.0;
  for (int iteration = 0; iteration < 400; ++iteration) {
    Eigen::MatrixXd work = factor.solve(mass * basis);

    // Mass-orthonormalize the block.
    Eigen::MatrixXd gram = work.transpose() * (mass * work);
    Eigen::LLT<Eigen::MatrixXd> chol(gram);
    if (chol.info() != Eigen::Success) {
      // Re-seed collapsed directions and retry.
      for (int j = 0; j < q; ++j)
        for (int i = 0; i < n; ++i)
          work(i, j) += 1e-12 * (2.0 * (static_cast<double>(rng()) /
                                        18446744073709551616.0) - 1.0);
      gram = work.transpose() * (mass * work);
      chol.compute(gram);
      if (chol.info() != Eigen::Success)
        throw SolverDivergence("subspace collapsed during iteration");
    }
    // W <- W L^{-T} so that W^T M W = I.
    work = chol.matrixL().solve(work.transpose()).transpose();

    // Rayleigh-Ritz on the orthonormal block.
    Eigen::MatrixXd projected = work.transpose() * (stiffness * work);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected);
    basis = work * ritz.eigenvectors();
    lambdas = ritz.eigenvalues();

    worst = 0.0;
    for (int j = 0; j < count; ++j) {
      const Eigen::VectorXd mu = mass * basis.col(j);
      const double res = (stiffness * basis.col(j) - lambdas[j] * mu).norm() / mu.norm();
      worst = std::max(worst, res);
    }
    if (worst <= 1e-9) break;
  }
  if (worst > 1e-8)
    throw SolverDivergence("eigensolver residual above 1e-8 after iteration budget");

  RawSolution sol;
  sol.lambdas = lambdas.head(count);
  sol.vectors = basis.leftCols(count);
  sol.residuals.resize(count);
  for (int j = 0; j < count; ++j) {
    const Eigen::VectorXd mu = mass * basis.col(j);
    sol.residuals[j] = (stiffness * basis.col(j) - sol.lambdas[j] * mu).norm() / mu.norm();
  }
  return sol;
}

// Periodic-spline resampling of boundary nodal data onto the theta grid.
BoundaryScalar resample_trace(const Mesh& mesh, const Eigen::VectorXd& boundary_values,
                              int trace_nodes) {
  PeriodicCubicSpline spline(mesh.boundary_theta, boundary_values.array(), 2.0 * M_PI);
  ArrayXd grid = ArrayXd::LinSpaced(trace_nodes, 0.0,
                                    2.0 * M_PI * (trace_nodes - 1) / trace_nodes);
  return spline(grid);
}

// Variational flux: solve the boundary mass system
//   sum_j B_ij g_j = (K u - lambda M u)_i   for boundary rows i.
Eigen::VectorXd recover_flux(const Mesh& mesh, const FemSystem& sys,
                             const Eigen::VectorXd& nodal, double lambda) {
  const int nb = mesh.boundary_count;
  const ArrayXd seg = boundary_segment_lengths(mesh);

  Eigen::VectorXd residual_b(nb);
  const Eigen::VectorXd residual_full = sys.stiffness * nodal - lambda * (sys.mass * nodal);
  for (int i = 0; i < nb; ++i) residual_b[i] = residual_full[i];

  Eigen::VectorXd lower(nb), diag(nb), upper(nb);
  for (int i = 0; i < nb; ++i) {
    const double prev = seg[(i + nb - 1) % nb];
    const double next = seg[i];
    lower[i] = prev / 6.0;
    diag[i] = (prev + next) / 3.0;
    upper[i] = next / 6.0;
  }
  return cyclic_tridiagonal_solve(lower, diag, upper, residual_b);
}

void fix_sign(EigenPair& pair, const Mesh& mesh, bool first_mode) {
  if (first_mode) {
    // First eigenfunction positive in the interior.
    double extreme = 0.0;
    for (int i = 0; i < mesh.vertex_count(); ++i)
      if (std::abs(pair.nodal[i]) > std::abs(extreme)) extreme = pair.nodal[i];
    if (extreme < 0.0) {
      pair.nodal = -pair.nodal;
      pair.value_trace = -pair.value_trace;
      pair.flux_trace = -pair.flux_trace;
    }
    return;
  }

  // Sign from the first nonzero Fourier coefficient (order a0, a1, b1, ...)
  // of the boundary trace; the flux trace stands in for Dirichlet modes.
  const BoundaryScalar& trace =
      pair.bc == BoundaryCondition::dirichlet ? pair.flux_trace : pair.value_trace;
  const int mmax = std::min<int>(16, static_cast<int>(trace.size()) / 2 - 1);
  FourierCoeffs coeffs = fourier_analyze(trace, mmax);
  const double scale = std::max(trace.abs().maxCoeff(), 1e-300);
  double lead = 0.0;
  for (int m = 0; m <= mmax && lead == 0.0; ++m) {
    if (std::abs(coeffs.cos_coeffs[m]) > 1e-6 * scale) {
      lead = coeffs.cos_coeffs[m];
      break;
    }
    if (m >= 1 && std::abs(coeffs.sin_coeffs[m]) > 1e-6 * scale) {
      lead = coeffs.sin_coeffs[m];
      break;
    }
  }
  if (lead < 0.0) {
    pair.nodal = -pair.nodal;
    pair.value_trace = -pair.value_trace;
    pair.flux_trace = -pair.flux_trace;
  }
}

std::vector<EigenPair> build_pairs(const Mesh& mesh, const FemSystem& sys,
                                   BoundaryCondition bc, const RawSolution& raw,
                                   const std::vector<int>& dof_of_vertex, int trace_nodes) {
  const int n = mesh.vertex_count();
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<size_t>(raw.lambdas.size()));

  for (int j = 0; j < raw.lambdas.size(); ++j) {
    EigenPair pair;
    pair.bc = bc;
    pair.lambda = raw.lambdas[j];
    pair.residual = raw.residuals[j];
    pair.nodal = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < n; ++v)
      if (dof_of_vertex[v] >= 0) pair.nodal[v] = raw.vectors(dof_of_vertex[v], j);

    pair.energy = pair.nodal.dot(sys.stiffness * pair.nodal);

    Eigen::VectorXd boundary_values(mesh.boundary_count);
    for (int i = 0; i < mesh.boundary_count; ++i) boundary_values[i] = pair.nodal[i];
    pair.value_trace = resample_trace(mesh, boundary_values, trace_nodes);

    const Eigen::VectorXd flux_nodes = recover_flux(mesh, sys, pair.nodal, pair.lambda);
    pair.flux_trace = resample_trace(mesh, flux_nodes, trace_nodes);

    fix_sign(pair, mesh, j == 0);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<EigenPair> solve_impl(const Mesh& mesh, BoundaryCondition bc, int count,
                                  int trace_nodes) {
  const FemSystem sys = assemble_p1(mesh);
  const int n = mesh.vertex_count();

  std::vector<int> dof_of_vertex(n, -1);
  int nfree = 0;
  const int first_free = bc == BoundaryCondition::dirichlet ? mesh.boundary_count : 0;
  for (int v = first_free; v < n; ++v) dof_of_vertex[v] = nfree++;
  if (nfree < count) throw SolverDivergence("mesh too coarse for requested mode count");

  Eigen::SparseMatrix<double> k_free = restrict_to(sys.stiffness, dof_of_vertex, nfree);
  Eigen::SparseMatrix<double> m_free = restrict_to(sys.mass, dof_of_vertex, nfree);

  // Dirichlet stiffness is definite; the Neumann one needs a negative shift
  // to clear the zero mode. Scale the shift like the spectrum, 1/area.
  const double shift =
      bc == BoundaryCondition::dirichlet ? 0.0 : -2.0 * M_PI / mesh_area(mesh);

  RawSolution raw = subspace_iterate(k_free, m_free, count, shift);
  return build_pairs(mesh, sys, bc, raw, dof_of_vertex, trace_nodes);
}

}  // namespace

std::vector<EigenPair> solve_eigs(const Mesh& mesh, BoundaryCondition bc, int count,
                                  int trace_nodes) {
  if (count < 1) throw SolverDivergence("count must be >= 1");
  return solve_impl(mesh, bc, count, trace_nodes);
}

std::vector<EigenPair> eig_with_multiplicity(const Mesh& mesh, BoundaryCondition bc,
                                             double target, double tol, int trace_nodes) {
  if (target < 0.0) throw EmptyCluster("target must be >= 0");

  int count = 8;
  for (;;) {
    std::vector<EigenPair> all = solve_impl(mesh, bc, count, trace_nodes);
    if (all.back().lambda > target * (1.0 + tol) + 1.0 || count >= 64) {
      std::vector<EigenPair> cluster;
      for (auto& pair : all)
        if (std::abs(pair.lambda - target) <= tol * std::max(target, 1e-12))
          cluster.push_back(std::move(pair));
      if (cluster.empty()) throw EmptyCluster("no eigenvalue within tolerance of target");
      return cluster;
    }
    count *= 2;
  }
}

}  // namespace shapelab
