#pragma once

// Spectral and periodic-grid utilities shared across the library: FFT-based
// differentiation on the uniform theta grid, Fourier synthesis/analysis of
// real periodic samples, cyclic tridiagonal systems and periodic cubic
// splines (nonuniform knots).

#include <Eigen/Dense>

namespace shapelab {

using Eigen::ArrayXd;

// Scalar samples on the uniform periodic grid theta_i = 2*pi*i/N.
using BoundaryScalar = Eigen::ArrayXd;

// d/dtheta of a real periodic sample vector (exact for band-limited input,
// Nyquist mode mapped to zero).
ArrayXd spectral_derivative(const ArrayXd& values);

// Real Fourier coefficients a_0..a_M, b_0..b_M of periodic samples
// (b_0 is always zero). f(theta) ~ sum a_m cos(m theta) + b_m sin(m theta).
struct FourierCoeffs {
  ArrayXd cos_coeffs;
  ArrayXd sin_coeffs;
};
FourierCoeffs fourier_analyze(const ArrayXd& values, int harmonics_max);
ArrayXd fourier_synthesize(const FourierCoeffs& coeffs, int node_count);

// Solves the cyclic tridiagonal system with sub/main/super diagonals
// (lower[i] multiplies x[i-1], upper[i] multiplies x[i+1], indices mod n).
Eigen::VectorXd cyclic_tridiagonal_solve(const Eigen::VectorXd& lower,
                                         const Eigen::VectorXd& diag,
                                         const Eigen::VectorXd& upper,
                                         const Eigen::VectorXd& rhs);

// Periodic cubic spline through (knots[i], values[i]); knots strictly
// increasing in [0, period). Evaluation wraps modulo the period.
class PeriodicCubicSpline {
 public:
  PeriodicCubicSpline(const ArrayXd& knots, const ArrayXd& values, double period);

  double operator()(double x) const;
  ArrayXd operator()(const ArrayXd& x) const;

 private:
  ArrayXd knots_;
  ArrayXd values_;
  ArrayXd second_derivs_;
  double period_;
};

}  // namespace shapelab
