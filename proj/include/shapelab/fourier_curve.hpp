#pragma once

// Truncated Fourier parametrizations of embedded closed plane curves and the
// differential geometry sampled on the uniform theta grid. Curves are
// counterclockwise by convention; the outward normal is the tangent rotated
// by -90 degrees.

#include <Eigen/Dense>
#include <string>

#include "shapelab/spectral.hpp"

namespace shapelab {

using Vec2 = Eigen::Vector2d;

class FourierCurve {
 public:
  // Coefficient matrices are 2 x (M+1); column m holds the coefficient of
  // cos(m theta) resp. sin(m theta). Column 0 of the sine block must vanish.
  FourierCurve(Eigen::Matrix2Xd cos_coeffs, Eigen::Matrix2Xd sin_coeffs);

  int harmonics_max() const { return static_cast<int>(cos_.cols()) - 1; }
  const Eigen::Matrix2Xd& cos_coeffs() const { return cos_; }
  const Eigen::Matrix2Xd& sin_coeffs() const { return sin_; }

  Vec2 position(double theta) const;
  Vec2 derivative(double theta) const;
  Vec2 second_derivative(double theta) const;

  // Positions sampled on the uniform grid theta_i = 2 pi i / n.
  Eigen::Matrix2Xd sample(int node_count) const;

 private:
  Eigen::Matrix2Xd cos_;
  Eigen::Matrix2Xd sin_;
};

// Factories for the curves used throughout the test suite.
FourierCurve make_circle(double radius, const Vec2& center = Vec2::Zero());
FourierCurve make_ellipse(double a, double b, const Vec2& center = Vec2::Zero());
// c(theta) = ((1 + 0.65 cos 2t) cos t + 0.8 cos^2 t, (1 + 0.65 cos 2t) sin t).
FourierCurve make_kidney();

// JSON curve file format:
//   {"harmonics_max": M, "cos": [[ax,ay],...], "sin": [[ax,ay],...]}
FourierCurve curve_from_json(const std::string& text);
std::string curve_to_json(const FourierCurve& curve);
FourierCurve load_curve(const std::string& path);
void save_curve(const FourierCurve& curve, const std::string& path);

// Checks immersion (min |c_theta| > 1e-10 over samples) and embeddedness
// (sampled polyline free of self-intersections, positive signed area).
// Throws ImmersionViolation or SelfIntersection.
void validate_curve(const FourierCurve& curve, int node_count = 256);

// Geometry of a curve sampled at N_q uniform parameter nodes.
struct CurveFrame {
  ArrayXd theta;             // N_q
  Eigen::Matrix2Xd position;
  Eigen::Matrix2Xd tangent;  // unit
  Eigen::Matrix2Xd normal;   // outward unit
  ArrayXd speed;             // |c_theta|
  ArrayXd curvature;
  ArrayXd ds;                // quadrature weights speed * 2 pi / N_q
  double length = 0.0;

  int node_count() const { return static_cast<int>(theta.size()); }
};

// Requires N_q >= 4 (M+1) and a valid curve.
CurveFrame frame(const FourierCurve& curve, int node_count);

// Integral over the curve of a grid function (trapezoid with |c_theta|).
double boundary_integral(const CurveFrame& frame, const ArrayXd& values);

// Arc-length derivative D_s = (d/dtheta) / |c_theta| applied spectrally.
ArrayXd arc_length_derivative(const CurveFrame& frame, const ArrayXd& values);

double enclosed_area(const FourierCurve& curve);
Vec2 area_centroid(const FourierCurve& curve);

// Scales the curve about its area centroid so enclosed_area == target.
FourierCurve rescale_to_area(const FourierCurve& curve, double target);

// Band-limits the sampled point set back to a Fourier curve with the given
// number of harmonics. Used to project perturbed curves onto the shape space.
FourierCurve project_to_harmonics(const Eigen::Matrix2Xd& points, int harmonics_max);

// Curve moved along its normal field: theta -> c(theta) + amount(theta) nu(theta),
// then projected back to the curve's harmonic band.
FourierCurve normal_perturbation(const FourierCurve& curve, const CurveFrame& frame,
                                 const ArrayXd& amount);

}  // namespace shapelab
