#pragma once

// Bivariate polynomial vector fields W: R^2 -> R^2 with closed-form
// directional derivatives D_V W. They supply the ambient extensions required
// by the covariant derivative and the connection identity.

#include <Eigen/Dense>

namespace shapelab {

// Scalar polynomial sum c(i,j) x^i y^j; coefficient matrix is (d+1)x(d+1).
class Polynomial2D {
 public:
  Polynomial2D() : coeffs_(Eigen::MatrixXd::Zero(1, 1)) {}
  explicit Polynomial2D(Eigen::MatrixXd coeffs) : coeffs_(std::move(coeffs)) {}

  double operator()(double x, double y) const {
    double acc = 0.0;
    double xp = 1.0;
    for (Eigen::Index i = 0; i < coeffs_.rows(); ++i) {
      double yp = 1.0;
      for (Eigen::Index j = 0; j < coeffs_.cols(); ++j) {
        acc += coeffs_(i, j) * xp * yp;
        yp *= y;
      }
      xp *= x;
    }
    return acc;
  }

  Polynomial2D dx() const {
    if (coeffs_.rows() == 1) return Polynomial2D();
    Eigen::MatrixXd d(coeffs_.rows() - 1, coeffs_.cols());
    for (Eigen::Index i = 1; i < coeffs_.rows(); ++i) d.row(i - 1) = i * coeffs_.row(i);
    return Polynomial2D(std::move(d));
  }

  Polynomial2D dy() const {
    if (coeffs_.cols() == 1) return Polynomial2D();
    Eigen::MatrixXd d(coeffs_.rows(), coeffs_.cols() - 1);
    for (Eigen::Index j = 1; j < coeffs_.cols(); ++j) d.col(j - 1) = j * coeffs_.col(j);
    return Polynomial2D(std::move(d));
  }

  const Eigen::MatrixXd& coeffs() const { return coeffs_; }

 private:
  Eigen::MatrixXd coeffs_;
};

class AmbientField {
 public:
  AmbientField(Polynomial2D x_component, Polynomial2D y_component)
      : comp_{std::move(x_component), std::move(y_component)},
        grad_{{comp_[0].dx(), comp_[0].dy()}, {comp_[1].dx(), comp_[1].dy()}} {}

  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const {
    return {comp_[0](p.x(), p.y()), comp_[1](p.x(), p.y())};
  }

  Eigen::Matrix2d jacobian(const Eigen::Vector2d& p) const {
    Eigen::Matrix2d j;
    j << grad_[0][0](p.x(), p.y()), grad_[0][1](p.x(), p.y()),
         grad_[1][0](p.x(), p.y()), grad_[1][1](p.x(), p.y());
    return j;
  }

  // D_V W (p) = J_W(p) V(p) for W = *this.
  Eigen::Vector2d directional_derivative(const AmbientField& v,
                                         const Eigen::Vector2d& p) const {
    return jacobian(p) * v(p);
  }

 private:
  Polynomial2D comp_[2];
  Polynomial2D grad_[2][2];
};

// Lie bracket [V, W](p) = D_V W - D_W V evaluated pointwise.
inline Eigen::Vector2d field_bracket(const AmbientField& v, const AmbientField& w,
                                     const Eigen::Vector2d& p) {
  return w.directional_derivative(v, p) - v.directional_derivative(w, p);
}

// The linear field x -> A x + b.
inline AmbientField make_linear_field(const Eigen::Matrix2d& a, const Eigen::Vector2d& b) {
  Eigen::MatrixXd cx = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd cy = Eigen::MatrixXd::Zero(2, 2);
  cx(0, 0) = b.x();
  cx(1, 0) = a(0, 0);
  cx(0, 1) = a(0, 1);
  cy(0, 0) = b.y();
  cy(1, 0) = a(1, 0);
  cy(0, 1) = a(1, 1);
  return AmbientField(Polynomial2D(cx), Polynomial2D(cy));
}

// The radial field V(x) = x.
inline AmbientField make_position_field() {
  return make_linear_field(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
}

}  // namespace shapelab
