#pragma once

// Test-side oracles, deliberately independent of the library implementations:
// plain ascending-series Bessel evaluation with bisection root finding, a
// winding-number point-in-polygon test, and the analytic ellipse curvature.

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace oracles {

// Ascending series, no compensation, no large-x branch. Adequate to ~1e-12
// for the small arguments the tests need (x < 8).
inline double series_j(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = 0.0;
  for (int k = 0; k < 80; ++k) {
    sum += term;
    term *= -half * half / ((k + 1.0) * (n + k + 1.0));
  }
  return sum;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((flo <= 0) == (fmid <= 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// j_{0,1} via bisection of the series on [2,3].
inline double root_j01() {
  return bisect([](double x) { return series_j(0, x); }, 2.0, 3.0);
}

// j_{1,1} via bisection of the series on [3,4].
inline double root_j11() {
  return bisect([](double x) { return series_j(1, x); }, 3.0, 4.0);
}

// j'_{1,1}: bisection on a centered difference of series J_1, then Newton
// using the closed-form J_1' = J_0 - J_1/x.
inline double root_jp11() {
  auto dj1_fd = [](double x) {
    const double h = 1e-6;
    return (series_j(1, x + h) - series_j(1, x - h)) / (2 * h);
  };
  double x = bisect(dj1_fd, 1.0, 3.0);
  for (int i = 0; i < 5; ++i) {
    const double f = series_j(0, x) - series_j(1, x) / x;
    const double df = (series_j(0, x + 1e-7) - series_j(1, x + 1e-7) / (x + 1e-7) - f) / 1e-7;
    x -= f / df;
  }
  return x;
}

// Winding-number point-in-polygon (the library uses even-odd crossing).
inline bool winding_inside(const Eigen::Vector2d& p, const Eigen::Matrix2Xd& poly) {
  const int n = static_cast<int>(poly.cols());
  double angle = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d a = poly.col(i) - p;
    const Eigen::Vector2d b = poly.col((i + 1) % n) - p;
    angle += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
  }
  return std::abs(angle) > M_PI;
}

// Curvature of the ellipse (a cos t, b sin t).
inline double ellipse_curvature(double a, double b, double theta) {
  const double s = a * std::sin(theta), c = b * std::cos(theta);
  return a * b / std::pow(s * s + c * c, 1.5);
}

}  // namespace oracles
