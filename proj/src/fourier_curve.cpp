#include "shapelab/fourier_curve.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shapelab/errors.hpp"
#include "shapelab/geometry.hpp"

namespace shapelab {

using nlohmann::json;

FourierCurve::FourierCurve(Eigen::Matrix2Xd cos_coeffs, Eigen::Matrix2Xd sin_coeffs)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  if (cos_.cols() != sin_.cols() || cos_.cols() < 1)
    throw Error("curve coefficient blocks must have equal size >= 1");
  sin_.col(0).setZero();
}

Vec2 FourierCurve::position(double theta) const {
  Vec2 p = cos_.col(0);
  for (int m = 1; m <= harmonics_max(); ++m)
    p += cos_.col(m) * std::cos(m * theta) + sin_.col(m) * std::sin(m * theta);
  return p;
}

Vec2 FourierCurve::derivative(double theta) const {
  Vec2 p = Vec2::Zero();
  for (int m = 1; m <= harmonics_max(); ++m)
    p += m * (-cos_.col(m) * std::sin(m * theta) + sin_.col(m) * std::cos(m * theta));
  return p;
}

Vec2 FourierCurve::second_derivative(double theta) const {
  Vec2 p = Vec2::Zero();
  for (int m = 1; m <= harmonics_max(); ++m)
    p -= m * m * (cos_.col(m) * std::cos(m * theta) + sin_.col(m) * std::sin(m * theta));
  return p;
}

Eigen::Matrix2Xd FourierCurve::sample(int node_count) const {
  Eigen::Matrix2Xd pts(2, node_count);
  for (int i = 0; i < node_count; ++i)
    pts.col(i) = position(2.0 * M_PI * i / node_count);
  return pts;
}

FourierCurve make_circle(double radius, const Vec2& center) {
  Eigen::Matrix2Xd c = Eigen::Matrix2Xd::Zero(2, 2);
  Eigen::Matrix2Xd s = Eigen::Matrix2Xd::Zero(2, 2);
  c.col(0) = center;
  c(0, 1) = radius;
  s(1, 1) = radius;
  return FourierCurve(c, s);
}

FourierCurve make_ellipse(double a, double b, const Vec2& center) {
  Eigen::Matrix2Xd c = Eigen::Matrix2Xd::Zero(2, 2);
  Eigen::Matrix2Xd s = Eigen::Matrix2Xd::Zero(2, 2);
  c.col(0) = center;
  c(0, 1) = a;
  s(1, 1) = b;
  return FourierCurve(c, s);
}

FourierCurve make_kidney() {
  // Expanding the trigonometric products:
  //   x = 0.4 + 1.325 cos t + 0.4 cos 2t + 0.325 cos 3t
  //   y = 0.675 sin t + 0.325 sin 3t
  Eigen::Matrix2Xd c = Eigen::Matrix2Xd::Zero(2, 4);
  Eigen::Matrix2Xd s = Eigen::Matrix2Xd::Zero(2, 4);
  c(0, 0) = 0.4;
  c(0, 1) = 1.325;
  c(0, 2) = 0.4;
  c(0, 3) = 0.325;
  s(1, 1) = 0.675;
  s(1, 3) = 0.325;
  return FourierCurve(c, s);
}

FourierCurve curve_from_json(const std::string& text) {
  json doc = json::parse(text);
  const int mmax = doc.at("harmonics_max").get<int>();
  auto parse_block = [&](const char* key) {
    const auto& arr = doc.at(key);
    if (static_cast<int>(arr.size()) != mmax + 1)
      throw ConfigError(std::string(key) + " block must have harmonics_max+1 entries");
    Eigen::Matrix2Xd block(2, mmax + 1);
    for (int m = 0; m <= mmax; ++m) {
      block(0, m) = arr.at(m).at(0).get<double>();
      block(1, m) = arr.at(m).at(1).get<double>();
    }
    return block;
  };
  Eigen::Matrix2Xd cos_block = parse_block("cos");
  Eigen::Matrix2Xd sin_block = parse_block("sin");
  if (sin_block.col(0).norm() != 0.0)
    throw ConfigError("sin entry 0 must be [0,0]");
  return FourierCurve(cos_block, sin_block);
}

std::string curve_to_json(const FourierCurve& curve) {
  json doc;
  doc["harmonics_max"] = curve.harmonics_max();
  json cos_arr = json::array(), sin_arr = json::array();
  for (int m = 0; m <= curve.harmonics_max(); ++m) {
    cos_arr.push_back({curve.cos_coeffs()(0, m), curve.cos_coeffs()(1, m)});
    sin_arr.push_back({curve.sin_coeffs()(0, m), curve.sin_coeffs()(1, m)});
  }
  doc["cos"] = cos_arr;
  doc["sin"] = sin_arr;
  return doc.dump(2);
}

FourierCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return curve_from_json(buf.str());
}

void save_curve(const FourierCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write curve file: " + path);
  out << curve_to_json(curve) << "\n";
}

void validate_curve(const FourierCurve& curve, int node_count) {
  double min_speed = std::numeric_limits<double>::max();
  for (int i = 0; i < node_count; ++i)
    min_speed = std::min(min_speed, curve.derivative(2.0 * M_PI * i / node_count).norm());
  if (min_speed < 1e-10)
    throw ImmersionViolation("curve speed below 1e-10 at a sample node");

  const Eigen::Matrix2Xd pts = curve.sample(node_count);
  if (polyline_self_intersects(pts))
    throw SelfIntersection("sampled polyline self-intersects");
  if (polygon_signed_area(pts) <= 0.0)
    throw SelfIntersection("curve is not counterclockwise (signed area <= 0)");
}

CurveFrame frame(const FourierCurve& curve, int node_count) {
  if (node_count < 4 * (curve.harmonics_max() + 1))
    throw Error("node count must be at least 4 (M+1)");
  validate_curve(curve, node_count);

  CurveFrame f;
  f.theta = ArrayXd::LinSpaced(node_count, 0.0, 2.0 * M_PI * (node_count - 1) / node_count);
  f.position.resize(2, node_count);
  f.tangent.resize(2, node_count);
  f.normal.resize(2, node_count);
  f.speed.resize(node_count);
  f.curvature.resize(node_count);
  f.ds.resize(node_count);

  const double dtheta = 2.0 * M_PI / node_count;
  for (int i = 0; i < node_count; ++i) {
    const double t = f.theta[i];
    const Vec2 p = curve.position(t);
    const Vec2 d1 = curve.derivative(t);
    const Vec2 d2 = curve.second_derivative(t);
    const double speed = d1.norm();
    if (speed < 1e-10) throw ImmersionViolation("curve speed below 1e-10");
    f.position.col(i) = p;
    f.speed[i] = speed;
    f.tangent.col(i) = d1 / speed;
    // outward normal of a counterclockwise curve: tangent rotated by -90 deg
    f.normal.col(i) = Vec2(d1.y(), -d1.x()) / speed;
    const double cross = d1.x() * d2.y() - d1.y() * d2.x();
    f.curvature[i] = cross / (speed * speed * speed);
    f.ds[i] = speed * dtheta;
  }
  f.length = f.ds.sum();
  return f;
}

double boundary_integral(const CurveFrame& frame, const ArrayXd& values) {
  if (values.size() != frame.ds.size())
    throw GridMismatch("boundary integrand does not match the frame grid");
  return (values * frame.ds).sum();
}

ArrayXd arc_length_derivative(const CurveFrame& frame, const ArrayXd& values) {
  if (values.size() != frame.speed.size())
    throw GridMismatch("arc-length derivative input does not match the frame grid");
  return spectral_derivative(values) / frame.speed;
}

namespace {

// Integrates f(theta) dtheta over [0, 2 pi) by the trapezoid rule; exact for
// band-limited integrands when sampled densely enough.
template <typename F>
double periodic_integral(const F& f, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += f(2.0 * M_PI * i / n);
  return acc * 2.0 * M_PI / n;
}

int quadrature_nodes(const FourierCurve& curve) {
  return std::max(256, 8 * (curve.harmonics_max() + 1));
}

}  // namespace

double enclosed_area(const FourierCurve& curve) {
  const int n = quadrature_nodes(curve);
  return 0.5 * periodic_integral(
                   [&](double t) {
                     const Vec2 p = curve.position(t);
                     const Vec2 d = curve.derivative(t);
                     return p.x() * d.y() - p.y() * d.x();
                   },
                   n);
}

Vec2 area_centroid(const FourierCurve& curve) {
  const int n = quadrature_nodes(curve);
  const double area = enclosed_area(curve);
  const double mx = periodic_integral(
      [&](double t) {
        const Vec2 p = curve.position(t);
        return 0.5 * p.x() * p.x() * curve.derivative(t).y();
      },
      n);
  const double my = periodic_integral(
      [&](double t) {
        const Vec2 p = curve.position(t);
        return -0.5 * p.y() * p.y() * curve.derivative(t).x();
      },
      n);
  return Vec2(mx / area, my / area);
}

FourierCurve rescale_to_area(const FourierCurve& curve, double target) {
  if (!(target > 0.0)) throw NonPositiveTarget("target area must be positive");
  const double area = enclosed_area(curve);
  const double scale = std::sqrt(target / area);
  const Vec2 centroid = area_centroid(curve);

  Eigen::Matrix2Xd cos_block = scale * curve.cos_coeffs();
  Eigen::Matrix2Xd sin_block = scale * curve.sin_coeffs();
  cos_block.col(0) = centroid + scale * (curve.cos_coeffs().col(0) - centroid);
  return FourierCurve(std::move(cos_block), std::move(sin_block));
}

FourierCurve project_to_harmonics(const Eigen::Matrix2Xd& points, int harmonics_max) {
  const int n = static_cast<int>(points.cols());
  FourierCoeffs x = fourier_analyze(points.row(0).transpose().array(), harmonics_max);
  FourierCoeffs y = fourier_analyze(points.row(1).transpose().array(), harmonics_max);
  Eigen::Matrix2Xd cos_block(2, harmonics_max + 1), sin_block(2, harmonics_max + 1);
  cos_block.row(0) = x.cos_coeffs.transpose();
  cos_block.row(1) = y.cos_coeffs.transpose();
  sin_block.row(0) = x.sin_coeffs.transpose();
  sin_block.row(1) = y.sin_coeffs.transpose();
  (void)n;
  return FourierCurve(std::move(cos_block), std::move(sin_block));
}

FourierCurve normal_perturbation(const FourierCurve& curve, const CurveFrame& frame,
                                 const ArrayXd& amount) {
  if (amount.size() != frame.theta.size())
    throw GridMismatch("perturbation field does not match the frame grid");
  Eigen::Matrix2Xd pts = frame.position;
  for (int i = 0; i < frame.node_count(); ++i)
    pts.col(i) += amount[i] * frame.normal.col(i);
  return project_to_harmonics(pts, curve.harmonics_max());
}

}  // namespace shapelab
