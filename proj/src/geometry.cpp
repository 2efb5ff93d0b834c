#include "shapelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shapelab/errors.hpp"

namespace shapelab {

double polygon_signed_area(const Eigen::Matrix2Xd& polygon) {
  const int n = static_cast<int>(polygon.cols());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& p = polygon.col(i);
    const auto& q = polygon.col((i + 1) % n);
    acc += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * acc;
}

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
  };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

bool polyline_self_intersects(const Eigen::Matrix2Xd& polygon) {
  const int n = static_cast<int>(polygon.cols());
  for (int i = 0; i < n; ++i) {
    const Vec2 a = polygon.col(i);
    const Vec2 b = polygon.col((i + 1) % n);
    const double lo_x = std::min(a.x(), b.x()), hi_x = std::max(a.x(), b.x());
    const double lo_y = std::min(a.y(), b.y()), hi_y = std::max(a.y(), b.y());
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // closing edge is a neighbor
      const Vec2 c = polygon.col(j);
      const Vec2 d = polygon.col((j + 1) % n);
      if (std::max(c.x(), d.x()) < lo_x || std::min(c.x(), d.x()) > hi_x ||
          std::max(c.y(), d.y()) < lo_y || std::min(c.y(), d.y()) > hi_y)
        continue;
      if (segments_intersect(a, b, c, d)) return true;
    }
  }
  return false;
}

bool point_in_polygon(const Vec2& point, const Eigen::Matrix2Xd& polygon,
                      double tolerance) {
  const int n = static_cast<int>(polygon.cols());
  bool inside = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 pi = polygon.col(i);
    const Vec2 pj = polygon.col(j);
    if ((pi.y() > point.y()) != (pj.y() > point.y())) {
      const double x_cross =
          pi.x() + (point.y() - pi.y()) / (pj.y() - pi.y()) * (pj.x() - pi.x());
      if (point.x() < x_cross) inside = !inside;
    }
  }
  if (inside) return true;
  if (tolerance > 0.0 && distance_to_polygon(point, polygon) <= tolerance) return true;
  return false;
}

double distance_to_polygon(const Vec2& point, const Eigen::Matrix2Xd& polygon) {
  const int n = static_cast<int>(polygon.cols());
  double best = std::numeric_limits<double>::max();
  for (int i = 0; i < n; ++i)
    best = std::min(best,
                    point_segment_distance(point, polygon.col(i), polygon.col((i + 1) % n)));
  return best;
}

SegmentGrid::SegmentGrid(const Eigen::Matrix2Xd& polygon, int cells_per_side)
    : polygon_(polygon) {
  const Vec2 lo = polygon.rowwise().minCoeff();
  const Vec2 hi = polygon.rowwise().maxCoeff();
  const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-12});
  cell_ = span / cells_per_side;
  origin_ = lo - Vec2::Constant(0.5 * cell_);
  nx_ = static_cast<int>(std::ceil((hi.x() - origin_.x()) / cell_)) + 1;
  ny_ = static_cast<int>(std::ceil((hi.y() - origin_.y()) / cell_)) + 1;
  buckets_.assign(static_cast<size_t>(nx_) * ny_, {});

  const int n = static_cast<int>(polygon.cols());
  for (int s = 0; s < n; ++s) {
    const Vec2 a = polygon.col(s);
    const Vec2 b = polygon.col((s + 1) % n);
    const int ix0 = static_cast<int>((std::min(a.x(), b.x()) - origin_.x()) / cell_);
    const int ix1 = static_cast<int>((std::max(a.x(), b.x()) - origin_.x()) / cell_);
    const int iy0 = static_cast<int>((std::min(a.y(), b.y()) - origin_.y()) / cell_);
    const int iy1 = static_cast<int>((std::max(a.y(), b.y()) - origin_.y()) / cell_);
    for (int ix = std::max(0, ix0); ix <= std::min(nx_ - 1, ix1); ++ix)
      for (int iy = std::max(0, iy0); iy <= std::min(ny_ - 1, iy1); ++iy)
        buckets_[static_cast<size_t>(iy) * nx_ + ix].push_back(s);
  }
}

double SegmentGrid::distance(const Vec2& point) const {
  const int n = static_cast<int>(polygon_.cols());
  const int cx = std::clamp(static_cast<int>((point.x() - origin_.x()) / cell_), 0, nx_ - 1);
  const int cy = std::clamp(static_cast<int>((point.y() - origin_.y()) / cell_), 0, ny_ - 1);

  double best = std::numeric_limits<double>::max();
  const int max_ring = std::max(nx_, ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    // Once a candidate is found, scanning one extra ring guarantees the
    // true minimum over points whose cell distance could still undercut it.
    if (best < std::numeric_limits<double>::max() &&
        (ring - 1) * cell_ > best)
      break;
    bool any_cell = false;
    for (int ix = cx - ring; ix <= cx + ring; ++ix) {
      for (int iy = cy - ring; iy <= cy + ring; ++iy) {
        if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
        if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) continue;
        any_cell = true;
        for (int s : buckets_[static_cast<size_t>(iy) * nx_ + ix]) {
          best = std::min(best, point_segment_distance(point, polygon_.col(s),
                                                       polygon_.col((s + 1) % n)));
        }
      }
    }
    if (!any_cell && ring > std::max(nx_, ny_)) break;
  }
  if (best == std::numeric_limits<double>::max())
    best = distance_to_polygon(point, polygon_);
  return best;
}

double curve_diameter(const FourierCurve& curve, int sample_count) {
  const Eigen::Matrix2Xd pts = curve.sample(sample_count);
  // widest support width over a direction sweep
  double best = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double angle = M_PI * k / 64;
    const Vec2 d(std::cos(angle), std::sin(angle));
    const Eigen::ArrayXd proj = (d.transpose() * pts).transpose().array();
    best = std::max(best, proj.maxCoeff() - proj.minCoeff());
  }
  return best;
}

P0Result p0_predicate(const FourierCurve& curve, const Vec2& direction,
                      int sample_count, int level_count) {
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw DegenerateDirection("direction must be a unit vector");
  validate_curve(curve);

  const Vec2 centroid = area_centroid(curve);
  Eigen::Matrix2Xd polygon = curve.sample(sample_count);
  polygon.colwise() -= centroid;

  const Vec2 e = direction;
  double support_min = std::numeric_limits<double>::max();
  for (int i = 0; i < sample_count; ++i)
    support_min = std::min(support_min, polygon.col(i).dot(e));

  const double diameter = curve_diameter(curve, 1024);
  const double tolerance = 1e-9 * diameter;
  const SegmentGrid grid(polygon);

  // Moving planes from the support side: for each level the small cap below
  // the hyperplane reflects across it and must land inside the domain.
  P0Result result;
  result.holds = true;
  for (int k = 0; k < level_count; ++k) {
    const double level = support_min + (0.0 - support_min) * k / (level_count - 1);
    for (int i = 0; i < sample_count; ++i) {
      const Vec2 p = polygon.col(i);
      const double height = p.dot(e) - level;
      if (height > 0.0) continue;
      const Vec2 reflected = p - 2.0 * height * e;
      if (!point_in_polygon(reflected, polygon, 0.0) &&
          grid.distance(reflected) > tolerance) {
        result.holds = false;
        result.violating_level = level;
        return result;
      }
    }
  }
  return result;
}

double symmetry_defect(const FourierCurve& curve, const Vec2& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw DegenerateDirection("direction must be a unit vector");

  const Vec2 centroid = area_centroid(curve);
  const Vec2 e = direction;

  // Reflection is an isometric involution, so the one-sided sup over the
  // reflected samples equals the full Hausdorff distance. The reference
  // polyline is sampled much denser to keep chord error below 1e-8.
  const int probe_count = 4096;
  const int dense_count = 32768;
  const Eigen::Matrix2Xd dense = curve.sample(dense_count);
  const SegmentGrid grid(dense, 512);

  double sup = 0.0;
  for (int i = 0; i < probe_count; ++i) {
    const Vec2 p = curve.position(2.0 * M_PI * i / probe_count);
    const Vec2 v = p - centroid;
    const Vec2 reflected = centroid + (v - 2.0 * v.dot(e) * e);
    sup = std::max(sup, grid.distance(reflected));
  }
  return sup / curve_diameter(curve, 1024);
}

DiskDefect disk_defect(const FourierCurve& curve) {
  const int n = 4096;
  const Eigen::Matrix2Xd pts = curve.sample(n);

  // Kasa circle fit: linear least squares for (2a, 2b, c) with
  // x^2 + y^2 = 2 a x + 2 b y + c.
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d row(pts(0, i), pts(1, i), 1.0);
    const double rhs = pts.col(i).squaredNorm();
    ata += row * row.transpose();
    atb += row * rhs;
  }
  const Eigen::Vector3d sol = ata.ldlt().solve(atb);

  DiskDefect fit;
  fit.center = Vec2(0.5 * sol[0], 0.5 * sol[1]);
  fit.radius = std::sqrt(std::max(sol[2] + fit.center.squaredNorm(), 0.0));

  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs((pts.col(i) - fit.center).norm() - fit.radius));
  fit.defect = worst / fit.radius;
  return fit;
}

}  // namespace shapelab
