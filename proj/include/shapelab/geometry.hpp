#pragma once

// Polygon predicates and the reflection/symmetry diagnostics: the moving-plane
// cap predicate, Hausdorff symmetry defect and best-fit-circle defect.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "shapelab/fourier_curve.hpp"

namespace shapelab {

// Closed polygons are column lists of vertices; the closing edge is implicit.
double polygon_signed_area(const Eigen::Matrix2Xd& polygon);
bool polyline_self_intersects(const Eigen::Matrix2Xd& polygon);

// Even-odd test; points within `tolerance` of the boundary count as inside.
bool point_in_polygon(const Vec2& point, const Eigen::Matrix2Xd& polygon,
                      double tolerance);

double distance_to_polygon(const Vec2& point, const Eigen::Matrix2Xd& polygon);

// Uniform-grid index over polygon segments for nearest-distance queries.
class SegmentGrid {
 public:
  explicit SegmentGrid(const Eigen::Matrix2Xd& polygon, int cells_per_side = 128);
  double distance(const Vec2& point) const;

 private:
  Eigen::Matrix2Xd polygon_;
  Vec2 origin_;
  double cell_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> buckets_;
};

// Half-space cap {x . e >= level} used by the moving-plane predicate.
struct HalfspaceCap {
  Vec2 direction;  // unit
  double level;
};

struct P0Result {
  bool holds = false;
  std::optional<double> violating_level;  // first level failing containment
};

// Moving-plane predicate: for 64 levels between the lowest support value and 0
// (coordinates centered at the area centroid), the cap above each hyperplane
// reflects into the domain. Equivalent to convexity in direction e.
P0Result p0_predicate(const FourierCurve& curve, const Vec2& direction,
                      int sample_count = 4096, int level_count = 64);

// Hausdorff distance between the curve and its reflection across the
// hyperplane through the area centroid with normal e, over the curve diameter.
double symmetry_defect(const FourierCurve& curve, const Vec2& direction);

struct DiskDefect {
  Vec2 center;
  double radius = 0.0;
  double defect = 0.0;  // max_theta | |c - center| - radius | / radius
};

DiskDefect disk_defect(const FourierCurve& curve);

double curve_diameter(const FourierCurve& curve, int sample_count = 1024);

}  // namespace shapelab
