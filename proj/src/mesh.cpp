#include "shapelab/mesh.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <vector>

#include "shapelab/errors.hpp"
#include "shapelab/geometry.hpp"

namespace shapelab {

namespace {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// > 0 iff d lies strictly inside the circumcircle of the ccw triangle (a,b,c).
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
         ad * (bdx * cdy - bdy * cdx);
}

class Delaunay {
 public:
  explicit Delaunay(const Eigen::Matrix2Xd& points) : points_(points) {
    const int n = static_cast<int>(points.cols());
    const Vec2 lo = points.rowwise().minCoeff();
    const Vec2 hi = points.rowwise().maxCoeff();
    const Vec2 mid = 0.5 * (lo + hi);
    const double span = std::max((hi - lo).maxCoeff(), 1e-12) * 64.0;

    pts_.resize(2, n + 3);
    pts_.leftCols(n) = points;
    pts_.col(n) = mid + Vec2(-span, -span);
    pts_.col(n + 1) = mid + Vec2(span, -span);
    pts_.col(n + 2) = mid + Vec2(0.0, span);

    tris_.push_back({{n, n + 1, n + 2}, {-1, -1, -1}, true});
    for (int i = 0; i < n; ++i) insert(i);
  }

  // Triangles with all vertices among the real points, ccw.
  std::vector<std::array<int, 3>> real_triangles(int real_count) const {
    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= real_count || t.v[1] >= real_count || t.v[2] >= real_count) continue;
      out.push_back({t.v[0], t.v[1], t.v[2]});
    }
    return out;
  }

 private:
  struct Tri {
    int v[3];
    int nbr[3];  // neighbor across the edge opposite v[i]
    bool alive;
  };

  const Eigen::Matrix2Xd& points_;
  Eigen::Matrix2Xd pts_;
  std::vector<Tri> tris_;
  int last_alive_ = 0;

  int locate(const Vec2& p) const {
    int current = last_alive_;
    if (current < 0 || current >= static_cast<int>(tris_.size()) || !tris_[current].alive) {
      current = -1;
      for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i)
        if (tris_[i].alive) {
          current = i;
          break;
        }
    }
    int steps = 0;
    const int max_steps = static_cast<int>(tris_.size()) * 4 + 64;
    while (steps++ < max_steps) {
      const Tri& t = tris_[current];
      int move_to = -1;
      for (int e = 0; e < 3; ++e) {
        const Vec2 a = pts_.col(t.v[(e + 1) % 3]);
        const Vec2 b = pts_.col(t.v[(e + 2) % 3]);
        if (orient2d(a, b, p) < 0.0) {
          move_to = t.nbr[e];
          break;
        }
      }
      if (move_to == -1) return current;
      current = move_to;
      if (current < 0) break;
    }
    // Degenerate walk; fall back to scanning.
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      if (!tris_[i].alive) continue;
      const Tri& t = tris_[i];
      bool inside = true;
      for (int e = 0; e < 3 && inside; ++e)
        inside = orient2d(pts_.col(t.v[(e + 1) % 3]), pts_.col(t.v[(e + 2) % 3]), p) >= 0.0;
      if (inside) return i;
    }
    throw MeshFailure("delaunay point location failed");
  }

  void insert(int pi) {
    const Vec2 p = pts_.col(pi);
    const int seed = locate(p);

    // Grow the cavity of triangles whose circumcircle contains p.
    std::vector<int> cavity;
    std::vector<int> stack{seed};
    std::vector<char> in_cavity(tris_.size(), 0);
    in_cavity[seed] = 1;
    while (!stack.empty()) {
      const int ti = stack.back();
      stack.pop_back();
      cavity.push_back(ti);
      for (int e = 0; e < 3; ++e) {
        const int nb = tris_[ti].nbr[e];
        if (nb < 0 || in_cavity[nb]) continue;
        const Tri& t = tris_[nb];
        if (incircle(pts_.col(t.v[0]), pts_.col(t.v[1]), pts_.col(t.v[2]), p) > 0.0) {
          in_cavity[nb] = 1;
          stack.push_back(nb);
        }
      }
    }

    // Boundary edges of the cavity, oriented ccw around it.
    struct Edge {
      int a, b, outer;
    };
    std::vector<Edge> boundary;
    for (int ti : cavity) {
      const Tri& t = tris_[ti];
      for (int e = 0; e < 3; ++e) {
        const int nb = t.nbr[e];
        if (nb >= 0 && in_cavity[nb]) continue;
        boundary.push_back({t.v[(e + 1) % 3], t.v[(e + 2) % 3], nb});
      }
    }
    for (int ti : cavity) tris_[ti].alive = false;

    // One new triangle (p, a, b) per boundary edge; link via endpoint maps.
    std::unordered_map<int, int> tri_of_a, tri_of_b;
    std::vector<int> created;
    created.reserve(boundary.size());
    for (const Edge& e : boundary) {
      Tri t;
      t.v[0] = pi;
      t.v[1] = e.a;
      t.v[2] = e.b;
      t.nbr[0] = e.outer;
      t.nbr[1] = -1;
      t.nbr[2] = -1;
      const int idx = static_cast<int>(tris_.size());
      tris_.push_back(t);
      if (e.outer >= 0) {
        Tri& o = tris_[e.outer];
        for (int k = 0; k < 3; ++k) {
          const int oa = o.v[(k + 1) % 3], ob = o.v[(k + 2) % 3];
          if ((oa == e.a && ob == e.b) || (oa == e.b && ob == e.a)) o.nbr[k] = idx;
        }
      }
      tri_of_a[e.a] = idx;
      tri_of_b[e.b] = idx;
      created.push_back(idx);
    }
    for (int idx : created) {
      Tri& t = tris_[idx];
      t.nbr[1] = tri_of_a.at(t.v[2]);  // across v[1]=a: edge (b, p)
      t.nbr[2] = tri_of_b.at(t.v[1]);  // across v[2]=b: edge (p, a)
    }
    last_alive_ = created.empty() ? last_alive_ : created.front();
  }
};

struct PointSet {
  Eigen::Matrix2Xd points;  // boundary first
  int boundary_count = 0;
  ArrayXd boundary_theta;
};

// Boundary vertices at near-uniform arc length spacing <= h.
PointSet boundary_points(const FourierCurve& curve, double h) {
  const int fine = 8192;
  ArrayXd arc(fine + 1);
  arc[0] = 0.0;
  for (int i = 0; i < fine; ++i) {
    const double t = 2.0 * M_PI * (i + 0.5) / fine;
    arc[i + 1] = arc[i] + curve.derivative(t).norm() * 2.0 * M_PI / fine;
  }
  const double length = arc[fine];
  const int nb = std::max(8, static_cast<int>(std::ceil(length / h)));

  PointSet set;
  set.boundary_count = nb;
  set.boundary_theta.resize(nb);
  set.points.resize(2, nb);
  int cursor = 0;
  for (int k = 0; k < nb; ++k) {
    const double target = length * k / nb;
    while (cursor < fine && arc[cursor + 1] < target) ++cursor;
    const double seg = arc[cursor + 1] - arc[cursor];
    const double frac = seg > 0 ? (target - arc[cursor]) / seg : 0.0;
    const double theta = 2.0 * M_PI * (cursor + frac) / fine;
    set.boundary_theta[k] = theta;
    set.points.col(k) = curve.position(theta);
  }
  return set;
}

double hash_jitter(int i, int j, int salt) {
  unsigned long long x = 0x9e3779b97f4a7c15ull * (i + 1) ^ 0xc2b2ae3d27d4eb4full * (j + 7) ^
                         0x165667b19e3779f9ull * (salt + 3);
  x ^= x >> 31;
  x *= 0xd6e8feb86659fd93ull;
  x ^= x >> 27;
  return (static_cast<double>(x % 2000003ull) / 2000003.0 - 0.5);
}

void append_lattice(PointSet& set, const FourierCurve& curve, double spacing,
                    double clearance, double offset_frac) {
  const Eigen::Matrix2Xd polygon = set.points.leftCols(set.boundary_count);
  const SegmentGrid grid(polygon);
  const Vec2 lo = polygon.rowwise().minCoeff();
  const Vec2 hi = polygon.rowwise().maxCoeff();

  std::vector<Vec2> interior;

  // Structured first layer: one point inward of each boundary segment
  // midpoint, giving a near-equilateral boundary strip. Points that would
  // collide with the far side of a thin or concave region are dropped.
  const int nb = set.boundary_count;
  const double depth = spacing * std::sqrt(3.0) / 2.0;
  for (int i = 0; i < nb; ++i) {
    const Vec2 a = polygon.col(i);
    const Vec2 b = polygon.col((i + 1) % nb);
    const Vec2 edge = b - a;
    const Vec2 inward = Vec2(-edge.y(), edge.x()).normalized();  // ccw boundary
    const Vec2 p = 0.5 * (a + b) + depth * inward;
    if (!point_in_polygon(p, polygon, 0.0)) continue;
    if (grid.distance(p) < 0.8 * depth) continue;
    interior.push_back(p);
  }

  const double lattice_clearance = std::max(clearance + std::sqrt(3.0) / 2.0, 1.25);
  const double row_step = spacing * std::sqrt(3.0) / 2.0;
  const int jmax = static_cast<int>((hi.y() - lo.y()) / row_step) + 2;
  const int imax = static_cast<int>((hi.x() - lo.x()) / spacing) + 2;
  for (int j = 0; j <= jmax; ++j) {
    const double y = lo.y() + (j + offset_frac) * row_step;
    const double x_shift = (j % 2 == 0) ? 0.0 : 0.5 * spacing;
    for (int i = 0; i <= imax; ++i) {
      Vec2 p(lo.x() + i * spacing + x_shift, y);
      p.x() += 1e-4 * spacing * hash_jitter(i, j, 0);
      p.y() += 1e-4 * spacing * hash_jitter(i, j, 1);
      if (!point_in_polygon(p, polygon, 0.0)) continue;
      if (grid.distance(p) < lattice_clearance * spacing) continue;
      interior.push_back(p);
    }
  }
  (void)curve;

  set.points.conservativeResize(2, nb + static_cast<int>(interior.size()));
  for (size_t k = 0; k < interior.size(); ++k)
    set.points.col(nb + static_cast<int>(k)) = interior[k];
}

Mesh finish_mesh(const PointSet& set, const FourierCurve& curve, double h,
                 int smoothing_sweeps) {
  const int n = static_cast<int>(set.points.cols());
  const int nb = set.boundary_count;
  const Eigen::Matrix2Xd polygon = set.points.leftCols(nb);

  Eigen::Matrix2Xd pts = set.points;
  std::vector<std::array<int, 3>> kept;
  for (int sweep = 0; sweep <= smoothing_sweeps; ++sweep) {
    Delaunay dt(pts);
    auto tris = dt.real_triangles(n);

    kept.clear();
    for (const auto& t : tris) {
      const Vec2 centroid = (pts.col(t[0]) + pts.col(t[1]) + pts.col(t[2])) / 3.0;
      if (point_in_polygon(centroid, polygon, 0.0)) kept.push_back(t);
    }
    if (sweep == smoothing_sweeps) break;

    // Laplacian smoothing of the interior vertices.
    Eigen::Matrix2Xd acc = Eigen::Matrix2Xd::Zero(2, n);
    Eigen::VectorXd deg = Eigen::VectorXd::Zero(n);
    for (const auto& t : kept)
      for (int e = 0; e < 3; ++e) {
        const int a = t[e], b = t[(e + 1) % 3];
        acc.col(a) += pts.col(b);
        acc.col(b) += pts.col(a);
        deg[a] += 1.0;
        deg[b] += 1.0;
      }
    for (int i = nb; i < n; ++i)
      if (deg[i] > 0) pts.col(i) = acc.col(i) / deg[i];
  }

  Mesh mesh;
  mesh.vertices = pts;
  mesh.boundary_count = nb;
  mesh.boundary_theta = set.boundary_theta;
  mesh.target_h = h;
  mesh.triangles.resize(3, static_cast<int>(kept.size()));
  for (size_t k = 0; k < kept.size(); ++k) {
    auto t = kept[k];
    if (orient2d(pts.col(t[0]), pts.col(t[1]), pts.col(t[2])) < 0.0) std::swap(t[1], t[2]);
    mesh.triangles.col(static_cast<int>(k)) = Eigen::Vector3i(t[0], t[1], t[2]);
  }
  (void)curve;
  return mesh;
}

bool boundary_edges_present(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> edges;
  for (int t = 0; t < mesh.triangle_count(); ++t)
    for (int e = 0; e < 3; ++e) {
      int a = mesh.triangles(e, t), b = mesh.triangles((e + 1) % 3, t);
      if (a > b) std::swap(a, b);
      edges[{a, b}]++;
    }
  for (int i = 0; i < mesh.boundary_count; ++i) {
    int a = i, b = (i + 1) % mesh.boundary_count;
    if (a > b) std::swap(a, b);
    if (!edges.count({a, b})) return false;
  }
  return true;
}

}  // namespace

double mesh_min_angle(const Mesh& mesh) {
  double worst = M_PI;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const Vec2 a = mesh.vertices.col(mesh.triangles(e, t));
      const Vec2 b = mesh.vertices.col(mesh.triangles((e + 1) % 3, t));
      const Vec2 c = mesh.vertices.col(mesh.triangles((e + 2) % 3, t));
      const Vec2 u = b - a, v = c - a;
      const double cosine = u.dot(v) / (u.norm() * v.norm());
      worst = std::min(worst, std::acos(std::clamp(cosine, -1.0, 1.0)));
    }
  }
  return worst;
}

double mesh_area(const Mesh& mesh) {
  double area = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const Vec2 a = mesh.vertices.col(mesh.triangles(0, t));
    const Vec2 b = mesh.vertices.col(mesh.triangles(1, t));
    const Vec2 c = mesh.vertices.col(mesh.triangles(2, t));
    area += 0.5 * orient2d(a, b, c);
  }
  return area;
}

ArrayXd boundary_segment_lengths(const Mesh& mesh) {
  const int nb = mesh.boundary_count;
  ArrayXd lengths(nb);
  for (int i = 0; i < nb; ++i)
    lengths[i] = (mesh.vertices.col((i + 1) % nb) - mesh.vertices.col(i)).norm();
  return lengths;
}

Mesh triangulate(const FourierCurve& curve, double h) {
  validate_curve(curve);
  const double diameter = curve_diameter(curve);
  if (!(h > 0.0) || h >= diameter / 4.0)
    throw MeshFailure("mesh size must satisfy 0 < h < diameter/4");

  const double min_angle_bound = 15.0 * M_PI / 180.0;

  PointSet base = boundary_points(curve, h);

  // Actual mean boundary spacing drives the lattice pitch.
  double mean_seg = 0.0;
  for (int i = 0; i < base.boundary_count; ++i)
    mean_seg += (base.points.col((i + 1) % base.boundary_count) - base.points.col(i)).norm();
  mean_seg /= base.boundary_count;

  const double clearances[] = {0.62, 0.72, 0.52};
  const double offsets[] = {0.0, 0.33};
  for (double offset : offsets) {
    for (double clearance : clearances) {
      PointSet set = base;
      append_lattice(set, curve, mean_seg, clearance, offset);
      Mesh mesh = finish_mesh(set, curve, h, 2);
      if (mesh.triangle_count() == 0) continue;
      if (mesh_min_angle(mesh) < min_angle_bound) continue;
      if (!boundary_edges_present(mesh)) continue;
      return mesh;
    }
  }
  throw MeshFailure("triangle quality bound (15 deg) unreachable for this curve/h");
}

Mesh morph_to_curve(const Mesh& base, const FourierCurve& target) {
  const int n = base.vertex_count();
  const int nb = base.boundary_count;

  Eigen::Matrix2Xd displacement = Eigen::Matrix2Xd::Zero(2, n);
  for (int i = 0; i < nb; ++i)
    displacement.col(i) = target.position(base.boundary_theta[i]) - base.vertices.col(i);

  // Harmonic extension with the combinatorial graph Laplacian.
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  std::map<std::pair<int, int>, bool> seen;
  for (int t = 0; t < base.triangle_count(); ++t)
    for (int e = 0; e < 3; ++e) {
      int a = base.triangles(e, t), b = base.triangles((e + 1) % 3, t);
      if (a > b) std::swap(a, b);
      if (seen.emplace(std::make_pair(a, b), true).second) {
        trips.emplace_back(a, b, -1.0);
        trips.emplace_back(b, a, -1.0);
        degree[a] += 1.0;
        degree[b] += 1.0;
      }
    }
  for (int i = 0; i < n; ++i) trips.emplace_back(i, i, degree[i]);
  Eigen::SparseMatrix<double> laplacian(n, n);
  laplacian.setFromTriplets(trips.begin(), trips.end());

  const int ni = n - nb;
  if (ni > 0) {
    Eigen::SparseMatrix<double> lap_ii = laplacian.bottomRightCorner(ni, ni);
    Eigen::SparseMatrix<double> lap_ib = laplacian.bottomLeftCorner(ni, nb);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap_ii);
    if (solver.info() != Eigen::Success)
      throw MeshFailure("morph: interior laplacian factorization failed");
    Eigen::MatrixXd rhs = -lap_ib * displacement.leftCols(nb).transpose();
    Eigen::MatrixXd interior = solver.solve(rhs);
    displacement.rightCols(ni) = interior.transpose();
  }

  Mesh morphed = base;
  morphed.vertices += displacement;
  for (int t = 0; t < morphed.triangle_count(); ++t) {
    const Vec2 a = morphed.vertices.col(morphed.triangles(0, t));
    const Vec2 b = morphed.vertices.col(morphed.triangles(1, t));
    const Vec2 c = morphed.vertices.col(morphed.triangles(2, t));
    if (orient2d(a, b, c) <= 0.0)
      throw MeshFailure("morph inverted an element; remesh instead");
  }
  return morphed;
}

}  // namespace shapelab
