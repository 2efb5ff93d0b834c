#include <doctest.h>

#include <cmath>
#include <set>

#include "shapelab/errors.hpp"
#include "shapelab/mesh.hpp"

using namespace shapelab;

TEST_CASE("unit disk mesh at h = 0.1") {
  const Mesh mesh = triangulate(make_circle(1.0), 0.1);

  SUBCASE("triangle count near area / equilateral-triangle area") {
    const double expected = M_PI / (std::sqrt(3.0) / 4.0 * 0.01);
    CHECK(mesh.triangle_count() > 0.6 * expected);
    CHECK(mesh.triangle_count() < 1.4 * expected);
  }
  SUBCASE("quality and orientation") {
    CHECK(mesh_min_angle(mesh) >= 15.0 * M_PI / 180.0);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const Vec2 a = mesh.vertices.col(mesh.triangles(0, t));
      const Vec2 b = mesh.vertices.col(mesh.triangles(1, t));
      const Vec2 c = mesh.vertices.col(mesh.triangles(2, t));
      CHECK((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x() > 0.0);
    }
  }
  SUBCASE("boundary structure") {
    CHECK(mesh.boundary_count >= static_cast<int>(2 * M_PI / 0.1));
    for (int i = 0; i + 1 < mesh.boundary_count; ++i)
      CHECK(mesh.boundary_theta[i] < mesh.boundary_theta[i + 1]);
    for (int i = 0; i < mesh.boundary_count; ++i)
      CHECK(mesh.vertices.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("mesh area approximates the disk area") {
    CHECK(mesh_area(mesh) == doctest::Approx(M_PI).epsilon(0.01));
  }
  SUBCASE("deterministic regeneration") {
    const Mesh again = triangulate(make_circle(1.0), 0.1);
    REQUIRE(again.vertex_count() == mesh.vertex_count());
    REQUIRE(again.triangle_count() == mesh.triangle_count());
    CHECK((again.vertices - mesh.vertices).cwiseAbs().maxCoeff() == 0.0);
    CHECK((again.triangles - mesh.triangles).cwiseAbs().maxCoeff() == 0);
  }
}

TEST_CASE("ellipse mesh") {
  const Mesh mesh = triangulate(make_ellipse(2.0, 1.0), 0.1);
  // perimeter of the 2:1 ellipse is about 9.688
  CHECK(mesh.boundary_count >= 96);
  CHECK(mesh_min_angle(mesh) >= 15.0 * M_PI / 180.0);
  CHECK(mesh_area(mesh) == doctest::Approx(2 * M_PI).epsilon(0.01));
}

TEST_CASE("mesh size preconditions") {
  const double diameter = 2.0;
  CHECK_THROWS_AS(triangulate(make_circle(1.0), diameter), MeshFailure);
  CHECK_THROWS_AS(triangulate(make_circle(1.0), diameter / 4.0), MeshFailure);
  CHECK_THROWS_AS(triangulate(make_circle(1.0), 0.0), MeshFailure);
}

TEST_CASE("boundary segments are short enough") {
  const Mesh mesh = triangulate(make_circle(1.0), 0.07);
  const ArrayXd seg = boundary_segment_lengths(mesh);
  CHECK(seg.maxCoeff() <= 0.07);
}

TEST_CASE("morphing a disk mesh onto a nearby curve") {
  const Mesh base = triangulate(make_circle(1.0), 0.1);
  const FourierCurve target = make_ellipse(1.02, 1.0 / 1.02);
  const Mesh morphed = morph_to_curve(base, target);

  CHECK(morphed.triangle_count() == base.triangle_count());
  for (int i = 0; i < morphed.boundary_count; ++i) {
    const Vec2 expected = target.position(morphed.boundary_theta[i]);
    CHECK((morphed.vertices.col(i) - expected).norm() < 1e-12);
  }
  CHECK(mesh_area(morphed) == doctest::Approx(M_PI).epsilon(0.02));
  CHECK(mesh_min_angle(morphed) > 10.0 * M_PI / 180.0);
}

TEST_CASE("kidney domain meshes despite the concavity") {
  const Mesh mesh = triangulate(make_kidney(), 0.1);
  CHECK(mesh_min_angle(mesh) >= 15.0 * M_PI / 180.0);
  CHECK(mesh_area(mesh) == doctest::Approx(enclosed_area(make_kidney())).epsilon(0.02));
}
