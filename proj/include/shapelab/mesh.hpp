#pragma once

// Triangulation of curve interiors: boundary polyline at arc spacing <= h,
// hexagonal interior lattice, Delaunay triangulation (Bowyer-Watson) with
// Laplacian smoothing, and harmonic mesh morphing onto nearby curves.

#include <Eigen/Dense>
#include <vector>

#include "shapelab/fourier_curve.hpp"

namespace shapelab {

struct Mesh {
  Eigen::Matrix2Xd vertices;     // boundary vertices first, in increasing theta
  Eigen::Matrix3Xi triangles;    // counterclockwise vertex triples
  int boundary_count = 0;        // vertices 0 .. boundary_count-1 lie on the curve
  ArrayXd boundary_theta;        // curve parameter of each boundary vertex
  double target_h = 0.0;

  int vertex_count() const { return static_cast<int>(vertices.cols()); }
  int triangle_count() const { return static_cast<int>(triangles.cols()); }
};

// Requires 0 < h < diameter/4; throws MeshFailure when the 15-degree minimum
// angle cannot be met or a boundary segment is lost.
Mesh triangulate(const FourierCurve& curve, double h);

// Same connectivity, boundary vertices re-evaluated on the target curve at the
// stored parameters, interior vertices following a harmonic extension of the
// boundary displacement. Throws MeshFailure if an element inverts.
Mesh morph_to_curve(const Mesh& base, const FourierCurve& target);

double mesh_min_angle(const Mesh& mesh);
double mesh_area(const Mesh& mesh);

// Lengths of the boundary polyline segments (segment i joins boundary vertex i
// and i+1 mod nb).
ArrayXd boundary_segment_lengths(const Mesh& mesh);

}  // namespace shapelab
