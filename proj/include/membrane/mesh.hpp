#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace membrane {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Triangle = std::array<std::int32_t, 3>;

// Conforming 2D triangulation with counterclockwise triangles. Immutable
// once constructed; the constructor validates geometry and derives the
// boundary from the edge topology.
class Mesh {
 public:
  // Throws std::invalid_argument on an empty node list, out-of-range
  // indices, a triangle with nonpositive signed area, or an edge shared by
  // more than two triangles.
  Mesh(std::vector<Point> nodes, std::vector<Triangle> triangles);

  std::span<const Point> nodes() const { return nodes_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  // Sorted endpoint set of edges that belong to exactly one triangle.
  std::span<const std::int32_t> boundary_nodes() const { return boundary_nodes_; }
  bool is_boundary(std::int32_t node) const { return boundary_flag_[node] != 0; }

  std::span<const double> areas() const { return areas_; }
  double total_area() const { return total_area_; }
  std::size_t num_edges() const { return num_edges_; }
  std::size_t num_boundary_edges() const { return num_boundary_edges_; }

  // Longest edge length.
  double h() const { return h_; }
  Point centroid(std::size_t t) const;
  // Smallest interior angle over all triangles, in degrees.
  double min_angle_degrees() const;

 private:
  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<double> areas_;
  std::vector<std::int32_t> boundary_nodes_;
  std::vector<std::uint8_t> boundary_flag_;
  double total_area_ = 0.0;
  double h_ = 0.0;
  std::size_t num_edges_ = 0;
  std::size_t num_boundary_edges_ = 0;
};

double signed_area(const Point& a, const Point& b, const Point& c);

// Unit disk from concentric rings: ring k (radius k/refinement) carries 8k
// equally spaced nodes, consecutive rings are stitched by an angular merge.
// 8 refinement^2 triangles, 1 + 4 refinement (refinement + 1) nodes.
Mesh disk_mesh(int refinement);

// nx x ny cells on [0,width] x [0,height], each split along the diagonal
// from its lower-left to its upper-right corner (2 nx ny triangles).
Mesh rect_mesh(int nx, int ny, double width, double height);

// Text format:
//   V F
//   x y b        (V lines, b = 1 on boundary nodes)
//   i j k        (F lines, zero-based, counterclockwise)
// Coordinates are written in shortest round-trip form. The loader checks the
// b flags against the boundary derived from connectivity.
void save_mesh(const Mesh& mesh, std::ostream& out);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh load_mesh(std::istream& in);
Mesh load_mesh(const std::filesystem::path& path);

}  // namespace membrane
