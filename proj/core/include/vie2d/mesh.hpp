#ifndef VIE2D_MESH_HPP
#define VIE2D_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vie2d {

using Eigen::Vector2d;

struct Triangle {
  std::array<int, 3> v;
  int region = 0;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conforming triangular mesh with per-triangle region tags.  Triangles
/// are reordered counter-clockwise on construction; construction throws
/// MeshError on out-of-range indices, degenerate or duplicate triangles,
/// edges shared by more than two triangles, or overlapping neighbours.
/// Immutable afterwards.
class Mesh {
 public:
  Mesh(std::vector<Vector2d> vertices, std::vector<Triangle> triangles);

  int num_vertices() const { return int(vertices_.size()); }
  int num_triangles() const { return int(triangles_.size()); }
  int num_regions() const { return num_regions_; }

  const Vector2d& vertex(int i) const { return vertices_[i]; }
  const Triangle& triangle(int t) const { return triangles_[t]; }
  const std::vector<Vector2d>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  double area(int t) const { return areas_[t]; }
  Vector2d centroid(int t) const { return centroids_[t]; }
  double diameter(int t) const { return diameters_[t]; }

  /// Triangle containing p (barycentric test with tolerance), or -1.
  int locate(const Vector2d& p) const;

  double total_area() const;

 private:
  std::vector<Vector2d> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<double> areas_;
  std::vector<Vector2d> centroids_;
  std::vector<double> diameters_;
  int num_regions_ = 0;

  void validate();
};

// ASCII mesh format: first non-comment line "NV NT NR", then NV lines
// "x y", then NT lines "i j k region" with 0-based indices.  Lines
// starting with '#' are comments.  Parse errors throw MeshError naming
// the offending line number.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_string(const std::string& text);
void write_mesh(const Mesh& mesh, std::ostream& out);
std::string write_mesh_string(const Mesh& mesh);

/// RWG function attached to an interior edge: oriented from the plus
/// triangle into the minus triangle across the shared edge.
struct RwgEdge {
  int index = -1;
  int tri_plus = -1;
  int tri_minus = -1;
  Vector2d ref_vertex_plus;   // vertex of tri_plus opposite the edge
  Vector2d ref_vertex_minus;
  double area_plus = 0.0;
  double area_minus = 0.0;
  Vector2d edge_a, edge_b;    // shared edge endpoints
  double length = 0.0;

  int sign(int tri) const { return tri == tri_plus ? +1 : -1; }
};

/// One RwgEdge per interior edge, ordered by the (min,max) vertex-index
/// pair of the shared edge; the lower triangle id is the plus side.
std::vector<RwgEdge> extract_rwg_edges(const Mesh& mesh);

/// f_n at p: (r - rv+)/(2A+) on the plus triangle, -(r - rv-)/(2A-) on
/// the minus triangle, zero outside the pair.
Vector2d eval_rwg(const RwgEdge& e, const Vector2d& p);

/// Same, with the side known (no point classification).
Vector2d eval_rwg_on(const RwgEdge& e, bool plus_side, const Vector2d& p);

/// 2D divergence: +1/A+ on the plus side, -1/A- on the minus side.
double div_rwg(const RwgEdge& e, bool plus_side);

/// Per-triangle RWG incidence: entry [t][i] is the index into the RWG
/// list of the edge opposite local vertex i, or -1 for boundary edges.
std::vector<std::array<int, 3>> triangle_edge_table(
    const Mesh& mesh, const std::vector<RwgEdge>& edges);

/// Structured layered-disk mesh: concentric rings of near-equilateral
/// triangles, ring boundaries aligned with the layer radii so every
/// triangle lies inside one annulus and carries its region id (0 = core).
/// Refuses h_target > smallest layer thickness.
Mesh build_layered_disk_mesh(std::span<const double> layer_radii,
                             double h_target);

struct MeshStats {
  int n_vertices = 0;
  int n_triangles = 0;
  int n_rwg = 0;
  double mean_edge = 0.0;
  double min_edge = 0.0;
  double max_edge = 0.0;
};

MeshStats mesh_stats(const Mesh& mesh);

}  // namespace vie2d

#endif
