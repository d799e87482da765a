#include "vie2d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace vie2d {

namespace {

double signed_area(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

}  // namespace

Mesh::Mesh(std::vector<Vector2d> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  validate();
}

void Mesh::validate() {
  const int nv = int(vertices_.size());
  if (triangles_.empty()) throw MeshError("mesh: no triangles");

  areas_.reserve(triangles_.size());
  centroids_.reserve(triangles_.size());
  diameters_.reserve(triangles_.size());

  std::set<std::array<int, 3>> seen;
  int max_region = -1;
  for (size_t t = 0; t < triangles_.size(); ++t) {
    Triangle& tri = triangles_[t];
    for (int i : tri.v)
      if (i < 0 || i >= nv)
        throw MeshError("mesh: triangle " + std::to_string(t) +
                        " has vertex index out of range");
    if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2])
      throw MeshError("mesh: triangle " + std::to_string(t) +
                      " repeats a vertex");
    if (tri.region < 0)
      throw MeshError("mesh: triangle " + std::to_string(t) +
                      " has negative region id");
    std::array<int, 3> key = tri.v;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second)
      throw MeshError("mesh: duplicate triangle " + std::to_string(t));

    const Vector2d &a = vertices_[tri.v[0]], &b = vertices_[tri.v[1]],
                   &c = vertices_[tri.v[2]];
    double sa = signed_area(a, b, c);
    if (sa < 0.0) {
      std::swap(tri.v[1], tri.v[2]);
      sa = -sa;
    }
    double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    if (!(sa > 1e-14 * scale * scale))
      throw MeshError("mesh: triangle " + std::to_string(t) + " is degenerate");
    areas_.push_back(sa);
    centroids_.push_back((a + b + c) / 3.0);
    diameters_.push_back(scale);
    max_region = std::max(max_region, tri.region);
  }
  num_regions_ = max_region + 1;

  // Conformity: every edge shared by at most two triangles, and the two
  // opposite vertices of a shared edge must sit on opposite sides of it
  // (rules out overlapping neighbours such as a quad cut by both
  // diagonals without a centre vertex).
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_map;
  for (size_t t = 0; t < triangles_.size(); ++t) {
    const auto& v = triangles_[t].v;
    for (int e = 0; e < 3; ++e) {
      int i = v[(e + 1) % 3], j = v[(e + 2) % 3];
      edge_map[{std::min(i, j), std::max(i, j)}].emplace_back(int(t), v[e]);
    }
  }
  for (const auto& [key, tris] : edge_map) {
    if (tris.size() > 2)
      throw MeshError("mesh: edge shared by more than two triangles");
    if (tris.size() == 2) {
      const Vector2d &a = vertices_[key.first], &b = vertices_[key.second];
      double s0 = signed_area(a, b, vertices_[tris[0].second]);
      double s1 = signed_area(a, b, vertices_[tris[1].second]);
      if (s0 * s1 >= 0.0)
        throw MeshError("mesh: non-conforming edge (neighbouring triangles "
                        "overlap)");
    }
  }
}

int Mesh::locate(const Vector2d& p) const {
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& v = triangles_[t].v;
    const Vector2d &a = vertices_[v[0]], &b = vertices_[v[1]],
                   &c = vertices_[v[2]];
    double tol = -1e-12 * diameters_[t] * diameters_[t];
    if (signed_area(a, b, p) >= tol && signed_area(b, c, p) >= tol &&
        signed_area(c, a, p) >= tol)
      return t;
  }
  return -1;
}

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

namespace {

// Reads the next non-comment, non-blank line; tracks the line number.
bool next_data_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw MeshError("mesh parse error at line " + std::to_string(line_no) +
                  ": " + what);
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_data_line(in, line, line_no))
    throw MeshError("mesh parse error: empty input");
  int nv = 0, nt = 0, nr = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> nv >> nt >> nr)) parse_fail(line_no, "expected 'NV NT NR'");
    if (nv < 3 || nt < 1 || nr < 1)
      parse_fail(line_no, "counts must be positive (NV >= 3, NT >= 1, NR >= 1)");
  }
  std::vector<Vector2d> vertices;
  vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    if (!next_data_line(in, line, line_no))
      parse_fail(line_no + 1, "unexpected end of input reading vertices");
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) parse_fail(line_no, "expected 'x y'");
    vertices.emplace_back(x, y);
  }
  std::vector<Triangle> triangles;
  triangles.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    if (!next_data_line(in, line, line_no))
      parse_fail(line_no + 1, "unexpected end of input reading triangles");
    std::istringstream ss(line);
    Triangle tri;
    if (!(ss >> tri.v[0] >> tri.v[1] >> tri.v[2] >> tri.region))
      parse_fail(line_no, "expected 'i j k region'");
    for (int i : tri.v)
      if (i < 0 || i >= nv)
        parse_fail(line_no, "vertex index " + std::to_string(i) +
                                " out of range [0, " + std::to_string(nv) + ")");
    if (tri.region < 0 || tri.region >= nr)
      parse_fail(line_no, "region id out of range");
    triangles.push_back(tri);
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh read_mesh_string(const std::string& text) {
  std::istringstream ss(text);
  return read_mesh(ss);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' '
      << mesh.num_regions() << '\n';
  char buf[64];
  for (const Vector2d& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x(), v.y());
    out << buf;
  }
  for (const Triangle& t : mesh.triangles())
    out << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.region << '\n';
}

std::string write_mesh_string(const Mesh& mesh) {
  std::ostringstream ss;
  write_mesh(mesh, ss);
  return ss.str();
}

std::vector<RwgEdge> extract_rwg_edges(const Mesh& mesh) {
  // (min,max) vertex pair -> (triangle, opposite vertex) incidences; the
  // map order fixes the deterministic edge numbering.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_map;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangle(t).v;
    for (int e = 0; e < 3; ++e) {
      int i = v[(e + 1) % 3], j = v[(e + 2) % 3];
      edge_map[{std::min(i, j), std::max(i, j)}].emplace_back(t, v[e]);
    }
  }
  std::vector<RwgEdge> out;
  for (const auto& [key, tris] : edge_map) {
    if (tris.size() != 2) continue;
    auto [t0, opp0] = tris[0];
    auto [t1, opp1] = tris[1];
    if (t0 > t1) {
      std::swap(t0, t1);
      std::swap(opp0, opp1);
    }
    RwgEdge e;
    e.index = int(out.size());
    e.tri_plus = t0;
    e.tri_minus = t1;
    e.ref_vertex_plus = mesh.vertex(opp0);
    e.ref_vertex_minus = mesh.vertex(opp1);
    e.area_plus = mesh.area(t0);
    e.area_minus = mesh.area(t1);
    e.edge_a = mesh.vertex(key.first);
    e.edge_b = mesh.vertex(key.second);
    e.length = (e.edge_b - e.edge_a).norm();
    out.push_back(e);
  }
  return out;
}

Vector2d eval_rwg_on(const RwgEdge& e, bool plus_side, const Vector2d& p) {
  if (plus_side) return (p - e.ref_vertex_plus) / (2.0 * e.area_plus);
  return -(p - e.ref_vertex_minus) / (2.0 * e.area_minus);
}

double div_rwg(const RwgEdge& e, bool plus_side) {
  return plus_side ? 1.0 / e.area_plus : -1.0 / e.area_minus;
}

namespace {

bool point_in_support_triangle(const Vector2d& rv, const Vector2d& ea,
                               const Vector2d& eb, const Vector2d& p) {
  double scale = std::max((ea - rv).norm(), (eb - rv).norm());
  double tol = -1e-12 * scale * scale;
  return signed_area(rv, ea, p) >= tol && signed_area(ea, eb, p) >= tol &&
         signed_area(eb, rv, p) >= tol;
}

}  // namespace

Vector2d eval_rwg(const RwgEdge& e, const Vector2d& p) {
  // Triangle orientation around (rv, edge_a, edge_b) may be either way;
  // test both windings for membership.
  auto inside = [&](const Vector2d& rv) {
    return point_in_support_triangle(rv, e.edge_a, e.edge_b, p) ||
           point_in_support_triangle(rv, e.edge_b, e.edge_a, p);
  };
  if (inside(e.ref_vertex_plus)) return eval_rwg_on(e, true, p);
  if (inside(e.ref_vertex_minus)) return eval_rwg_on(e, false, p);
  return Vector2d::Zero();
}

std::vector<std::array<int, 3>> triangle_edge_table(
    const Mesh& mesh, const std::vector<RwgEdge>& edges) {
  // Rebuild the same sorted vertex-pair map that numbered the RWG list,
  // so indices line up with extract_rwg_edges by construction.
  std::map<std::pair<int, int>, int> incidence;
  for (const Triangle& t : mesh.triangles())
    for (int e = 0; e < 3; ++e) {
      int i = t.v[(e + 1) % 3], j = t.v[(e + 2) % 3];
      incidence[{std::min(i, j), std::max(i, j)}]++;
    }
  std::map<std::pair<int, int>, int> index;
  int next = 0;
  for (const auto& [key, count] : incidence)
    if (count == 2) index[key] = next++;
  if (next != int(edges.size()))
    throw MeshError("triangle_edge_table: edge list does not match mesh");

  std::vector<std::array<int, 3>> table(mesh.num_triangles(), {-1, -1, -1});
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangle(t).v;
    for (int i = 0; i < 3; ++i) {
      auto it = index.find({std::min(v[(i + 1) % 3], v[(i + 2) % 3]),
                            std::max(v[(i + 1) % 3], v[(i + 2) % 3])});
      if (it != index.end()) table[t][i] = it->second;
    }
  }
  return table;
}

MeshStats mesh_stats(const Mesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const Triangle& t : mesh.triangles())
    for (int e = 0; e < 3; ++e) {
      int i = t.v[(e + 1) % 3], j = t.v[(e + 2) % 3];
      edges.insert({std::min(i, j), std::max(i, j)});
    }
  MeshStats s;
  s.n_vertices = mesh.num_vertices();
  s.n_triangles = mesh.num_triangles();
  s.n_rwg = int(extract_rwg_edges(mesh).size());
  s.min_edge = std::numeric_limits<double>::infinity();
  for (const auto& [i, j] : edges) {
    double len = (mesh.vertex(i) - mesh.vertex(j)).norm();
    s.mean_edge += len;
    s.min_edge = std::min(s.min_edge, len);
    s.max_edge = std::max(s.max_edge, len);
  }
  s.mean_edge /= double(edges.size());
  return s;
}

}  // namespace vie2d
