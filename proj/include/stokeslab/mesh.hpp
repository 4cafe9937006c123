#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokeslab {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);
double dist(Vec2 a, Vec2 b);

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double diameter() const;
};

enum class Pattern { RightDiagonal, CrissCross };

struct Edge {
  int a = -1, b = -1;        // vertex ids, a < b
  int cell[2] = {-1, -1};    // incident cells, cell[1] = -1 on the boundary
  bool boundary = false;
};

// Conforming triangulation of an axis-aligned rectangle. Vertices of meshes
// produced by build_structured_mesh / refine_uniform also carry integer
// lattice coordinates (x = x0 + lx/den * width), so geometric predicates can
// run in exact integer arithmetic; den == 0 means no lattice is available
// (meshes loaded from file).
struct Mesh {
  Rect domain;
  std::int64_t den = 0;
  std::vector<std::array<std::int64_t, 2>> lat;
  std::vector<Vec2> verts;
  std::vector<std::array<int, 3>> cells;  // counterclockwise
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> cell_edges;  // edge opposite local vertex k
  std::vector<bool> vert_boundary;
  std::vector<std::vector<int>> vert_cells;  // cells containing each vertex

  int nv() const { return static_cast<int>(verts.size()); }
  int nc() const { return static_cast<int>(cells.size()); }
  int ne() const { return static_cast<int>(edges.size()); }

  Vec2 vertex(int cell, int k) const { return verts[cells[cell][k]]; }
  double cell_area(int cell) const;
  double cell_diameter(int cell) const;
  double cell_inradius(int cell) const;
  Vec2 barycenter(int cell) const;
  double h() const;  // max cell diameter

  // barycentric coordinates of p with respect to a cell
  std::array<double, 3> barycentric(int cell, Vec2 p) const;
  bool cell_contains(int cell, Vec2 p) const;

  // internal: rebuilds edges, adjacency and the location grid
  void finalize();

 private:
  struct LocGrid {
    int nx = 0, ny = 0;
    std::vector<std::vector<int>> bins;
  };
  LocGrid grid_;
  friend int locate_point(const Mesh&, Vec2);
};

Mesh build_structured_mesh(Pattern pattern, int n, Rect domain = Rect{});
Mesh refine_uniform(const Mesh& mesh);

// cells whose closure intersects the closure of the given cell
std::vector<int> star_cells(const Mesh& mesh, int cell);

int interior_edge_count(const Mesh& mesh, int cell);
bool th_mesh_ok(const Mesh& mesh);  // every cell has >= 2 interior edges

// lowest-index cell whose closure contains p; throws std::out_of_range for
// points outside the domain
int locate_point(const Mesh& mesh, Vec2 p);

struct ShapeMetrics {
  double max_h_over_min_h = 0.0;
  double max_h_over_min_inradius = 0.0;
};
ShapeMetrics shape_metrics(const Mesh& mesh);

std::string pattern_name(Pattern pattern);
Pattern parse_pattern(const std::string& name);

void write_mesh_text(const Mesh& mesh, const std::string& path);
Mesh read_mesh_text(const std::string& path);

}  // namespace stokeslab
