#include "stokeslab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace stokeslab {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double dist(Vec2 a, Vec2 b) { return norm(a - b); }
double Rect::diameter() const { return std::hypot(width(), height()); }

double Mesh::cell_area(int cell) const {
  Vec2 a = vertex(cell, 0), b = vertex(cell, 1), c = vertex(cell, 2);
  return 0.5 * cross(b - a, c - a);
}

double Mesh::cell_diameter(int cell) const {
  Vec2 a = vertex(cell, 0), b = vertex(cell, 1), c = vertex(cell, 2);
  return std::max({dist(a, b), dist(b, c), dist(c, a)});
}

double Mesh::cell_inradius(int cell) const {
  Vec2 a = vertex(cell, 0), b = vertex(cell, 1), c = vertex(cell, 2);
  double per = dist(a, b) + dist(b, c) + dist(c, a);
  return 2.0 * cell_area(cell) / per;
}

Vec2 Mesh::barycenter(int cell) const {
  Vec2 a = vertex(cell, 0), b = vertex(cell, 1), c = vertex(cell, 2);
  return (1.0 / 3.0) * (a + b + c);
}

double Mesh::h() const {
  double hmax = 0.0;
  for (int t = 0; t < nc(); ++t) hmax = std::max(hmax, cell_diameter(t));
  return hmax;
}

std::array<double, 3> Mesh::barycentric(int cell, Vec2 p) const {
  Vec2 a = vertex(cell, 0), b = vertex(cell, 1), c = vertex(cell, 2);
  double a2 = cross(b - a, c - a);
  return {cross(b - p, c - p) / a2, cross(c - p, a - p) / a2,
          cross(a - p, b - p) / a2};
}

bool Mesh::cell_contains(int cell, Vec2 p) const {
  auto l = barycentric(cell, p);
  double tol = 1e-12;
  return l[0] >= -tol && l[1] >= -tol && l[2] >= -tol;
}

void Mesh::finalize() {
  const int ncells = nc();
  for (int t = 0; t < ncells; ++t) {
    if (cell_area(t) <= 0.0)
      throw std::runtime_error("mesh cell " + std::to_string(t) +
                               " is degenerate or clockwise");
  }

  edges.clear();
  cell_edges.assign(ncells, {-1, -1, -1});
  std::map<std::pair<int, int>, int> edge_ids;
  for (int t = 0; t < ncells; ++t) {
    for (int k = 0; k < 3; ++k) {
      int va = cells[t][(k + 1) % 3], vb = cells[t][(k + 2) % 3];
      auto key = std::minmax(va, vb);
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) {
        Edge e;
        e.a = key.first;
        e.b = key.second;
        e.cell[0] = t;
        it = edge_ids.emplace(key, ne()).first;
        edges.push_back(e);
      } else {
        Edge& e = edges[it->second];
        if (e.cell[1] != -1)
          throw std::runtime_error("edge shared by more than two cells");
        e.cell[1] = t;
      }
      cell_edges[t][k] = it->second;
    }
  }
  vert_boundary.assign(nv(), false);
  for (Edge& e : edges) {
    e.boundary = (e.cell[1] == -1);
    if (e.boundary) vert_boundary[e.a] = vert_boundary[e.b] = true;
  }

  vert_cells.assign(nv(), {});
  for (int t = 0; t < ncells; ++t)
    for (int k = 0; k < 3; ++k) vert_cells[cells[t][k]].push_back(t);

  int nside = std::max(1, (int)std::lround(std::sqrt((double)ncells / 2.0)));
  grid_.nx = grid_.ny = nside;
  grid_.bins.assign((size_t)nside * nside, {});
  double w = domain.width(), hgt = domain.height();
  for (int t = 0; t < ncells; ++t) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int k = 0; k < 3; ++k) {
      Vec2 v = vertex(t, k);
      xmin = std::min(xmin, v.x); xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, v.y); ymax = std::max(ymax, v.y);
    }
    auto bin_of = [&](double v, double lo, double len) {
      int i = (int)std::floor((v - lo) / len * nside);
      return std::clamp(i, 0, nside - 1);
    };
    int i0 = bin_of(xmin, domain.x0, w), i1 = bin_of(xmax, domain.x0, w);
    int j0 = bin_of(ymin, domain.y0, hgt), j1 = bin_of(ymax, domain.y0, hgt);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        grid_.bins[(size_t)j * nside + i].push_back(t);
  }
}

Mesh build_structured_mesh(Pattern pattern, int n, Rect domain) {
  if (n < 1) throw std::invalid_argument("subdivision count must be positive");
  Mesh m;
  m.domain = domain;
  auto push_vert = [&](std::int64_t lx, std::int64_t ly) {
    m.lat.push_back({lx, ly});
    m.verts.push_back({domain.x0 + domain.width() * (double)lx / (double)m.den,
                       domain.y0 + domain.height() * (double)ly / (double)m.den});
  };

  if (pattern == Pattern::RightDiagonal) {
    m.den = n;
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) push_vert(i, j);
    auto vid = [&](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        int v00 = vid(i, j), v10 = vid(i + 1, j);
        int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        m.cells.push_back({v00, v10, v11});  // below the diagonal
        m.cells.push_back({v00, v11, v01});  // above the diagonal
      }
  } else {
    m.den = 2 * (std::int64_t)n;
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) push_vert(2 * i, 2 * j);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) push_vert(2 * i + 1, 2 * j + 1);
    auto vid = [&](int i, int j) { return j * (n + 1) + i; };
    auto cid = [&](int i, int j) { return (n + 1) * (n + 1) + j * n + i; };
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        int v00 = vid(i, j), v10 = vid(i + 1, j);
        int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        int c = cid(i, j);
        m.cells.push_back({v00, v10, c});  // south
        m.cells.push_back({v10, v11, c});  // east
        m.cells.push_back({v11, v01, c});  // north
        m.cells.push_back({v01, v00, c});  // west
      }
  }
  m.finalize();
  return m;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.domain = mesh.domain;
  fine.verts = mesh.verts;
  bool lattice = mesh.den > 0;
  if (lattice) {
    fine.den = 2 * mesh.den;
    fine.lat.reserve(mesh.nv());
    for (auto& l : mesh.lat) fine.lat.push_back({2 * l[0], 2 * l[1]});
  }
  // one new vertex per parent edge
  std::vector<int> edge_mid(mesh.ne());
  for (int e = 0; e < mesh.ne(); ++e) {
    const Edge& ed = mesh.edges[e];
    edge_mid[e] = fine.nv();
    if (lattice) {
      fine.lat.push_back({fine.lat[ed.a][0] / 2 + fine.lat[ed.b][0] / 2,
                          fine.lat[ed.a][1] / 2 + fine.lat[ed.b][1] / 2});
      auto l = fine.lat.back();
      fine.verts.push_back(
          {fine.domain.x0 + fine.domain.width() * (double)l[0] / (double)fine.den,
           fine.domain.y0 + fine.domain.height() * (double)l[1] / (double)fine.den});
    } else {
      fine.verts.push_back(0.5 * (mesh.verts[ed.a] + mesh.verts[ed.b]));
    }
  }
  for (int t = 0; t < mesh.nc(); ++t) {
    int v0 = mesh.cells[t][0], v1 = mesh.cells[t][1], v2 = mesh.cells[t][2];
    int m12 = edge_mid[mesh.cell_edges[t][0]];
    int m20 = edge_mid[mesh.cell_edges[t][1]];
    int m01 = edge_mid[mesh.cell_edges[t][2]];
    fine.cells.push_back({v0, m01, m20});
    fine.cells.push_back({m01, v1, m12});
    fine.cells.push_back({m20, m12, v2});
    fine.cells.push_back({m01, m12, m20});
  }
  fine.finalize();
  return fine;
}

std::vector<int> star_cells(const Mesh& mesh, int cell) {
  std::vector<int> out;
  for (int k = 0; k < 3; ++k)
    for (int t : mesh.vert_cells[mesh.cells[cell][k]]) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int interior_edge_count(const Mesh& mesh, int cell) {
  int count = 0;
  for (int k = 0; k < 3; ++k)
    if (!mesh.edges[mesh.cell_edges[cell][k]].boundary) ++count;
  return count;
}

bool th_mesh_ok(const Mesh& mesh) {
  for (int t = 0; t < mesh.nc(); ++t)
    if (interior_edge_count(mesh, t) < 2) return false;
  return true;
}

int locate_point(const Mesh& mesh, Vec2 p) {
  const Rect& d = mesh.domain;
  double tol = 1e-12 * std::max(d.width(), d.height());
  if (p.x < d.x0 - tol || p.x > d.x1 + tol || p.y < d.y0 - tol ||
      p.y > d.y1 + tol)
    throw std::out_of_range("locate_point: point outside the domain");
  p.x = std::clamp(p.x, d.x0, d.x1);
  p.y = std::clamp(p.y, d.y0, d.y1);
  int nside = mesh.grid_.nx;
  int i = std::clamp((int)std::floor((p.x - d.x0) / d.width() * nside), 0,
                     nside - 1);
  int j = std::clamp((int)std::floor((p.y - d.y0) / d.height() * nside), 0,
                     nside - 1);
  int best = -1;
  for (int t : mesh.grid_.bins[(size_t)j * nside + i])
    if (mesh.cell_contains(t, p) && (best == -1 || t < best)) best = t;
  if (best != -1) return best;
  // roundoff near bin borders: fall back to a full scan before giving up
  for (int t = 0; t < mesh.nc(); ++t)
    if (mesh.cell_contains(t, p)) return t;
  throw std::out_of_range("locate_point: point not contained in any cell");
}

ShapeMetrics shape_metrics(const Mesh& mesh) {
  double hmin = 1e300, hmax = 0.0, rmin = 1e300;
  for (int t = 0; t < mesh.nc(); ++t) {
    double ht = mesh.cell_diameter(t);
    hmin = std::min(hmin, ht);
    hmax = std::max(hmax, ht);
    rmin = std::min(rmin, mesh.cell_inradius(t));
  }
  return {hmax / hmin, hmax / rmin};
}

std::string pattern_name(Pattern pattern) {
  return pattern == Pattern::RightDiagonal ? "right" : "criss-cross";
}

Pattern parse_pattern(const std::string& name) {
  if (name == "right") return Pattern::RightDiagonal;
  if (name == "criss-cross") return Pattern::CrissCross;
  throw std::invalid_argument("unknown mesh pattern: " + name);
}

void write_mesh_text(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "d=2 nv=" << mesh.nv() << " nc=" << mesh.nc() << "\n";
  char buf[80];
  for (const Vec2& v : mesh.verts) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x, v.y);
    out << buf;
  }
  for (const auto& c : mesh.cells)
    out << c[0] << " " << c[1] << " " << c[2] << "\n";
}

Mesh read_mesh_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  std::getline(in, header);
  int nv = -1, nc = -1;
  if (std::sscanf(header.c_str(), "d=2 nv=%d nc=%d", &nv, &nc) != 2 ||
      nv < 3 || nc < 1)
    throw std::runtime_error(path + ": bad mesh header '" + header + "'");
  Mesh m;
  m.verts.resize(nv);
  for (int i = 0; i < nv; ++i)
    if (!(in >> m.verts[i].x >> m.verts[i].y))
      throw std::runtime_error(path + ": truncated vertex list");
  m.cells.resize(nc);
  for (int t = 0; t < nc; ++t) {
    auto& c = m.cells[t];
    if (!(in >> c[0] >> c[1] >> c[2]))
      throw std::runtime_error(path + ": truncated cell list");
    for (int k = 0; k < 3; ++k)
      if (c[k] < 0 || c[k] >= nv)
        throw std::runtime_error(path + ": cell vertex index out of range");
  }
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const Vec2& v : m.verts) {
    x0 = std::min(x0, v.x); x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y); y1 = std::max(y1, v.y);
  }
  m.domain = {x0, y0, x1, y1};
  m.finalize();
  return m;
}

}  // namespace stokeslab
