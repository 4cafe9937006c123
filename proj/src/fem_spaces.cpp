#include "stokeslab/fem_spaces.hpp"

#include <stdexcept>

namespace stokeslab {

std::string pair_name(PairKind kind) {
  return kind == PairKind::Mini ? "mini" : "th";
}

PairKind parse_pair(const std::string& name) {
  if (name == "mini") return PairKind::Mini;
  if (name == "th" || name == "taylor-hood") return PairKind::TaylorHood;
  throw std::invalid_argument("unknown element pair: " + name);
}

DofMap make_space(const Mesh& mesh, PairKind kind) {
  DofMap d;
  d.kind = kind;
  d.n_pressure = mesh.nv();
  if (kind == PairKind::Mini) {
    d.n_scalar = mesh.nv() + mesh.nc();
    d.dofs_per_cell = 4;
    d.scalar_boundary.assign(d.n_scalar, false);
    for (int v = 0; v < mesh.nv(); ++v)
      d.scalar_boundary[v] = mesh.vert_boundary[v];
  } else {
    d.n_scalar = mesh.nv() + mesh.ne();
    d.dofs_per_cell = 6;
    d.scalar_boundary.assign(d.n_scalar, false);
    for (int v = 0; v < mesh.nv(); ++v)
      d.scalar_boundary[v] = mesh.vert_boundary[v];
    for (int e = 0; e < mesh.ne(); ++e)
      d.scalar_boundary[mesh.nv() + e] = mesh.edges[e].boundary;
  }
  d.interior_index.assign(d.n_scalar, -1);
  for (int s = 0; s < d.n_scalar; ++s)
    if (!d.scalar_boundary[s]) {
      d.interior_index[s] = d.n_interior_scalar++;
      d.interior_scalars.push_back(s);
    }
  return d;
}

int cell_scalar_dof(const Mesh& mesh, const DofMap& dofs, int cell, int k) {
  if (k < 3) return mesh.cells[cell][k];
  if (dofs.kind == PairKind::Mini) return mesh.nv() + cell;
  return mesh.nv() + mesh.cell_edges[cell][k - 3];
}

namespace {

// physical gradients of the barycentric coordinates on a cell
std::array<Vec2, 3> bary_gradients(const Mesh& mesh, int cell) {
  Vec2 p0 = mesh.vertex(cell, 0), p1 = mesh.vertex(cell, 1),
       p2 = mesh.vertex(cell, 2);
  double a2 = cross(p1 - p0, p2 - p0);  // 2 |T|
  auto perp = [](Vec2 v) { return Vec2{-v.y, v.x}; };
  return {(1.0 / a2) * perp(p2 - p1), (1.0 / a2) * perp(p0 - p2),
          (1.0 / a2) * perp(p1 - p0)};
}

}  // namespace

BasisEval eval_velocity_basis(const Mesh& mesh, PairKind kind, int cell,
                              const std::array<double, 3>& l) {
  auto g = bary_gradients(mesh, cell);
  BasisEval e;
  if (kind == PairKind::Mini) {
    e.n = 4;
    for (int k = 0; k < 3; ++k) {
      e.val[k] = l[k];
      e.grad[k] = g[k];
    }
    e.val[3] = 27.0 * l[0] * l[1] * l[2];
    e.grad[3] = 27.0 * (l[1] * l[2] * g[0] + l[0] * l[2] * g[1] +
                        l[0] * l[1] * g[2]);
  } else {
    e.n = 6;
    for (int k = 0; k < 3; ++k) {
      e.val[k] = l[k] * (2.0 * l[k] - 1.0);
      e.grad[k] = (4.0 * l[k] - 1.0) * g[k];
    }
    for (int k = 0; k < 3; ++k) {  // midpoint of the edge opposite vertex k
      int i = (k + 1) % 3, j = (k + 2) % 3;
      e.val[3 + k] = 4.0 * l[i] * l[j];
      e.grad[3 + k] = 4.0 * (l[j] * g[i] + l[i] * g[j]);
    }
  }
  return e;
}

BasisEval eval_pressure_basis(const Mesh& mesh, int cell,
                              const std::array<double, 3>& l) {
  auto g = bary_gradients(mesh, cell);
  BasisEval e;
  e.n = 3;
  for (int k = 0; k < 3; ++k) {
    e.val[k] = l[k];
    e.grad[k] = g[k];
  }
  return e;
}

double bubble_cell_integral(const Mesh& mesh, int cell) {
  return 27.0 * mesh.cell_area(cell) / 60.0;
}

}  // namespace stokeslab
