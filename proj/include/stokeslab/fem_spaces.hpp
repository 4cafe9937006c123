#pragma once

#include <array>
#include <string>
#include <vector>

#include "stokeslab/mesh.hpp"

namespace stokeslab {

// velocity/pressure pairs on triangles:
//   Mini       : (P1 + cell bubble)^2 velocity, continuous P1 pressure
//   TaylorHood : P2^2 velocity, continuous P1 pressure
// The cell bubble is normalized to 1 at the barycenter (27 l1 l2 l3).
enum class PairKind { Mini, TaylorHood };

std::string pair_name(PairKind kind);
PairKind parse_pair(const std::string& name);

// scalar-component dof layout; a velocity dof is comp * n_scalar + scalar id
struct DofMap {
  PairKind kind = PairKind::TaylorHood;
  int n_scalar = 0;    // per-component velocity dofs
  int n_pressure = 0;  // = mesh.nv()
  int dofs_per_cell = 0;
  std::vector<bool> scalar_boundary;     // scalar dof sits on the boundary
  std::vector<int> interior_index;       // scalar dof -> interior id or -1
  std::vector<int> interior_scalars;     // interior id -> scalar dof
  int n_interior_scalar = 0;

  int n_velocity() const { return 2 * n_scalar; }
  int n_interior_velocity() const { return 2 * n_interior_scalar; }
  int velocity_dof(int comp, int scalar) const {
    return comp * n_scalar + scalar;
  }
  int interior_velocity_dof(int comp, int scalar) const {
    int i = interior_index[scalar];
    return i < 0 ? -1 : comp * n_interior_scalar + i;
  }
};

DofMap make_space(const Mesh& mesh, PairKind kind);

// global scalar dof of local velocity dof k on a cell; locals 0..2 are the
// vertices, then the bubble (mini) or the edge midpoints opposite each vertex
int cell_scalar_dof(const Mesh& mesh, const DofMap& dofs, int cell, int k);

struct BasisEval {
  int n = 0;
  std::array<double, 6> val{};
  std::array<Vec2, 6> grad{};  // physical gradients
};

BasisEval eval_velocity_basis(const Mesh& mesh, PairKind kind, int cell,
                              const std::array<double, 3>& bary);
BasisEval eval_pressure_basis(const Mesh& mesh, int cell,
                              const std::array<double, 3>& bary);

// int_T of the normalized cell bubble = 27 |T| / 60 (exact)
double bubble_cell_integral(const Mesh& mesh, int cell);

}  // namespace stokeslab
