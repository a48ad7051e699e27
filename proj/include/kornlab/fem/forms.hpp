#pragma once

#include "kornlab/geometry/mesh.hpp"
#include "kornlab/rigid/rigid_motion.hpp"

#include <functional>
#include <string>
#include <vector>

namespace kornlab::fem {

// P1 vector fields are stored node-major: dof(vertex, component) =
// vertex·N + component.  Bubble-enriched velocity spaces append one vector
// bubble per cell after the P1 block: N·num_vertices + cell·N + component.
inline int dof(int vertex, int component, int dim) { return vertex * dim + component; }

/// Volume and barycentric gradients (row i = ∇λ_i) of one cell.
struct CellGeometry {
  double volume;
  Matrix grads;  // (N+1) × N
};

/// Throws ValidationError naming the cell when it is degenerate
/// (volume <= 1e-13 · longest_edge^N).
CellGeometry cell_geometry(const geometry::Mesh& mesh, std::size_t cell);

struct Forms {
  int dim = 0;
  std::size_t num_vertices = 0;
  std::size_t num_cells = 0;

  SparseMatrix M;       // ∫ v·w
  SparseMatrix A_grad;  // ∫ ∇v : ∇w
  SparseMatrix A_sym;   // ∫ sym∇v : sym∇w

  // Inf-sup ingredients, present only when assembled with bubbles.  The
  // velocity space is P1 plus one vector bubble per cell.
  bool with_bubbles = false;
  SparseMatrix A_grad_velocity;  // ∫ ∇v : ∇w on the enriched space
  SparseMatrix M_velocity;       // ∫ v·w on the enriched space
  SparseMatrix B_div;            // (pressure, velocity): ∫ q div v
  SparseMatrix M_p;              // scalar P1 mass

  int num_dofs() const { return dim * static_cast<int>(num_vertices); }
  int num_velocity_dofs() const { return dim * static_cast<int>(num_vertices + num_cells); }
};

/// Exact element integration of every form (affine P1, polynomial bubbles).
Forms assemble(const geometry::Mesh& mesh, bool with_bubbles = false);

/// Nodal values of a field.
Vector interpolate(const geometry::Mesh& mesh, const std::function<Vec(const Vec&)>& field);
Vector interpolate(const geometry::Mesh& mesh, const rigid::RigidMotion& r);

/// Piecewise-constant gradients ∇v (entry (i,j) = ∂_i v_j) of a nodal field.
std::vector<Mat> cell_gradients(const geometry::Mesh& mesh, const Vector& nodal);

/// "row col value" lines, 0-based, one nonzero per line.
std::string to_coordinate_text(const SparseMatrix& A);

/// xᵀ A y
double quad(const SparseMatrix& A, const Vector& x, const Vector& y);
inline double quad(const SparseMatrix& A, const Vector& x) { return quad(A, x, x); }

}  // namespace kornlab::fem
