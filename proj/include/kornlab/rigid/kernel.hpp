#pragma once

#include "kornlab/geometry/mesh.hpp"
#include "kornlab/rigid/rigid_motion.hpp"

#include <vector>

namespace kornlab::rigid {

/// (1/|Ω|) Σ_cells vol · skw(G_cell) for a piecewise-constant gradient.
Mat skw_mean(const geometry::Mesh& mesh, const std::vector<Mat>& cell_gradients);

struct KernelReport {
  /// Rigid motions satisfying every boundary condition (up to tolerance),
  /// orthonormal in the rigid_basis coefficient inner product.
  std::vector<RigidMotion> basis;
  /// Gradients ∇r = Sᵀ of the basis with constants removed, Frobenius
  /// orthonormal.  Spans K.
  std::vector<Mat> gradient_basis;
  /// Singular values of the constraint matrix, descending, padded with
  /// zeros up to the coefficient dimension.
  Vector singular_values;
  /// Weighted constraint residual |C c| of each basis motion.
  std::vector<double> residuals;
  double tolerance = 0.0;
};

/// Weighted boundary constraint matrix over the rigid_basis coefficients:
/// one row per PointConstraint of the mesh.
Matrix rigid_constraint_matrix(const geometry::Mesh& mesh);

/// Kernel of the boundary conditions within ℛ.  Kept directions have
/// singular value <= tol · σ_max (tol alone when C vanishes).
KernelReport compute_kernel_K(const geometry::Mesh& mesh, double tol = 1e-8);

/// Orthonormal basis of the admissible constant fields.
std::vector<Vec> compute_constant_kernel(const geometry::Mesh& mesh, double tol = 1e-8);

struct Axis {
  Vec direction;  // unit σ
  Vec point;      // (1/ω) σ∧b, orthogonal to σ
  double omega = 0.0;
  double pitch = 0.0;  // <σ, b>
  bool valid = false;  // |<σ,b>| <= 1e-10 (|b| + 1)
};

/// Rotation axis of a 3D rigid motion.  Throws for constant motions.
Axis detect_axis(const RigidMotion& r);

struct FacetVerdict {
  int facet = 0;
  geometry::BoundaryLabel label = geometry::BoundaryLabel::Tangential;
  bool pass = false;
  double residual = 0.0;
};

struct MixedReport {
  Axis axis;
  std::vector<FacetVerdict> facets;
  bool all_pass = false;
  int failures = 0;
};

// Γt facet: its plane contains the axis, |n·σ| <= tol and |n·(p − c)| <= tol.
// Γn facet: r is tangential there, max_x |ν(x)·r(x)| / (|r(x)| + tol) <= tol.
MixedReport classify_mixed(const geometry::Mesh& mesh, const RigidMotion& r, double tol = 1e-9);

}  // namespace kornlab::rigid
