#pragma once

#include "kornlab/fem/constraints.hpp"
#include "kornlab/geometry/mesh.hpp"
#include "kornlab/spectra/eigensolver.hpp"

namespace kornlab::spectra {

// Each estimator turns one inequality into an extremal Rayleigh quotient on
// a constrained P1 space and reports the derived constant.  Discrete values
// are lower bounds of the continuous constants where the quotient is
// minimized over a subspace.

struct EstimatorOptions {
  double kernel_tol = 1e-8;  // SVD threshold for K and admissible constants
  EigOptions eig;
  // Apply the deflating orthogonality rows (ORTHO_K, ORTHO_CONST or
  // ORTHO_RIGID, depending on the estimator).  Off only for demonstrating
  // what they remove.
  bool deflate = true;
  // Inf-sup only: use ‖v‖²_{H¹} = ‖∇v‖² + ‖v‖² for the velocity norm.
  bool full_norm = false;
};

/// ‖∇v‖ <= c ‖sym∇v‖ on BC-admissible fields with ∇v ⊥ K (and ⊥ admissible
/// constants, which lie in the kernel of both forms).  λ = min quotient
/// ‖sym∇v‖²/‖∇v‖², constant = λ^(-1/2).
SpectralResult korn_first_constant(const geometry::Mesh& mesh, const EstimatorOptions& options = {});

/// No boundary conditions; ∇v ⊥ 𝔰𝔬 and v ⊥ constants.
SpectralResult korn_nobc_constant(const geometry::Mesh& mesh, const EstimatorOptions& options = {});

/// λ = max ‖∇v‖² / (‖sym∇v‖² + ‖v‖²) on the full space, c₂ = √λ.  The sum
/// form ‖∇v‖ <= c(‖sym∇v‖ + ‖v‖) then holds with c = c₂ (extra
/// "sum_form_bound").
SpectralResult korn_second_constant(const geometry::Mesh& mesh, const EstimatorOptions& options = {});

/// ‖v‖ <= c ‖∇v‖ on BC-admissible fields orthogonal to admissible
/// constants.  Solved as the largest eigenvalue μ of (M, A_grad) so that the
/// gradient form is the denominator: without deflation of an admissible
/// constant this throws NumericalError "denominator singular".
/// λ = 1/μ = min ‖∇v‖²/‖v‖², constant = √μ.
SpectralResult poincare_mixed_constant(const geometry::Mesh& mesh, const EstimatorOptions& options = {});

/// ‖v‖ <= c ‖sym∇v‖ on v ⊥_M ℛ.  λ = min ‖sym∇v‖²/‖v‖², constant = λ^(-1/2).
SpectralResult poincare_elasticity_constant(const geometry::Mesh& mesh, const EstimatorOptions& options = {});

/// Discrete inf-sup constant of the MINI pair with homogeneous Dirichlet
/// velocities and mean-zero pressures: λ = min eigenvalue of
/// (B A⁻¹ Bᵀ, M_p), constant = √λ.  Extras report the bound √N.
SpectralResult infsup_constant(const geometry::Mesh& mesh, const EstimatorOptions& options = {});

/// Reduction to the constrained space, eigensolve, and lift back to nodal
/// coordinates (result.lifted = Z x).
SpectralResult solve_constrained(const SparseMatrix& numerator, const SparseMatrix& denominator,
                                 const fem::ConstraintSet& cs, Which which, const EigOptions& options = {});

}  // namespace kornlab::spectra
