#pragma once

#include "kornlab/core.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kornlab::spectra {

enum class Which { Smallest, Largest };

struct SpectralResult {
  double lambda = 0.0;
  Vector vector;  // reduced coordinates, normalized so that xᵀBx = 1
  double constant = 0.0;
  // ‖Ax − λBx‖ / max(‖Ax‖, |λ|‖Bx‖, 1e-8‖A‖_F‖x‖); the floor only matters
  // for λ ≈ 0, where ‖Ax‖ itself vanishes.
  double residual = 0.0;
  int iterations = 0;
  int size = 0;

  // Filled by the estimators.
  Vector lifted;  // eigenvector as a full nodal field
  std::vector<std::pair<std::string, double>> extras;
};

struct EigOptions {
  double tol = 1e-10;
  int max_iter = 2000;
  int block = 8;
  std::uint64_t seed = 20240601;
};

/// Residual contract: results with residual above this are failures.
inline constexpr double kResidualContract = 1e-8;

/// Extremal eigenpair of A x = λ B x for dense symmetric A and SPD B.
///
/// Block inverse iteration with a shift σ that is always certified to lie
/// below the wanted end of the spectrum: every shift is accepted only if
/// A − σB admits a Cholesky factorization.  Ritz pairs come from a
/// B-orthonormal basis of the iterated block.  LARGEST is SMALLEST of −A.
/// Throws NumericalError if B is not positive definite or the residual
/// contract cannot be met.
SpectralResult extremal_eig(const Matrix& A, const Matrix& B, Which which, const EigOptions& options = {});

double relative_residual(const Matrix& A, const Matrix& B, double lambda, const Vector& x);

/// Full spectrum of A x = λ B x, ascending, by cyclic Jacobi rotations:
/// first on B to form B^(-1/2), then on B^(-1/2) A B^(-1/2).  Independent
/// of extremal_eig; meant for verification.  n <= 500.
Vector eig_oracle(const Matrix& A, const Matrix& B);

/// Eigenvalues (ascending) and eigenvectors of a symmetric matrix by cyclic
/// Jacobi.
std::pair<Vector, Matrix> jacobi_eigen(Matrix A);

}  // namespace kornlab::spectra
