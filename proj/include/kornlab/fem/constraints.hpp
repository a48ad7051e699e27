#pragma once

#include "kornlab/fem/forms.hpp"
#include "kornlab/rigid/kernel.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kornlab::fem {

enum class ConstraintKind { BcTangential, BcNormal, OrthoK, OrthoSo, OrthoRigid, OrthoConst };

std::string to_string(ConstraintKind kind);

/// Everything the ORTHO rows may need beyond the mesh and its forms.
struct ConstraintData {
  std::optional<rigid::KernelReport> kernel;  // required for OrthoK
  // Constants for OrthoConst.  nullopt means every unit vector e_i.
  std::optional<std::vector<Vec>> constants;
};

// Linear constraints on P1 vector DOFs with an orthonormal basis of their
// joint null space.
//
// Boundary rows touch the DOFs of a single vertex, so their null space is
// computed vertex by vertex; the dense ORTHO rows are then eliminated inside
// that space.  Invariants: null_basis has orthonormal columns annihilating
// every row, and rank + null_basis.cols() == dofs.
struct ConstraintSet {
  int dofs = 0;
  SparseMatrix rows;  // num_rows × dofs
  std::vector<ConstraintKind> kinds;
  Matrix null_basis;
  int rank = 0;

  std::size_t num_rows() const { return kinds.size(); }
  std::size_t count(ConstraintKind kind) const;
};

/// Which sets of rows to include.  BcTangential and BcNormal are requested
/// together or separately; each boundary PointConstraint becomes one row.
ConstraintSet build_constraints(const geometry::Mesh& mesh, const Forms& forms, const std::set<ConstraintKind>& which,
                                const ConstraintData& data = {});

/// Both boundary-condition kinds.
std::set<ConstraintKind> bc_kinds();

enum class FormKind { Mass, Grad, Sym };

const SparseMatrix& form(const Forms& forms, FormKind kind);

/// (Zᵀ A Z, Zᵀ B Z), symmetrized.  Throws ValidationError "empty constrained
/// space" when Z has no columns and NumericalError "denominator singular"
/// when Zᵀ B Z is not numerically positive definite.
std::pair<Matrix, Matrix> reduce(const SparseMatrix& numerator, const SparseMatrix& denominator, const ConstraintSet& cs);
std::pair<Matrix, Matrix> reduce(const Forms& forms, const ConstraintSet& cs, std::pair<FormKind, FormKind> which);

/// Relative threshold for the singular-denominator test.
inline constexpr double kSingularDenominator = 1e-11;

}  // namespace kornlab::fem
