#pragma once

#include "kornlab/geometry/mesh.hpp"
#include "kornlab/rigid/rigid_motion.hpp"

#include <string>

namespace kornlab::elasticity {

// Find v ⊥_M ℛ with ⟨sym∇v, sym∇φ⟩ = ⟨f, φ⟩ for every φ ⊥_M ℛ, where the
// load functional is ⟨f, φ⟩ = fᵀ M φ for a nodal load f.  No boundary
// conditions are imposed.
struct EquilibriumSolution {
  Vector displacement;
  Vector load;            // as given
  Vector projected_load;  // f minus its M-orthogonal rigid component
  rigid::RigidMotion removed_rigid;  // that rigid component
  double removed_norm = 0.0;         // its L² norm
  double energy = 0.0;               // ‖sym∇v‖²
  double residual = 0.0;             // relative variational residual
  double rigid_orthogonality = 0.0;  // max_r |⟨v, r⟩_M| / (‖v‖_M ‖r‖_M), 0 for v = 0
};

EquilibriumSolution solve_equilibrium(const geometry::Mesh& mesh, const Vector& load);

/// CSV with header "vertex,x1,..,xN,u1,..,uN", one row per vertex.
std::string displacement_table(const geometry::Mesh& mesh, const Vector& displacement);

}  // namespace kornlab::elasticity
