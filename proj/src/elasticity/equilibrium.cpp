#include "kornlab/elasticity/equilibrium.hpp"

#include "kornlab/fem/constraints.hpp"

#include <Eigen/Cholesky>

#include <cstdio>
#include <sstream>

namespace kornlab::elasticity {

using geometry::Mesh;

EquilibriumSolution solve_equilibrium(const Mesh& mesh, const Vector& load) {
  const int n = mesh.dim();
  const fem::Forms f = fem::assemble(mesh);
  if (load.size() != f.num_dofs()) {
    throw ValidationError("load has " + std::to_string(load.size()) + " entries, expected " + std::to_string(f.num_dofs()));
  }
  if (!load.allFinite()) throw ValidationError("load contains non-finite values");

  const auto basis = rigid::rigid_basis(n);
  Matrix R(f.num_dofs(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) R.col(k) = fem::interpolate(mesh, basis[k]);
  const Matrix MR = f.M * R;
  const Matrix G = R.transpose() * MR;
  const Vector coeff = G.ldlt().solve(MR.transpose() * load);

  EquilibriumSolution sol{Vector(), load, load - R * coeff, rigid::RigidMotion::constant(Vec::Zero(n))};
  for (std::size_t k = 0; k < basis.size(); ++k) sol.removed_rigid = sol.removed_rigid + basis[k] * coeff(k);
  sol.removed_norm = std::sqrt(std::max(0.0, coeff.dot(G * coeff)));

  const auto cs = fem::build_constraints(mesh, f, {fem::ConstraintKind::OrthoRigid});
  const Matrix& Z = cs.null_basis;
  const Vector rhs = Z.transpose() * (f.M * sol.projected_load);
  Matrix K = Z.transpose() * (f.A_sym * Z);
  K = 0.5 * (K + K.transpose()).eval();
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) throw NumericalError("elasticity system is not positive definite on the rigid complement");
  Vector y = llt.solve(rhs);
  // one step of iterative refinement
  y += llt.solve(rhs - K * y);
  sol.displacement = Z * y;

  const double rn = rhs.norm();
  sol.residual = rn > 0 ? (K * y - rhs).norm() / rn : (K * y).norm();
  sol.energy = fem::quad(f.A_sym, sol.displacement);
  const double vnorm = std::sqrt(fem::quad(f.M, sol.displacement));
  if (vnorm > 0) {
    for (Eigen::Index k = 0; k < R.cols(); ++k) {
      const double rk = std::sqrt(G(k, k));
      sol.rigid_orthogonality = std::max(sol.rigid_orthogonality, std::abs(MR.col(k).dot(sol.displacement)) / (vnorm * rk));
    }
  }
  if (!(sol.residual <= 1e-8)) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "elasticity residual contract missed: %.3g", sol.residual);
    throw NumericalError(buf);
  }
  return sol;
}

std::string displacement_table(const Mesh& mesh, const Vector& displacement) {
  const int n = mesh.dim();
  if (displacement.size() != n * static_cast<Eigen::Index>(mesh.num_vertices())) {
    throw ValidationError("displacement size does not match the mesh");
  }
  std::ostringstream os;
  os << "vertex";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",u" << i;
  os << '\n';
  char buf[40];
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    os << v;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", mesh.vertex(v)(i));
      os << buf;
    }
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", displacement(static_cast<Eigen::Index>(v) * n + i));
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace kornlab::elasticity
