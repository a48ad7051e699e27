#include "kornlab/spectra/estimators.hpp"

#include "kornlab/rigid/kernel.hpp"

#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>

namespace kornlab::spectra {

using fem::ConstraintData;
using fem::ConstraintKind;
using fem::Forms;
using geometry::Mesh;

namespace {

double inv_sqrt(double lambda) {
  return lambda > 0 ? 1.0 / std::sqrt(lambda) : std::numeric_limits<double>::infinity();
}

}  // namespace

SpectralResult solve_constrained(const SparseMatrix& numerator, const SparseMatrix& denominator,
                                 const fem::ConstraintSet& cs, Which which, const EigOptions& options) {
  const auto [A, B] = fem::reduce(numerator, denominator, cs);
  SpectralResult r = extremal_eig(A, B, which, options);
  r.lifted = cs.null_basis * r.vector;
  return r;
}

SpectralResult korn_first_constant(const Mesh& mesh, const EstimatorOptions& options) {
  const Forms f = fem::assemble(mesh);
  ConstraintData data;
  data.constants = rigid::compute_constant_kernel(mesh, options.kernel_tol);
  auto which = fem::bc_kinds();
  which.insert(ConstraintKind::OrthoConst);
  int kdim = 0;
  if (options.deflate) {
    data.kernel = rigid::compute_kernel_K(mesh, options.kernel_tol);
    kdim = static_cast<int>(data.kernel->gradient_basis.size());
    which.insert(ConstraintKind::OrthoK);
  }
  const auto cs = fem::build_constraints(mesh, f, which, data);
  SpectralResult r = solve_constrained(f.A_sym, f.A_grad, cs, Which::Smallest, options.eig);
  r.constant = inv_sqrt(r.lambda);
  r.extras = {{"kernel_dim", kdim},
              {"admissible_constants", static_cast<double>(data.constants->size())},
              {"constrained_dim", static_cast<double>(cs.null_basis.cols())}};
  return r;
}

SpectralResult korn_nobc_constant(const Mesh& mesh, const EstimatorOptions& options) {
  const Forms f = fem::assemble(mesh);
  std::set<ConstraintKind> which{ConstraintKind::OrthoConst};
  if (options.deflate) which.insert(ConstraintKind::OrthoSo);
  const auto cs = fem::build_constraints(mesh, f, which);
  SpectralResult r = solve_constrained(f.A_sym, f.A_grad, cs, Which::Smallest, options.eig);
  r.constant = inv_sqrt(r.lambda);
  r.extras = {{"constrained_dim", static_cast<double>(cs.null_basis.cols())}};
  return r;
}

SpectralResult korn_second_constant(const Mesh& mesh, const EstimatorOptions& options) {
  const Forms f = fem::assemble(mesh);
  const Matrix A(f.A_grad);
  const Matrix B(f.A_sym + f.M);
  SpectralResult r = extremal_eig(A, B, Which::Largest, options.eig);
  r.lifted = r.vector;
  r.constant = std::sqrt(std::max(r.lambda, 0.0));
  r.extras = {{"sum_form_bound", r.constant}};
  return r;
}

SpectralResult poincare_mixed_constant(const Mesh& mesh, const EstimatorOptions& options) {
  const Forms f = fem::assemble(mesh);
  ConstraintData data;
  data.constants = rigid::compute_constant_kernel(mesh, options.kernel_tol);
  auto which = fem::bc_kinds();
  if (options.deflate) which.insert(ConstraintKind::OrthoConst);
  const auto cs = fem::build_constraints(mesh, f, which, data);
  SpectralResult r = solve_constrained(f.M, f.A_grad, cs, Which::Largest, options.eig);
  const double mu = r.lambda;
  r.lambda = 1.0 / mu;
  r.constant = std::sqrt(mu);
  r.extras = {{"mu_max", mu},
              {"admissible_constants", static_cast<double>(data.constants->size())},
              {"constrained_dim", static_cast<double>(cs.null_basis.cols())}};
  return r;
}

SpectralResult poincare_elasticity_constant(const Mesh& mesh, const EstimatorOptions& options) {
  const Forms f = fem::assemble(mesh);
  std::set<ConstraintKind> which;
  if (options.deflate) which.insert(ConstraintKind::OrthoRigid);
  const auto cs = fem::build_constraints(mesh, f, which);
  SpectralResult r = solve_constrained(f.A_sym, f.M, cs, Which::Smallest, options.eig);
  r.constant = inv_sqrt(r.lambda);
  r.extras = {{"constrained_dim", static_cast<double>(cs.null_basis.cols())}};
  return r;
}

SpectralResult infsup_constant(const Mesh& mesh, const EstimatorOptions& options) {
  const Forms f = fem::assemble(mesh, true);
  const int n = mesh.dim();
  const int nv = static_cast<int>(mesh.num_vertices());
  const int np = nv;

  // Velocity dofs kept: P1 dofs of interior vertices and every bubble.
  std::vector<int> keep;
  for (int v = 0; v < nv; ++v)
    if (!mesh.is_boundary_vertex(v))
      for (int j = 0; j < n; ++j) keep.push_back(fem::dof(v, j, n));
  for (int k = n * nv; k < f.num_velocity_dofs(); ++k) keep.push_back(k);
  std::vector<Eigen::Triplet<double>> pt;
  for (std::size_t k = 0; k < keep.size(); ++k) pt.emplace_back(keep[k], static_cast<int>(k), 1.0);
  SparseMatrix P(f.num_velocity_dofs(), static_cast<Eigen::Index>(keep.size()));
  P.setFromTriplets(pt.begin(), pt.end());

  SparseMatrix Avel = f.A_grad_velocity;
  if (options.full_norm) Avel = Avel + f.M_velocity;
  const SparseMatrix A = P.transpose() * Avel * P;
  const SparseMatrix Bd = f.B_div * P;

  Eigen::SimplicialLLT<SparseMatrix> chol(A);
  if (chol.info() != Eigen::Success) throw NumericalError("velocity form is singular on the Dirichlet space");
  const Matrix X = chol.solve(Matrix(Bd.transpose()));
  Matrix S = Bd * X;
  S = 0.5 * (S + S.transpose()).eval();

  // Mean-zero pressures: orthogonal complement of M_p·1.
  const Vector ones = Vector::Ones(np);
  const Vector m1 = f.M_p * ones;
  const Matrix m1col = m1;
  Eigen::HouseholderQR<Matrix> qr(m1col);
  const Matrix Q = Matrix(qr.householderQ()).rightCols(np - 1);
  if (Q.cols() == 0) throw ValidationError("empty constrained space");
  Matrix Sr = Q.transpose() * S * Q;
  Matrix Mr = Q.transpose() * Matrix(f.M_p) * Q;
  Sr = 0.5 * (Sr + Sr.transpose()).eval();
  Mr = 0.5 * (Mr + Mr.transpose()).eval();

  SpectralResult r = extremal_eig(Sr, Mr, Which::Smallest, options.eig);
  r.lifted = Q * r.vector;
  r.constant = std::sqrt(std::max(r.lambda, 0.0));
  const double bound = std::sqrt(static_cast<double>(n));
  r.extras = {{"upper_bound", bound},
              {"within_bound", r.constant <= bound * (1.0 + 1e-12) ? 1.0 : 0.0},
              {"velocity_dofs", static_cast<double>(keep.size())},
              {"pressure_dofs", static_cast<double>(Q.cols())}};
  return r;
}

}  // namespace kornlab::spectra
