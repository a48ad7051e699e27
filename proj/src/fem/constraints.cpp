#include "kornlab/fem/constraints.hpp"

#include "kornlab/geometry/domains.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cstdio>

namespace kornlab::fem {

using geometry::BoundaryLabel;
using geometry::Mesh;

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::BcTangential: return "BC_TANGENTIAL";
    case ConstraintKind::BcNormal: return "BC_NORMAL";
    case ConstraintKind::OrthoK: return "ORTHO_K";
    case ConstraintKind::OrthoSo: return "ORTHO_SO";
    case ConstraintKind::OrthoRigid: return "ORTHO_RIGID";
    case ConstraintKind::OrthoConst: return "ORTHO_CONST";
  }
  return "?";
}

std::set<ConstraintKind> bc_kinds() { return {ConstraintKind::BcTangential, ConstraintKind::BcNormal}; }

std::size_t ConstraintSet::count(ConstraintKind kind) const {
  std::size_t n = 0;
  for (auto k : kinds) n += (k == kind);
  return n;
}

namespace {

// Row of ∫ ∇v : G over the mesh for each dof.
Vector gradient_row(const Mesh& mesh, const Mat& G) {
  const int n = mesh.dim();
  Vector row = Vector::Zero(n * static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const auto idx = mesh.cell(c);
    for (int a = 0; a <= n; ++a)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += g.grads(a, i) * G(i, j);
        row(dof(idx[a], j, n)) += g.volume * s;
      }
  }
  return row;
}

}  // namespace

ConstraintSet build_constraints(const Mesh& mesh, const Forms& forms, const std::set<ConstraintKind>& which,
                                const ConstraintData& data) {
  const int n = mesh.dim();
  const int ndof = n * static_cast<int>(mesh.num_vertices());
  if (forms.num_dofs() != ndof) throw ValidationError("forms were assembled on a different mesh");

  ConstraintSet cs;
  cs.dofs = ndof;
  std::vector<Eigen::Triplet<double>> trip;

  // Boundary rows grouped by vertex for the local null-space stage.
  std::vector<std::vector<Vec>> local(mesh.num_vertices());
  const bool want_t = which.count(ConstraintKind::BcTangential) > 0;
  const bool want_n = which.count(ConstraintKind::BcNormal) > 0;
  if (want_t || want_n) {
    for (const auto& pc : geometry::boundary_point_constraints(mesh)) {
      const bool tangential = pc.label == BoundaryLabel::Tangential;
      if ((tangential && !want_t) || (!tangential && !want_n)) continue;
      const int r = static_cast<int>(cs.kinds.size());
      for (int j = 0; j < n; ++j) {
        if (pc.direction(j) != 0.0) trip.emplace_back(r, dof(pc.vertex, j, n), pc.weight * pc.direction(j));
      }
      cs.kinds.push_back(tangential ? ConstraintKind::BcTangential : ConstraintKind::BcNormal);
      local[pc.vertex].push_back(pc.weight * pc.direction);
    }
  }

  // Dense orthogonality rows.
  std::vector<Vector> ortho;
  std::vector<ConstraintKind> ortho_kind;
  auto add = [&](ConstraintKind k, Vector row) {
    ortho.push_back(std::move(row));
    ortho_kind.push_back(k);
  };
  if (which.count(ConstraintKind::OrthoK)) {
    if (!data.kernel) throw ValidationError("ORTHO_K constraints need kernel data");
    for (const Mat& G : data.kernel->gradient_basis) {
      if (G.rows() != n || G.cols() != n) throw ValidationError("kernel data dimension does not match the mesh");
      add(ConstraintKind::OrthoK, gradient_row(mesh, G));
    }
  }
  if (which.count(ConstraintKind::OrthoSo)) {
    for (const Mat& S : rigid::so_basis(n)) add(ConstraintKind::OrthoSo, gradient_row(mesh, S));
  }
  if (which.count(ConstraintKind::OrthoRigid)) {
    for (const auto& r : rigid::rigid_basis(n)) add(ConstraintKind::OrthoRigid, forms.M * interpolate(mesh, r));
  }
  if (which.count(ConstraintKind::OrthoConst)) {
    std::vector<Vec> constants;
    if (data.constants) {
      constants = *data.constants;
    } else {
      for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = 1.0;
        constants.push_back(e);
      }
    }
    for (const Vec& a : constants) {
      if (a.size() != n) throw ValidationError("constant field dimension does not match the mesh");
      add(ConstraintKind::OrthoConst, forms.M * interpolate(mesh, rigid::RigidMotion::constant(a)));
    }
  }
  for (std::size_t k = 0; k < ortho.size(); ++k) {
    const int r = static_cast<int>(cs.kinds.size());
    for (int d = 0; d < ndof; ++d)
      if (ortho[k](d) != 0.0) trip.emplace_back(r, d, ortho[k](d));
    cs.kinds.push_back(ortho_kind[k]);
  }
  cs.rows.resize(static_cast<Eigen::Index>(cs.kinds.size()), ndof);
  cs.rows.setFromTriplets(trip.begin(), trip.end());
  cs.rows.makeCompressed();

  // Stage 1: per-vertex null spaces of the boundary rows.
  std::vector<Eigen::Triplet<double>> ztrip;
  int zcols = 0;
  int bc_rank = 0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const int vi = static_cast<int>(v);
    if (local[v].empty()) {
      for (int j = 0; j < n; ++j) ztrip.emplace_back(dof(vi, j, n), zcols++, 1.0);
      continue;
    }
    Matrix L(static_cast<Eigen::Index>(local[v].size()), n);
    for (std::size_t r = 0; r < local[v].size(); ++r) L.row(r) = local[v][r].transpose();
    Eigen::JacobiSVD<Matrix> svd(L, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) rank += (s(k) > 1e-9 * s(0));
    bc_rank += rank;
    for (int k = rank; k < n; ++k) {
      for (int j = 0; j < n; ++j)
        if (svd.matrixV()(j, k) != 0.0) ztrip.emplace_back(dof(vi, j, n), zcols, svd.matrixV()(j, k));
      ++zcols;
    }
  }
  SparseMatrix Zbc(ndof, zcols);
  Zbc.setFromTriplets(ztrip.begin(), ztrip.end());

  // Stage 2: eliminate the dense rows inside the boundary-admissible space.
  if (ortho.empty() || zcols == 0) {
    cs.null_basis = Matrix(Zbc);
    cs.rank = bc_rank;  // equals ndof when zcols == 0
    return cs;
  }
  Matrix Ct(zcols, static_cast<Eigen::Index>(ortho.size()));  // (C_ortho Z_bc)ᵀ
  for (std::size_t k = 0; k < ortho.size(); ++k) Ct.col(k) = Zbc.transpose() * ortho[k];
  Eigen::ColPivHouseholderQR<Matrix> qr(Ct);
  const double rmax = qr.maxPivot();
  qr.setThreshold(rmax > 0 ? 1e-10 : 1.0);
  const int orank = rmax > 0 ? static_cast<int>(qr.rank()) : 0;
  const Matrix Q = qr.householderQ();
  cs.null_basis = Zbc * Q.rightCols(zcols - orank);
  cs.rank = bc_rank + orank;
  return cs;
}

const SparseMatrix& form(const Forms& forms, FormKind kind) {
  switch (kind) {
    case FormKind::Mass: return forms.M;
    case FormKind::Grad: return forms.A_grad;
    case FormKind::Sym: return forms.A_sym;
  }
  return forms.M;
}

std::pair<Matrix, Matrix> reduce(const SparseMatrix& numerator, const SparseMatrix& denominator, const ConstraintSet& cs) {
  const Matrix& Z = cs.null_basis;
  if (numerator.rows() != Z.rows() || denominator.rows() != Z.rows()) {
    throw ValidationError("reduce: matrix size does not match the constraint set");
  }
  if (Z.cols() == 0) throw ValidationError("empty constrained space");
  Matrix A = Z.transpose() * (numerator * Z);
  Matrix B = Z.transpose() * (denominator * Z);
  A = 0.5 * (A + A.transpose()).eval();
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::LDLT<Matrix> ldlt(B);
  const Vector d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(dmax > 0) || d.minCoeff() <= kSingularDenominator * dmax) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "denominator singular on the constrained space (min pivot %.3g, max pivot %.3g); a kernel of the "
                  "denominator form was not deflated",
                  d.size() ? d.minCoeff() : 0.0, dmax);
    throw NumericalError(buf);
  }
  return {std::move(A), std::move(B)};
}

std::pair<Matrix, Matrix> reduce(const Forms& forms, const ConstraintSet& cs, std::pair<FormKind, FormKind> which) {
  return reduce(form(forms, which.first), form(forms, which.second), cs);
}

}  // namespace kornlab::fem
