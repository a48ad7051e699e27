#include "kornlab/rigid/kernel.hpp"

#include "kornlab/geometry/domains.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace kornlab::rigid {

using geometry::BoundaryLabel;
using geometry::Mesh;

Mat skw_mean(const Mesh& mesh, const std::vector<Mat>& cell_gradients) {
  if (cell_gradients.size() != mesh.num_cells()) {
    throw ValidationError("skw_mean: got " + std::to_string(cell_gradients.size()) + " cell gradients for " +
                          std::to_string(mesh.num_cells()) + " cells");
  }
  const int n = mesh.dim();
  Mat acc = Mat::Zero(n, n);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (cell_gradients[c].rows() != n || cell_gradients[c].cols() != n) {
      throw ValidationError("skw_mean: gradient of cell " + std::to_string(c) + " has the wrong shape");
    }
    acc += mesh.cell_volume(c) * skw(cell_gradients[c]);
  }
  return acc / mesh.volume();
}

Matrix rigid_constraint_matrix(const Mesh& mesh) {
  const auto basis = rigid_basis(mesh.dim());
  const auto rows = geometry::boundary_point_constraints(mesh);
  Matrix C(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& pc = rows[i];
    const Vec& x = mesh.vertex(pc.vertex);
    for (std::size_t k = 0; k < basis.size(); ++k) C(i, k) = pc.weight * pc.direction.dot(basis[k](x));
  }
  return C;
}

namespace {

struct NullSpace {
  Matrix vectors;  // columns
  Vector singular_values;
};

NullSpace null_space(const Matrix& C, Eigen::Index cols, double tol) {
  NullSpace out;
  out.singular_values = Vector::Zero(cols);
  if (C.rows() == 0) {
    out.vectors = Matrix::Identity(cols, cols);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  out.singular_values.head(s.size()) = s;
  const double smax = s.size() ? s(0) : 0.0;
  const double threshold = smax > 0 ? tol * smax : tol;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < cols; ++k) {
    if (out.singular_values(k) <= threshold) keep.push_back(k);
  }
  out.vectors.resize(cols, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.vectors.col(j) = svd.matrixV().col(keep[j]);
  return out;
}

void check_tol(double tol) {
  if (!(tol > 0)) throw ValidationError("tolerance must be positive");
}

}  // namespace

KernelReport compute_kernel_K(const Mesh& mesh, double tol) {
  check_tol(tol);
  const int n = mesh.dim();
  const int m = so_dimension(n);
  const auto basis = rigid_basis(n);
  const Matrix C = rigid_constraint_matrix(mesh);
  const NullSpace ns = null_space(C, static_cast<Eigen::Index>(basis.size()), tol);

  KernelReport report;
  report.tolerance = tol;
  report.singular_values = ns.singular_values;
  for (Eigen::Index j = 0; j < ns.vectors.cols(); ++j) {
    const Vector c = ns.vectors.col(j);
    RigidMotion r = basis[0] * c(0);
    for (std::size_t k = 1; k < basis.size(); ++k) r = r + basis[k] * c(k);
    report.basis.push_back(r);
    report.residuals.push_back(C.rows() ? (C * c).norm() : 0.0);
  }

  // Rotation parts in so_basis coordinates; so_basis is Frobenius orthonormal,
  // so an orthonormal basis of their span gives orthonormal gradients.
  if (ns.vectors.cols() > 0) {
    const Matrix R = ns.vectors.topRows(m);
    Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeThinU);
    const auto so = so_basis(n);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      if (svd.singularValues()(k) <= 1e-8) break;
      Mat S = Mat::Zero(n, n);
      for (int i = 0; i < m; ++i) S += svd.matrixU()(i, k) * so[i];
      report.gradient_basis.push_back(S.transpose());
    }
  }
  return report;
}

std::vector<Vec> compute_constant_kernel(const Mesh& mesh, double tol) {
  check_tol(tol);
  const int n = mesh.dim();
  const Matrix C = rigid_constraint_matrix(mesh).rightCols(n);
  const NullSpace ns = null_space(C, n, tol);
  std::vector<Vec> out;
  for (Eigen::Index j = 0; j < ns.vectors.cols(); ++j) out.push_back(Vec(ns.vectors.col(j)));
  return out;
}

Axis detect_axis(const RigidMotion& r) {
  if (r.dim() != 3) throw ValidationError("axis detection requires a 3D rigid motion");
  const Eigen::Vector3d w = r.rotation();
  const Eigen::Vector3d b = r.translation();
  const double omega = w.norm();
  if (!(omega > 1e-14 * (1.0 + b.norm()))) {
    throw ValidationError("no axis: rigid motion is a pure translation (ω = 0)");
  }
  const Eigen::Vector3d sigma = w / omega;
  Axis axis;
  axis.direction = sigma;
  axis.point = Vec(sigma.cross(b) / omega);
  axis.omega = omega;
  axis.pitch = sigma.dot(b);
  axis.valid = std::abs(axis.pitch) <= 1e-10 * (b.norm() + 1.0);
  return axis;
}

MixedReport classify_mixed(const Mesh& mesh, const RigidMotion& r, double tol) {
  check_tol(tol);
  if (mesh.dim() != 3 || r.dim() != 3) throw ValidationError("mixed-boundary classification requires a 3D mesh and motion");
  MixedReport report;
  report.axis = detect_axis(r);
  const Vec& sigma = report.axis.direction;
  const Vec& p = report.axis.point;
  for (std::size_t f = 0; f < mesh.num_boundary_facets(); ++f) {
    FacetVerdict v;
    v.facet = static_cast<int>(f);
    v.label = mesh.facet(f).label;
    if (v.label == BoundaryLabel::Tangential) {
      const Vec& nf = mesh.facet_normal(f);
      v.residual = std::max(std::abs(nf.dot(sigma)), std::abs(nf.dot(p - mesh.facet_centroid(f))));
    } else {
      for (int vid : mesh.facet(f).vertices) {
        const Vec& x = mesh.vertex(vid);
        const Vec rx = r(x);
        const Vec nu = geometry::vertex_normal(mesh, f, vid);
        v.residual = std::max(v.residual, std::abs(nu.dot(rx)) / (rx.norm() + tol));
      }
    }
    v.pass = v.residual <= tol;
    if (!v.pass) ++report.failures;
    report.facets.push_back(v);
  }
  report.all_pass = report.failures == 0;
  return report;
}

}  // namespace kornlab::rigid
