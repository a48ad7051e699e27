#include "kornlab/fem/forms.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace kornlab::fem {

using geometry::Mesh;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix build(Eigen::Index rows, Eigen::Index cols, const Triplets& t) {
  SparseMatrix A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

}  // namespace

CellGeometry cell_geometry(const Mesh& mesh, std::size_t cell) {
  const int n = mesh.dim();
  const auto idx = mesh.cell(cell);
  const Vec& x0 = mesh.vertex(idx[0]);
  Matrix T(n, n);
  double longest = 0.0;
  for (int k = 0; k < n; ++k) T.col(k) = mesh.vertex(idx[k + 1]) - x0;
  for (int a = 0; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) longest = std::max(longest, (mesh.vertex(idx[a]) - mesh.vertex(idx[b])).norm());
  const double vol = T.determinant() / factorial(n);
  if (!(vol > 1e-13 * std::pow(longest, n))) {
    throw ValidationError("degenerate cell " + std::to_string(cell) + " (volume " + std::to_string(vol) + ")");
  }
  // λ_k = row k-1 of T⁻¹ applied to (x − x0) for k >= 1
  const Matrix Tinv = T.inverse();
  CellGeometry g{vol, Matrix(n + 1, n)};
  for (int k = 0; k < n; ++k) g.grads.row(k + 1) = Tinv.row(k);
  g.grads.row(0) = -Tinv.colwise().sum();
  return g;
}

Forms assemble(const Mesh& mesh, bool with_bubbles) {
  const int n = mesh.dim();
  const int nv = static_cast<int>(mesh.num_vertices());
  const int nc = static_cast<int>(mesh.num_cells());
  const int ndof = n * nv;

  Forms f;
  f.dim = n;
  f.num_vertices = mesh.num_vertices();
  f.num_cells = mesh.num_cells();
  f.with_bubbles = with_bubbles;

  Triplets tm, tg, ts, tgv, tmv, tb, tp;
  const double mass_scale = 1.0 / ((n + 1) * (n + 2));

  // Bubble b = c Π λ_i with c = (N+1)^(N+1) (b = 1 at the centroid).
  // ∫ Π λ_i^α_i = N! vol Π α_i! / (N + Σ α_i)!
  const double c = std::pow(n + 1.0, n + 1);
  const double nfact = factorial(n);
  const double bubble_int = c * nfact / factorial(2 * n + 1);
  const double bubble_phi = c * nfact * 2.0 / factorial(2 * n + 2);
  const double bubble_sq = c * c * nfact * std::pow(2.0, n + 1) / factorial(3 * n + 2);
  const double bubble_grad = c * c * nfact * std::pow(2.0, n - 1) / factorial(3 * n);

  for (int cell = 0; cell < nc; ++cell) {
    const CellGeometry g = cell_geometry(mesh, cell);
    const auto idx = mesh.cell(cell);
    const double vol = g.volume;
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        const double mab = vol * mass_scale * (a == b ? 2.0 : 1.0);
        const double kab = vol * g.grads.row(a).dot(g.grads.row(b));
        for (int j = 0; j < n; ++j) {
          tm.emplace_back(dof(idx[a], j, n), dof(idx[b], j, n), mab);
          tg.emplace_back(dof(idx[a], j, n), dof(idx[b], j, n), kab);
          for (int l = 0; l < n; ++l) {
            const double s = 0.5 * vol * ((j == l ? g.grads.row(a).dot(g.grads.row(b)) : 0.0) + g.grads(a, l) * g.grads(b, j));
            ts.emplace_back(dof(idx[a], j, n), dof(idx[b], l, n), s);
          }
        }
        if (with_bubbles) {
          tp.emplace_back(idx[a], idx[b], mab);
          for (int j = 0; j < n; ++j) {
            tgv.emplace_back(dof(idx[a], j, n), dof(idx[b], j, n), kab);
            tmv.emplace_back(dof(idx[a], j, n), dof(idx[b], j, n), mab);
          }
        }
      }
    }
    if (with_bubbles) {
      const double grad_sq = g.grads.squaredNorm();
      const int base = ndof + cell * n;
      for (int j = 0; j < n; ++j) {
        // ∫ ∇b·∇φ_a = 0 per cell, so the bubble block decouples in A_grad.
        tgv.emplace_back(base + j, base + j, vol * bubble_grad * grad_sq);
        tmv.emplace_back(base + j, base + j, vol * bubble_sq);
        for (int a = 0; a <= n; ++a) {
          tmv.emplace_back(base + j, dof(idx[a], j, n), vol * bubble_phi);
          tmv.emplace_back(dof(idx[a], j, n), base + j, vol * bubble_phi);
        }
      }
      for (int q = 0; q <= n; ++q) {
        for (int a = 0; a <= n; ++a)
          for (int j = 0; j < n; ++j) tb.emplace_back(idx[q], dof(idx[a], j, n), vol / (n + 1) * g.grads(a, j));
        // ∫ ψ ∂_j b = −∂_j ψ ∫ b
        for (int j = 0; j < n; ++j) tb.emplace_back(idx[q], base + j, -g.grads(q, j) * vol * bubble_int);
      }
    }
  }

  f.M = build(ndof, ndof, tm);
  f.A_grad = build(ndof, ndof, tg);
  f.A_sym = build(ndof, ndof, ts);
  if (with_bubbles) {
    const int nvel = f.num_velocity_dofs();
    f.A_grad_velocity = build(nvel, nvel, tgv);
    f.M_velocity = build(nvel, nvel, tmv);
    f.B_div = build(nv, nvel, tb);
    f.M_p = build(nv, nv, tp);
  }
  return f;
}

Vector interpolate(const Mesh& mesh, const std::function<Vec(const Vec&)>& field) {
  const int n = mesh.dim();
  Vector out(n * static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const Vec y = field(mesh.vertex(v));
    if (y.size() != n) throw ValidationError("interpolated field has the wrong dimension");
    out.segment(static_cast<Eigen::Index>(v) * n, n) = y;
  }
  return out;
}

Vector interpolate(const Mesh& mesh, const rigid::RigidMotion& r) {
  if (r.dim() != mesh.dim()) throw ValidationError("rigid motion dimension does not match the mesh");
  return interpolate(mesh, [&](const Vec& x) { return r(x); });
}

std::vector<Mat> cell_gradients(const Mesh& mesh, const Vector& nodal) {
  const int n = mesh.dim();
  if (nodal.size() != n * static_cast<Eigen::Index>(mesh.num_vertices())) {
    throw ValidationError("nodal field has " + std::to_string(nodal.size()) + " entries, expected " +
                          std::to_string(n * mesh.num_vertices()));
  }
  std::vector<Mat> out;
  out.reserve(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const auto idx = mesh.cell(c);
    Mat G = Mat::Zero(n, n);
    for (int a = 0; a <= n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) += g.grads(a, i) * nodal(dof(idx[a], j, n));
    out.push_back(G);
  }
  return out;
}

std::string to_coordinate_text(const SparseMatrix& A) {
  std::ostringstream os;
  char buf[64];
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()), static_cast<long>(it.col()), it.value());
      os << buf;
    }
  }
  return os.str();
}

double quad(const SparseMatrix& A, const Vector& x, const Vector& y) { return x.dot(A * y); }

}  // namespace kornlab::fem
