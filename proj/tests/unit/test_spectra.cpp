#include <doctest.h>

#include "kornlab/geometry/domains.hpp"
#include "kornlab/rigid/kernel.hpp"
#include "kornlab/spectra/estimators.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace kornlab;
using namespace kornlab::geometry;
using namespace kornlab::spectra;

namespace {

Mesh make(DomainKind kind, int n, const std::string& rule = "all-t") {
  DomainSpec s;
  s.kind = kind;
  s.n = n;
  s.labels = label_rule(rule);
  return generate_mesh(s);
}

Matrix random_spd(int n, std::mt19937_64& rng, double shift) {
  std::normal_distribution<double> g;
  Matrix X(n, n);
  for (auto& x : X.reshaped()) x = g(rng);
  return X * X.transpose() / n + shift * Matrix::Identity(n, n);
}

Matrix random_sym(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix X(n, n);
  for (auto& x : X.reshaped()) x = g(rng);
  return 0.5 * (X + X.transpose());
}

double rayleigh(const SparseMatrix& A, const SparseMatrix& B, const Vector& v) { return v.dot(A * v) / v.dot(B * v); }

}  // namespace

TEST_CASE("diagonal pencils") {
  const Matrix A = Vector(make_vec({1, 2, 3})).asDiagonal();
  const Matrix I = Matrix::Identity(3, 3);
  CHECK(extremal_eig(A, I, Which::Smallest).lambda == doctest::Approx(1.0).epsilon(1e-12));
  const Matrix B = Vector(make_vec({1, 1, 2})).asDiagonal();
  CHECK(extremal_eig(A, B, Which::Largest).lambda == doctest::Approx(2.0).epsilon(1e-12));
  const Vector all = eig_oracle(A, B);
  CHECK(all(0) == doctest::Approx(1.0));
  CHECK(all(1) == doctest::Approx(1.5));
  CHECK(all(2) == doctest::Approx(2.0));
}

TEST_CASE("random 50x50 pencils agree with the Jacobi oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const Matrix A = random_sym(50, rng);
    const Matrix B = random_spd(50, rng, 0.5);
    const Vector ref = eig_oracle(A, B);
    const auto lo = extremal_eig(A, B, Which::Smallest);
    const auto hi = extremal_eig(A, B, Which::Largest);
    CHECK(std::abs(lo.lambda - ref(0)) <= 1e-8 * std::abs(ref(0)));
    CHECK(std::abs(hi.lambda - ref(49)) <= 1e-8 * std::abs(ref(49)));
    CHECK(lo.residual <= 1e-8);
    CHECK(hi.residual <= 1e-8);
    // Eigen's dense generalized solver as a second opinion
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(A, B);
    CHECK(std::abs(ges.eigenvalues()(0) - ref(0)) <= 1e-9 * std::abs(ref(0)));
  }
}

TEST_CASE("eigensolver is deterministic for a fixed seed") {
  std::mt19937_64 rng(9);
  const Matrix A = random_sym(40, rng);
  const Matrix B = random_spd(40, rng, 1.0);
  const auto r1 = extremal_eig(A, B, Which::Smallest);
  const auto r2 = extremal_eig(A, B, Which::Smallest);
  CHECK(r1.lambda == r2.lambda);
  CHECK(r1.vector == r2.vector);
}

TEST_CASE("eigensolver rejects indefinite B and bad shapes") {
  const Matrix A = Matrix::Identity(3, 3);
  Matrix B = Matrix::Identity(3, 3);
  B(2, 2) = -1;
  CHECK_THROWS_AS(extremal_eig(A, B, Which::Smallest), NumericalError);
  CHECK_THROWS_AS(extremal_eig(A, Matrix::Identity(2, 2), Which::Smallest), ValidationError);
  CHECK_THROWS_AS(eig_oracle(Matrix::Identity(501, 501), Matrix::Identity(501, 501)), ValidationError);
}

TEST_CASE("eigensolver handles multiple and zero eigenvalues") {
  Matrix A = Matrix::Zero(20, 20);
  for (int i = 0; i < 20; ++i) A(i, i) = i < 3 ? 0.0 : i;
  const auto r = extremal_eig(A, Matrix::Identity(20, 20), Which::Smallest);
  CHECK(std::abs(r.lambda) <= 1e-12);
  CHECK(r.residual <= 1e-8);
}

TEST_CASE("korn first on the unit square with full tangential condition") {
  const auto r = korn_first_constant(make(DomainKind::UnitSquare, 8));
  CHECK(r.constant > 1.0);
  CHECK(r.constant <= std::sqrt(2.0) * 1.05);
  CHECK(r.lambda >= -1e-10);
  CHECK(r.residual <= 1e-8);
}

TEST_CASE("disk rotation is an exact Korn obstruction without K-deflation") {
  const Mesh m = make(DomainKind::UnitDisk, 4, "all-n");
  const auto f = fem::assemble(m);
  const Vector rot = fem::interpolate(m, [](const Vec& x) { return make_vec({-x(1), x(0)}); });
  CHECK(fem::quad(f.A_sym, rot) / fem::quad(f.A_grad, rot) <= 1e-14);

  EstimatorOptions raw;
  raw.deflate = false;
  const auto r0 = korn_first_constant(m, raw);
  CHECK(std::abs(r0.lambda) <= 1e-10);

  const auto r1 = korn_first_constant(m);
  CHECK(r1.lambda > 1e-3);
  CHECK(std::isfinite(r1.constant));
}

TEST_CASE("deflated disk spectrum is positive per the oracle") {
  const Mesh m = make(DomainKind::UnitDisk, 3, "all-n");
  const auto f = fem::assemble(m);
  fem::ConstraintData data;
  data.kernel = rigid::compute_kernel_K(m);
  data.constants = rigid::compute_constant_kernel(m);
  auto which = fem::bc_kinds();
  which.insert(fem::ConstraintKind::OrthoK);
  which.insert(fem::ConstraintKind::OrthoConst);
  const auto cs = fem::build_constraints(m, f, which, data);
  const auto [A, B] = fem::reduce(f, cs, {fem::FormKind::Sym, fem::FormKind::Grad});
  const Vector all = eig_oracle(A, B);
  CHECK(all(0) > 1e-3);
  CHECK(korn_first_constant(m).lambda == doctest::Approx(all(0)).epsilon(1e-8));
}

TEST_CASE("korn without boundary conditions") {
  const auto r4 = korn_nobc_constant(make(DomainKind::UnitSquare, 4));
  const auto r8 = korn_nobc_constant(make(DomainKind::UnitSquare, 8));
  CHECK(r4.lambda <= 1.0 + 1e-12);
  CHECK(r4.constant >= 1.0);
  CHECK(r8.constant >= r4.constant - 1e-6);
}

TEST_CASE("projection form of korn without boundary conditions") {
  // ‖∇v − S_v‖² equals the energy of the ∇v ⊥ 𝔰𝔬 component v − (S_v x).
  const Mesh m = oracle::jitter(make(DomainKind::UnitSquare, 4), 0.05, 2);
  const auto f = fem::assemble(m);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int t = 0; t < 10; ++t) {
    Vector v(f.num_dofs());
    for (auto& x : v) x = g(rng);
    const auto G = fem::cell_gradients(m, v);
    const Mat Sv = rigid::skw_mean(m, G);
    double direct = 0.0;
    for (std::size_t c = 0; c < m.num_cells(); ++c) direct += m.cell_volume(c) * (G[c] - Sv).squaredNorm();
    // ∇(Sᵀ-field) = S: the field x ↦ Svᵀ x has gradient Sv.
    const Vector corr = fem::interpolate(m, [&](const Vec& x) { return Vec(Sv.transpose() * x); });
    const Vector w = v - corr;
    CHECK(fem::quad(f.A_grad, w) == doctest::Approx(direct).epsilon(1e-10));
    const auto so_rows = fem::build_constraints(m, f, {fem::ConstraintKind::OrthoSo}).rows;
    CHECK((so_rows * w).norm() <= 1e-10 * (so_rows * v).norm() + 1e-12);
  }
}

TEST_CASE("korn second constant") {
  const Mesh m4 = make(DomainKind::UnitSquare, 4);
  const auto r4 = korn_second_constant(m4);
  const auto f = fem::assemble(m4);
  const Vector rot = fem::interpolate(m4, [](const Vec& x) { return make_vec({-x(1), x(0)}); });
  const double q = fem::quad(f.A_grad, rot) / (fem::quad(f.A_sym, rot) + fem::quad(f.M, rot));
  CHECK(std::isfinite(q));
  CHECK(r4.lambda >= q - 1e-12);
  const auto r8 = korn_second_constant(make(DomainKind::UnitSquare, 8));
  CHECK(r8.constant >= r4.constant - 1e-6);
  CHECK(r4.extras[0].second == doctest::Approx(r4.constant));
}

TEST_CASE("cube Poincare needs the admissible constant deflated") {
  const Mesh m = make(DomainKind::UnitCube, 2, "top-bottom-t");
  EstimatorOptions raw;
  raw.deflate = false;
  CHECK_THROWS_WITH_AS(poincare_mixed_constant(m, raw), doctest::Contains("denominator singular"), NumericalError);
  const auto r = poincare_mixed_constant(m);
  CHECK(r.lambda > 0);
  // the constant field has zero gradient and nonzero L² norm
  const auto f = fem::assemble(m);
  const Vector e3 = fem::interpolate(m, rigid::RigidMotion::constant(make_vec({0, 0, 1})));
  CHECK(fem::quad(f.A_grad, e3) <= 1e-14);
  CHECK_NOTHROW(korn_first_constant(m));
}

TEST_CASE("square Poincare with full tangential condition needs no constants") {
  const Mesh m4 = make(DomainKind::UnitSquare, 4);
  CHECK(rigid::compute_constant_kernel(m4).empty());
  EstimatorOptions raw;
  raw.deflate = false;
  const auto a = poincare_mixed_constant(m4, raw);
  const auto b = poincare_mixed_constant(m4);
  CHECK(a.lambda > 0);
  CHECK(a.lambda == doctest::Approx(b.lambda).epsilon(1e-10));
  const auto r8 = poincare_mixed_constant(make(DomainKind::UnitSquare, 8));
  CHECK(r8.constant >= a.constant - 1e-6);
}

TEST_CASE("Poincare for elasticity") {
  const Mesh m = make(DomainKind::UnitSquare, 4);
  EstimatorOptions raw;
  raw.deflate = false;
  CHECK(std::abs(poincare_elasticity_constant(m, raw).lambda) <= 1e-10);
  const auto r = poincare_elasticity_constant(m);
  CHECK(r.lambda > 1e-3);

  // centered form with the M-orthogonal projection onto rigid motions
  const auto f = fem::assemble(m);
  std::vector<Vector> R;
  for (const auto& rb : rigid::rigid_basis(2)) R.push_back(fem::interpolate(m, rb));
  Matrix Rm(f.num_dofs(), static_cast<Eigen::Index>(R.size()));
  for (std::size_t k = 0; k < R.size(); ++k) Rm.col(k) = R[k];
  const Matrix G = Rm.transpose() * (f.M * Rm);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int t = 0; t < 10; ++t) {
    Vector v(f.num_dofs());
    for (auto& x : v) x = g(rng);
    const Vector w = v - Rm * G.ldlt().solve(Rm.transpose() * (f.M * v));
    CHECK(std::sqrt(fem::quad(f.M, w)) <= r.constant * std::sqrt(fem::quad(f.A_sym, v)) * (1 + 1e-10));
  }
}

TEST_CASE("inf-sup constant of the MINI pair") {
  const auto r4 = infsup_constant(make(DomainKind::UnitSquare, 4));
  const auto r8 = infsup_constant(make(DomainKind::UnitSquare, 8));
  CHECK(r4.constant > 0);
  CHECK(r4.constant <= std::sqrt(2.0));
  CHECK(r8.constant <= std::sqrt(2.0));
  CHECK(std::abs(r4.constant - r8.constant) <= 0.2 * std::max(r4.constant, r8.constant));
  const auto r1 = infsup_constant(make(DomainKind::UnitSquare, 1));
  CHECK(r1.constant > 0);
  const auto c3 = infsup_constant(make(DomainKind::UnitCube, 2));
  CHECK(c3.constant > 0);
  CHECK(c3.constant <= std::sqrt(3.0));
  EstimatorOptions full;
  full.full_norm = true;
  CHECK(infsup_constant(make(DomainKind::UnitSquare, 4), full).constant <= r4.constant + 1e-12);
}

TEST_CASE("eigenvectors reproduce lambda on the unreduced forms") {
  const Mesh m = make(DomainKind::UnitCube, 2, "top-bottom-t");
  const auto f = fem::assemble(m);
  const auto k1 = korn_first_constant(m);
  CHECK(rayleigh(f.A_sym, f.A_grad, k1.lifted) == doctest::Approx(k1.lambda).epsilon(1e-9));
  const auto p = poincare_mixed_constant(m);
  CHECK(rayleigh(f.A_grad, f.M, p.lifted) == doctest::Approx(p.lambda).epsilon(1e-9));
  const auto e = poincare_elasticity_constant(m);
  CHECK(rayleigh(f.A_sym, f.M, e.lifted) == doctest::Approx(e.lambda).epsilon(1e-9));
  const auto k2 = korn_second_constant(m);
  const SparseMatrix SM = f.A_sym + f.M;
  CHECK(rayleigh(f.A_grad, SM, k2.lifted) == doctest::Approx(k2.lambda).epsilon(1e-9));
}

TEST_CASE("scaling laws") {
  const Mesh m = make(DomainKind::UnitSquare, 4);
  const double k = korn_first_constant(m).constant;
  const double p = poincare_mixed_constant(m).constant;
  const double e = poincare_elasticity_constant(m).constant;
  for (double s : {0.5, 2.0}) {
    const Mesh ms = m.scaled(s);
    CHECK(korn_first_constant(ms).constant == doctest::Approx(k).epsilon(1e-8));
    CHECK(poincare_mixed_constant(ms).constant == doctest::Approx(s * p).epsilon(1e-8));
    CHECK(poincare_elasticity_constant(ms).constant == doctest::Approx(s * e).epsilon(1e-8));
  }
}
