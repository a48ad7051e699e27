// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "kornlab/calculus/poly_field.hpp"
#include "kornlab/elasticity/equilibrium.hpp"
#include "kornlab/fem/constraints.hpp"
#include "kornlab/flow/flow.hpp"
#include "kornlab/geometry/domains.hpp"
#include "kornlab/rigid/kernel.hpp"
#include "kornlab/spectra/estimators.hpp"
#include "oracles.hpp"

#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace kornlab;
using namespace kornlab::geometry;
using rigid::RigidMotion;

namespace {

constexpr double pi = std::numbers::pi;

Mesh make(DomainKind kind, int n, const std::string& rule = "all-t") {
  DomainSpec s;
  s.kind = kind;
  s.n = n;
  s.labels = label_rule(rule);
  if (kind == DomainKind::CylinderSector) {
    s.phi1 = 0.0;
    s.phi2 = pi / 3;
  }
  return generate_mesh(s);
}

// Accumulates sub-check outcomes and the first failure's description.
struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
  void note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. Kernel catalog
Verdict ac1() {
  Verdict v;
  for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitCube, DomainKind::UnitDisk, DomainKind::UnitBall,
                    DomainKind::HalfCylinder, DomainKind::CylinderSector}) {
    const auto K = rigid::compute_kernel_K(make(kind, kind == DomainKind::UnitDisk ? 3 : 2));
    v.require(K.gradient_basis.empty(), "dim K != 0 for " + to_string(kind) + " with all-t");
  }
  const Mesh hc = make(DomainKind::HalfCylinder, 3, "radial-t");
  const auto Khc = rigid::compute_kernel_K(hc);
  v.require(Khc.gradient_basis.size() == 1 && Khc.basis.size() == 1, "half cylinder: dim K != 1");
  if (Khc.basis.size() == 1) {
    const auto axis = rigid::detect_axis(Khc.basis[0]);
    const double dir_err = (axis.direction.cwiseAbs() - make_vec({0, 0, 1})).norm();
    const double point_err = axis.point.head(2).norm();
    v.require(dir_err <= 1e-8 && point_err <= 1e-8, fmt("half cylinder axis off by %.2e / %.2e", dir_err, point_err));
    v.note(fmt("half-cylinder axis error %.1e", std::max(dir_err, point_err)));
  }
  v.require(rigid::compute_kernel_K(make(DomainKind::UnitDisk, 4, "all-n")).gradient_basis.size() == 1, "disk all-n: dim K != 1");
  const Mesh cube = make(DomainKind::UnitCube, 2, "top-bottom-t");
  v.require(rigid::compute_kernel_K(cube).gradient_basis.empty(), "cube top-bottom-t: dim K != 0");
  const auto consts = rigid::compute_constant_kernel(cube);
  v.require(consts.size() == 1 && std::abs(std::abs(consts[0](2)) - 1.0) <= 1e-8 && consts[0].head(2).norm() <= 1e-8,
            "cube constant kernel is not span{e3}");
  return v;
}

// 2. Korn-first constant on the unit square, Γt = Γ
Verdict ac2() {
  Verdict v;
  const double c8 = spectra::korn_first_constant(make(DomainKind::UnitSquare, 8)).constant;
  const double c16 = spectra::korn_first_constant(make(DomainKind::UnitSquare, 16)).constant;
  v.require(c16 > 1.0 && c16 <= std::sqrt(2.0) * 1.05, fmt("c(16) = %.12g outside (1, 1.05 sqrt 2]", c16));
  v.require(c16 >= c8 - 1e-6, fmt("c decreases: c(8) = %.12g, c(16) = %.12g", c8, c16));
  v.note(fmt("c(8) = %.12f, c(16) = %.12f", c8, c16));
  return v;
}

// 3. Cube Poincaré needs the admissible constant removed; Korn-first does not
Verdict ac3() {
  Verdict v;
  const Mesh cube = make(DomainKind::UnitCube, 3, "top-bottom-t");
  spectra::EstimatorOptions raw;
  raw.deflate = false;
  try {
    spectra::poincare_mixed_constant(cube, raw);
    v.require(false, "poincare without ORTHO_CONST did not fail");
  } catch (const NumericalError& e) {
    v.require(std::string(e.what()).find("denominator singular") != std::string::npos,
              std::string("unexpected failure: ") + e.what());
  }
  const auto p = spectra::poincare_mixed_constant(cube);
  v.require(p.lambda > 0, "poincare with ORTHO_CONST gave lambda <= 0");
  const auto k = spectra::korn_first_constant(cube);
  double kernel_dim = -1;
  for (const auto& [name, value] : k.extras)
    if (name == "kernel_dim") kernel_dim = value;
  v.require(kernel_dim == 0 && std::isfinite(k.constant), "korn1 on the cube needed K-deflation");
  v.note(fmt("poincare lambda = %.6f, korn1 = %.6f", p.lambda, k.constant));
  return v;
}

// 4. Discrete inf-sup constant
Verdict ac4() {
  Verdict v;
  const double c4 = spectra::infsup_constant(make(DomainKind::UnitSquare, 4)).constant;
  const double c8 = spectra::infsup_constant(make(DomainKind::UnitSquare, 8)).constant;
  for (double c : {c4, c8}) v.require(c > 0 && c <= std::sqrt(2.0), fmt("c_LBB = %.6f outside (0, sqrt 2]", c));
  const double spread = std::abs(c4 - c8) / std::max(c4, c8);
  v.require(spread <= 0.2, fmt("c_LBB(4) = %.6f and c_LBB(8) = %.6f differ by %.1f%%", c4, c8, 100 * spread));
  v.note(fmt("c_LBB(4) = %.6f, c_LBB(8) = %.6f", c4, c8));
  return v;
}

// 5. Second-derivative identity
Verdict ac5() {
  Verdict v;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int dim : {2, 3})
    for (int t = 0; t < 100; ++t) worst = std::max(worst, calculus::check_identity(calculus::random_poly_field(dim, 4, rng)));
  v.require(worst <= 1e-12, fmt("identity residual %.3e > 1e-12", worst));
  const calculus::FieldEvaluator f = [](const Vec& x) { return make_vec({std::sin(x(1)), 0.0}); };
  const double ratio = calculus::check_identity_fd(f, 2, 1e-2) / calculus::check_identity_fd(f, 2, 5e-3);
  v.require(ratio >= 3.2 && ratio <= 4.8, fmt("FD ratio %.3f outside [3.2, 4.8]", ratio));
  v.note(fmt("max residual %.1e, FD ratio %.3f", worst, ratio));
  return v;
}

// 6. Eigensolver against the Jacobi oracle on FEM pencils
Verdict ac6() {
  Verdict v;
  std::mt19937_64 rng(6);
  const char* rules[] = {"all-t", "all-n", "top-bottom-t", "sides-t"};
  const std::pair<fem::FormKind, fem::FormKind> pairs[] = {{fem::FormKind::Grad, fem::FormKind::Mass},
                                                          {fem::FormKind::Sym, fem::FormKind::Mass},
                                                          {fem::FormKind::Mass, fem::FormKind::Grad},
                                                          {fem::FormKind::Sym, fem::FormKind::Grad}};
  double worst = 0.0;
  int max_size = 0;
  for (int t = 0; t < 50; ++t) {
    const bool square = t % 3 != 2;
    const int n = square ? 3 + static_cast<int>(rng() % 7) : 2 + static_cast<int>(rng() % 2);
    const std::string rule = rules[rng() % 4];
    const Mesh m = oracle::jitter(make(square ? DomainKind::UnitSquare : DomainKind::UnitCube, n, rule), 0.15 / n,
                                  static_cast<unsigned>(rng()));
    const fem::Forms forms = fem::assemble(m);
    auto which = fem::bc_kinds();
    which.insert(fem::ConstraintKind::OrthoConst);
    const auto cs = fem::build_constraints(m, forms, which);
    const auto [A, B] = fem::reduce(forms, cs, pairs[rng() % 4]);
    const int size = static_cast<int>(A.rows());
    max_size = std::max(max_size, size);
    v.require(size <= 200, "pencil larger than 200");
    spectra::EigOptions eo;
    eo.seed = rng();
    const Vector ref = spectra::eig_oracle(A, B);
    const double lo = spectra::extremal_eig(A, B, spectra::Which::Smallest, eo).lambda;
    const double hi = spectra::extremal_eig(A, B, spectra::Which::Largest, eo).lambda;
    worst = std::max({worst, std::abs(lo - ref(0)) / std::abs(ref(0)), std::abs(hi - ref(size - 1)) / std::abs(ref(size - 1))});
  }
  v.require(worst <= 1e-8, fmt("worst relative deviation %.3e > 1e-8", worst));
  v.note(fmt("50 pencils up to size %.0f, worst relative deviation %.1e", max_size, worst));
  return v;
}

// 7. Flow invariance and closed orbits
Verdict ac7() {
  Verdict v;
  const auto disk = AnalyticBoundary::disk(make_vec({0, 0}), 1.0);
  const auto circle = flow::integrate_flow(RigidMotion::rotation_2d(1.0, make_vec({0, 0})), make_vec({1, 0}), 2 * pi, 1e-3, &disk);
  v.require(*circle.max_deviation <= 1e-8, fmt("circle deviation %.3e", *circle.max_deviation));
  v.require(circle.closure_error <= 1e-8, fmt("circle closure error %.3e", circle.closure_error));
  const auto helix = flow::integrate_flow(RigidMotion(make_vec({0, 0, 1}), make_vec({0, 0, 1})), make_vec({1, 0, 0}), 2 * pi, 1e-3);
  const double end_err = (helix.points.back() - make_vec({1, 0, 2 * pi})).norm();
  v.require(end_err <= 1e-8, fmt("helix endpoint off by %.3e", end_err));
  v.note(fmt("deviation %.1e, closure %.1e, helix %.1e", *circle.max_deviation, circle.closure_error, end_err));
  return v;
}

// 8. Rayleigh-quotient degeneracy on the disk
Verdict ac8() {
  Verdict v;
  const Mesh disk = make(DomainKind::UnitDisk, 6, "all-n");
  const fem::Forms f = fem::assemble(disk);
  const Vector u = fem::interpolate(disk, RigidMotion::rotation_2d(1.0, make_vec({0, 0})));
  const double q = fem::quad(f.A_sym, u) / fem::quad(f.A_grad, u);
  v.require(std::abs(q) <= 1e-14, fmt("quotient %.3e > 1e-14", q));
  v.note(fmt("quotient %.1e", q));
  return v;
}

// 9. Pure-traction elasticity
Verdict ac9() {
  Verdict v;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  double worst_err = 0.0, worst_rigid = 0.0;
  for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitCube}) {
    const Mesh m = oracle::jitter(make(kind, kind == DomainKind::UnitSquare ? 8 : 3), 0.05, 21);
    const fem::Forms f = fem::assemble(m);
    Matrix R(f.num_dofs(), rigid::rigid_dimension(m.dim()));
    int k = 0;
    for (const auto& r : rigid::rigid_basis(m.dim())) R.col(k++) = fem::interpolate(m, r);
    Vector w(f.num_dofs());
    for (auto& x : w) x = g(rng);
    w -= R * (R.transpose() * (f.M * R)).ldlt().solve(R.transpose() * (f.M * w));
    Eigen::SparseLU<SparseMatrix> lu(f.M);
    const auto sol = elasticity::solve_equilibrium(m, lu.solve(Vector(f.A_sym * w)));
    const Vector e = sol.displacement - w;
    worst_err = std::max(worst_err, std::sqrt(fem::quad(f.A_sym, e) / fem::quad(f.A_sym, w)));
    for (const auto& r : rigid::rigid_basis(m.dim())) {
      const auto rs = elasticity::solve_equilibrium(m, fem::interpolate(m, r * 3.0));
      worst_rigid = std::max(worst_rigid, rs.displacement.cwiseAbs().maxCoeff());
    }
  }
  v.require(worst_err <= 1e-8, fmt("manufactured solution energy error %.3e", worst_err));
  v.require(worst_rigid <= 1e-10, fmt("rigid load displacement %.3e", worst_rigid));
  v.note(fmt("energy error %.1e, rigid displacement %.1e", worst_err, worst_rigid));
  return v;
}

// 10. Scaling laws
Verdict ac10() {
  Verdict v;
  const Mesh all_t = make(DomainKind::UnitSquare, 6);
  const Mesh mixed = make(DomainKind::UnitSquare, 6, "top-bottom-t");
  using Estimator = std::function<spectra::SpectralResult(const Mesh&)>;
  struct Case {
    const char* name;
    Estimator est;
    const Mesh* mesh;
    int power;  // constant(sΩ) = s^power constant(Ω)
  };
  const Case cases[] = {
      {"korn1", [](const Mesh& m) { return spectra::korn_first_constant(m); }, &mixed, 0},
      {"korn1-nobc", [](const Mesh& m) { return spectra::korn_nobc_constant(m); }, &all_t, 0},
      {"poincare", [](const Mesh& m) { return spectra::poincare_mixed_constant(m); }, &mixed, 1},
      {"poincare-ela", [](const Mesh& m) { return spectra::poincare_elasticity_constant(m); }, &all_t, 1},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const double base = c.est(*c.mesh).constant;
    for (double s : {0.5, 2.0}) {
      const double expect = base * std::pow(s, c.power);
      const double rel = std::abs(c.est(c.mesh->scaled(s)).constant - expect) / expect;
      worst = std::max(worst, rel);
      v.require(rel <= 1e-8, std::string(c.name) + fmt(" at s = %.1f off by %.3e", s, rel));
    }
  }
  v.note(fmt("worst relative deviation %.1e", worst));
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    Verdict (*fn)();
  };
  const Criterion criteria[] = {
      {"kernel catalog", 10, ac1},       {"Korn-first constant, square", 60, ac2},
      {"cube Poincare caveat", 60, ac3}, {"inf-sup constant", 60, ac4},
      {"identity suite", 10, ac5},       {"eigensolver oracle", 60, ac6},
      {"flow invariance", 5, ac7},       {"Rayleigh-quotient degeneracy", 5, ac8},
      {"elasticity", 30, ac9},           {"scaling laws", 60, ac10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs <= c.budget_s, fmt("runtime %.1f s over the %.0f s budget", secs, c.budget_s));
    failures += !v.pass;
    std::printf("AC%zu %s  %s  [%.2f s]  %s\n", i + 1, v.pass ? "PASS" : "FAIL", c.name, secs, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
