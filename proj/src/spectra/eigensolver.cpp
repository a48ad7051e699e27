#include "kornlab/spectra/eigensolver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

namespace kornlab::spectra {

namespace {

void check_pencil(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw ValidationError("pencil matrices must be square and of equal size");
  }
  if (A.rows() == 0) throw ValidationError("empty pencil");
  const double sa = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
  const double sb = std::max(B.cwiseAbs().maxCoeff(), 1e-300);
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * sa) throw ValidationError("A is not symmetric");
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-10 * sb) throw ValidationError("B is not symmetric");
}

// Columns of Y made B-orthonormal (two passes of modified Gram-Schmidt).
// Columns that collapse are replaced by fresh random directions.
void b_orthonormalize(Matrix& Y, const Matrix& B, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (Eigen::Index k = 0; k < Y.cols(); ++k) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double before = std::sqrt(std::max(0.0, Y.col(k).dot(B * Y.col(k))));
      for (int pass = 0; pass < 2; ++pass) {
        const Vector BYk = B * Y.col(k);
        for (Eigen::Index j = 0; j < k; ++j) Y.col(k) -= Y.col(j).dot(BYk) * Y.col(j);
      }
      const double after = std::sqrt(std::max(0.0, Y.col(k).dot(B * Y.col(k))));
      if (after > 1e-10 * before && after > 0) {
        Y.col(k) /= after;
        break;
      }
      for (Eigen::Index i = 0; i < Y.rows(); ++i) Y(i, k) = g(rng);
    }
  }
}

bool factor(const Matrix& A, const Matrix& B, double sigma, Eigen::LLT<Matrix>& llt) {
  llt.compute(A - sigma * B);
  if (llt.info() != Eigen::Success) return false;
  // Reject factorizations whose diagonal collapsed: the shift sits on an eigenvalue.
  const Vector d = llt.matrixLLT().diagonal();
  return d.minCoeff() > 1e-14 * std::max(1.0, d.maxCoeff());
}

}  // namespace

double relative_residual(const Matrix& A, const Matrix& B, double lambda, const Vector& x) {
  const Vector Ax = A * x;
  const Vector Bx = B * x;
  const double floor = 1e-8 * A.norm() * x.norm();
  const double denom = std::max({Ax.norm(), std::abs(lambda) * Bx.norm(), floor, 1e-300});
  return (Ax - lambda * Bx).norm() / denom;
}

SpectralResult extremal_eig(const Matrix& A, const Matrix& B, Which which, const EigOptions& options) {
  check_pencil(A, B);
  const Eigen::Index n = A.rows();
  {
    Eigen::LLT<Matrix> lb(B);
    if (lb.info() != Eigen::Success) throw NumericalError("B is not positive definite (Cholesky failed)");
  }
  const double sign = which == Which::Smallest ? 1.0 : -1.0;
  const Matrix As = sign * A;

  // Shift strictly below the smallest eigenvalue of (As, B).
  const double scale = std::max(As.norm() / std::max(B.norm(), 1e-300), 1e-300);
  double sigma = -1e-3 * scale;
  Eigen::LLT<Matrix> llt;
  int tries = 0;
  while (!factor(As, B, sigma, llt)) {
    sigma *= 2.0;
    if (++tries > 200) throw NumericalError("could not find a shift below the spectrum");
  }

  const Eigen::Index p = std::min<Eigen::Index>(std::max(options.block, 1), n);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> g;
  Matrix X(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = g(rng);
  b_orthonormalize(X, B, rng);

  SpectralResult res;
  res.size = static_cast<int>(n);
  double theta_prev = std::numeric_limits<double>::infinity();
  double theta = 0.0;
  Vector x;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 1; it <= options.max_iter; ++it) {
    Matrix Y = llt.solve(B * X);
    b_orthonormalize(Y, B, rng);
    Matrix H = Y.transpose() * As * Y;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    X = Y * es.eigenvectors();
    theta = es.eigenvalues()(0);
    x = X.col(0);
    res.iterations = it;
    const double r = relative_residual(As, B, theta, x);
    if (r <= options.tol) break;
    // Rounding floor reached: stop once the residual stops improving.
    if (r < 0.5 * best) {
      best = r;
      stalled = 0;
    } else if (++stalled >= 30 && best <= kResidualContract) {
      break;
    }
    if (n == p) {
      // The block spans the whole space: Rayleigh-Ritz is exact.
      break;
    }
    // Move the shift toward θ once it has settled; θ >= λ_min always.
    if (std::abs(theta - theta_prev) <= 1e-2 * std::abs(theta - sigma)) {
      double step = 0.9 * (theta - sigma);
      for (int k = 0; k < 6 && step > 0; ++k, step *= 0.5) {
        Eigen::LLT<Matrix> trial;
        if (factor(As, B, sigma + step, trial)) {
          sigma += step;
          llt = std::move(trial);
          break;
        }
      }
    }
    theta_prev = theta;
  }

  x /= std::sqrt(x.dot(B * x));
  res.lambda = sign * theta;
  res.vector = x;
  res.residual = relative_residual(A, B, res.lambda, x);
  if (!(res.residual <= kResidualContract)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "eigensolver residual contract missed: residual %.3g after %d iterations", res.residual,
                  res.iterations);
    throw NumericalError(buf);
  }
  return res;
}

std::pair<Vector, Matrix> jacobi_eigen(Matrix A) {
  const Eigen::Index n = A.rows();
  Matrix V = Matrix::Identity(n, n);
  const double total = A.squaredNorm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i) off += A(i, j) * A(i, j);
    if (off <= 1e-32 * total || off == 0.0) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A ← Jᵀ A J on columns then rows p, q
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return A(a, a) < A(b, b); });
  Vector w(n);
  Matrix Vs(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    w(k) = A(order[k], order[k]);
    Vs.col(k) = V.col(order[k]);
  }
  return {w, Vs};
}

Vector eig_oracle(const Matrix& A, const Matrix& B) {
  check_pencil(A, B);
  if (A.rows() > 500) throw ValidationError("eig_oracle is limited to size 500");
  const auto [bw, bv] = jacobi_eigen(B);
  if (!(bw.minCoeff() > 0)) throw NumericalError("B is not positive definite");
  const Matrix Bh = bv * bw.cwiseSqrt().cwiseInverse().asDiagonal() * bv.transpose();
  Matrix C = Bh * A * Bh;
  C = 0.5 * (C + C.transpose()).eval();
  return jacobi_eigen(C).first;
}

}  // namespace kornlab::spectra
