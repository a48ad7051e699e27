#pragma once

#include "kornlab/core.hpp"

#include <vector>

namespace kornlab::rigid {

// Affine field r(x) = S x + a with S skew-symmetric.
//
// S is stored through its N(N-1)/2 independent entries: in 2D the single
// entry w with S = [[0, -w], [w, 0]]; in 3D the axial vector w with
// S x = w ∧ x.  In 3D, w = ω σ with ω = |w| >= 0 and unit σ.
class RigidMotion {
 public:
  RigidMotion(Vec rotation, Vec translation);

  static RigidMotion from_skew(const Mat& S, const Vec& a);
  /// r(x) = ω σ∧x + b  (σ is normalized).
  static RigidMotion from_axis(double omega, const Vec& sigma, const Vec& b);
  /// r(x) = σ∧(x − point)
  static RigidMotion about_axis(const Vec& sigma, const Vec& point);
  static RigidMotion constant(const Vec& a);
  /// 2D r(x) = ω (−(x2 − c2), x1 − c1)
  static RigidMotion rotation_2d(double omega, const Vec& center);

  int dim() const { return static_cast<int>(translation_.size()); }
  const Vec& rotation() const { return rotation_; }
  const Vec& translation() const { return translation_; }

  Mat skew() const;
  /// ∇r = Sᵀ (transpose-of-Jacobian convention).
  Mat gradient() const { return skew().transpose(); }
  Vec operator()(const Vec& x) const;
  bool is_constant(double tol = 0.0) const { return rotation_.cwiseAbs().maxCoeff() <= tol; }

  /// 3D: |w|.  2D: the signed entry w.
  double omega() const;
  /// 3D only: w/|w| (requires ω != 0).
  Vec sigma() const;

  RigidMotion operator*(double s) const { return RigidMotion(rotation_ * s, translation_ * s); }
  RigidMotion operator+(const RigidMotion& o) const;

 private:
  Vec rotation_;
  Vec translation_;
};

/// Skew matrix with the given independent entries (see RigidMotion).
Mat skew_from_entries(const Vec& w);
/// Inverse of skew_from_entries, using only the strictly lower triangle.
Vec skew_entries(const Mat& S);

Mat sym(const Mat& G);
Mat skw(const Mat& G);

/// Frobenius-orthonormal basis of 𝔰𝔬(N): N(N-1)/2 matrices.
std::vector<Mat> so_basis(int dim);
/// Basis of the rigid motions, orthonormal in the coefficient inner product
/// <S1,S2>_F + a1·a2: the so_basis rotations followed by the unit translations.
std::vector<RigidMotion> rigid_basis(int dim);

int so_dimension(int dim);
int rigid_dimension(int dim);

}  // namespace kornlab::rigid
