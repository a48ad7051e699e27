#include "kornlab/rigid/rigid_motion.hpp"

#include <cmath>

namespace kornlab::rigid {

namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw ValidationError("unsupported dimension " + std::to_string(dim) + " (expected 2 or 3)");
}

}  // namespace

int so_dimension(int dim) {
  check_dim(dim);
  return dim * (dim - 1) / 2;
}

int rigid_dimension(int dim) {
  check_dim(dim);
  return dim * (dim + 1) / 2;
}

Mat skew_from_entries(const Vec& w) {
  if (w.size() == 1) {
    Mat S(2, 2);
    S << 0, -w(0), w(0), 0;
    return S;
  }
  if (w.size() != 3) throw ValidationError("skew entries must have size 1 (2D) or 3 (3D)");
  Mat S(3, 3);
  S << 0, -w(2), w(1), w(2), 0, -w(0), -w(1), w(0), 0;
  return S;
}

Vec skew_entries(const Mat& S) {
  if (S.rows() == 2) return make_vec({S(1, 0)});
  return make_vec({S(2, 1), S(0, 2), S(1, 0)});
}

Mat sym(const Mat& G) { return 0.5 * (G + G.transpose()); }
Mat skw(const Mat& G) { return 0.5 * (G - G.transpose()); }

RigidMotion::RigidMotion(Vec rotation, Vec translation)
    : rotation_(std::move(rotation)), translation_(std::move(translation)) {
  check_dim(static_cast<int>(translation_.size()));
  if (rotation_.size() != so_dimension(dim())) throw ValidationError("rotation entry count does not match dimension");
}

RigidMotion RigidMotion::from_skew(const Mat& S, const Vec& a) {
  if (S.rows() != S.cols() || S.rows() != a.size()) throw ValidationError("skew matrix and translation sizes differ");
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S + S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw ValidationError("matrix is not skew-symmetric");
  return RigidMotion(skew_entries(S), a);
}

RigidMotion RigidMotion::from_axis(double omega, const Vec& sigma, const Vec& b) {
  if (sigma.size() != 3 || b.size() != 3) throw ValidationError("axis form requires 3D vectors");
  const double len = sigma.norm();
  if (!(len > 0)) throw ValidationError("axis direction must be nonzero");
  return RigidMotion(Vec(omega * sigma / len), b);
}

RigidMotion RigidMotion::about_axis(const Vec& sigma, const Vec& point) {
  // σ∧(x − p) = σ∧x − σ∧p
  const Eigen::Vector3d s = sigma, p = point;
  return RigidMotion(sigma, Vec(-s.cross(p)));
}

RigidMotion RigidMotion::constant(const Vec& a) {
  return RigidMotion(Vec::Zero(so_dimension(static_cast<int>(a.size()))), a);
}

RigidMotion RigidMotion::rotation_2d(double omega, const Vec& center) {
  if (center.size() != 2) throw ValidationError("2D rotation needs a 2D center");
  return RigidMotion(make_vec({omega}), make_vec({omega * center(1), -omega * center(0)}));
}

Mat RigidMotion::skew() const { return skew_from_entries(rotation_); }

Vec RigidMotion::operator()(const Vec& x) const {
  if (x.size() != dim()) throw ValidationError("point dimension does not match rigid motion");
  return skew() * x + translation_;
}

double RigidMotion::omega() const { return dim() == 2 ? rotation_(0) : rotation_.norm(); }

Vec RigidMotion::sigma() const {
  if (dim() != 3) throw ValidationError("rotation axis direction is only defined in 3D");
  const double w = rotation_.norm();
  if (!(w > 0)) throw ValidationError("constant rigid motion has no rotation axis");
  return rotation_ / w;
}

RigidMotion RigidMotion::operator+(const RigidMotion& o) const {
  if (o.dim() != dim()) throw ValidationError("rigid motions of different dimension");
  return RigidMotion(rotation_ + o.rotation_, translation_ + o.translation_);
}

std::vector<Mat> so_basis(int dim) {
  const int m = so_dimension(dim);
  std::vector<Mat> out;
  for (int k = 0; k < m; ++k) {
    Vec w = Vec::Zero(m);
    w(k) = 1.0 / std::sqrt(2.0);
    out.push_back(skew_from_entries(w));
  }
  return out;
}

std::vector<RigidMotion> rigid_basis(int dim) {
  const int m = so_dimension(dim);
  std::vector<RigidMotion> out;
  for (int k = 0; k < m; ++k) {
    Vec w = Vec::Zero(m);
    w(k) = 1.0 / std::sqrt(2.0);
    out.emplace_back(w, Vec::Zero(dim));
  }
  for (int i = 0; i < dim; ++i) {
    Vec a = Vec::Zero(dim);
    a(i) = 1.0;
    out.emplace_back(Vec::Zero(m), a);
  }
  return out;
}

}  // namespace kornlab::rigid
