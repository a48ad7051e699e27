#pragma once

#include "kornlab/core.hpp"

#include <map>
#include <string>

namespace kornlab::geometry {

enum class BoundaryKind { Box, Disk, Ball, CylinderSector };

std::string to_string(BoundaryKind kind);
BoundaryKind parse_boundary_kind(const std::string& name);

// Exact description of a catalog domain's boundary, made of "patches"
// (box faces, a circle/sphere, the lateral/top/bottom/radial pieces of a
// cylinder sector).  signed_distance is negative inside, zero on the
// surface, positive outside.  For the box, disk and ball it is the true
// distance; for the sector it is the max of the per-patch plane/cylinder
// distances, which has the same zero set and sign and is 1-Lipschitz.
class AnalyticBoundary {
 public:
  static AnalyticBoundary box(const Vec& lo, const Vec& hi);
  static AnalyticBoundary disk(const Vec& center, double radius);
  static AnalyticBoundary ball(const Vec& center, double radius);
  // {(r cos φ, r sin φ, z) : phi1 < φ < phi2, 0 < r < radius, z0 < z < z1}
  static AnalyticBoundary cylinder_sector(double phi1, double phi2, double radius,
                                          double z0 = 0.0, double z1 = 1.0);

  /// Rebuilds a descriptor from its serialized parameter record.
  static AnalyticBoundary from_params(BoundaryKind kind, const std::map<std::string, double>& params);

  BoundaryKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::map<std::string, double>& params() const { return params_; }

  double signed_distance(const Vec& x) const;

  int patch_count() const;
  /// Patch whose signed distance is largest at x (the active surface piece).
  int patch_at(const Vec& x) const;
  bool patch_is_planar(int patch) const;
  /// Outward unit normal of the given patch's surface, evaluated at x.
  Vec patch_normal(int patch, const Vec& x) const;
  Vec exact_normal(const Vec& x) const { return patch_normal(patch_at(x), x); }

  AnalyticBoundary scaled(double s) const;

  bool operator==(const AnalyticBoundary& other) const {
    return kind_ == other.kind_ && dim_ == other.dim_ && params_ == other.params_;
  }

 private:
  AnalyticBoundary(BoundaryKind kind, int dim, std::map<std::string, double> params);
  double patch_distance(int patch, const Vec& x) const;
  double param(const char* key) const { return params_.at(key); }

  BoundaryKind kind_;
  int dim_;
  std::map<std::string, double> params_;
};

}  // namespace kornlab::geometry
