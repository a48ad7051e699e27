#include "kornlab/geometry/analytic_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace kornlab::geometry {

namespace {

constexpr const char* kAxisNames[3] = {"x", "y", "z"};

std::string lo_key(int axis) { return std::string("lo_") + kAxisNames[axis]; }
std::string hi_key(int axis) { return std::string("hi_") + kAxisNames[axis]; }

// Patch ids of a cylinder sector.
enum SectorPatch { kLateral = 0, kBottom = 1, kTop = 2, kRadial1 = 3, kRadial2 = 4 };

}  // namespace

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Box: return "BOX";
    case BoundaryKind::Disk: return "DISK";
    case BoundaryKind::Ball: return "BALL";
    case BoundaryKind::CylinderSector: return "CYLINDER_SECTOR";
  }
  return "?";
}

BoundaryKind parse_boundary_kind(const std::string& name) {
  if (name == "BOX") return BoundaryKind::Box;
  if (name == "DISK") return BoundaryKind::Disk;
  if (name == "BALL") return BoundaryKind::Ball;
  if (name == "CYLINDER_SECTOR") return BoundaryKind::CylinderSector;
  throw ValidationError("unknown boundary descriptor kind '" + name + "'");
}

AnalyticBoundary::AnalyticBoundary(BoundaryKind kind, int dim, std::map<std::string, double> params)
    : kind_(kind), dim_(dim), params_(std::move(params)) {
  for (const auto& [key, value] : params_) {
    if (!std::isfinite(value)) throw ValidationError("descriptor parameter '" + key + "' is not finite");
  }
}

AnalyticBoundary AnalyticBoundary::box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size() || lo.size() < 2 || lo.size() > 3) {
    throw ValidationError("box corners must both have dimension 2 or 3");
  }
  std::map<std::string, double> p;
  for (int i = 0; i < lo.size(); ++i) {
    if (!(lo(i) < hi(i))) throw ValidationError("box requires lo < hi on every axis");
    p[lo_key(i)] = lo(i);
    p[hi_key(i)] = hi(i);
  }
  return AnalyticBoundary(BoundaryKind::Box, static_cast<int>(lo.size()), std::move(p));
}

AnalyticBoundary AnalyticBoundary::disk(const Vec& center, double radius) {
  if (center.size() != 2) throw ValidationError("disk center must be 2D");
  if (!(radius > 0)) throw ValidationError("disk radius must be positive");
  return AnalyticBoundary(BoundaryKind::Disk, 2, {{"cx", center(0)}, {"cy", center(1)}, {"radius", radius}});
}

AnalyticBoundary AnalyticBoundary::ball(const Vec& center, double radius) {
  if (center.size() != 3) throw ValidationError("ball center must be 3D");
  if (!(radius > 0)) throw ValidationError("ball radius must be positive");
  return AnalyticBoundary(BoundaryKind::Ball, 3,
                          {{"cx", center(0)}, {"cy", center(1)}, {"cz", center(2)}, {"radius", radius}});
}

AnalyticBoundary AnalyticBoundary::cylinder_sector(double phi1, double phi2, double radius, double z0, double z1) {
  if (!(phi1 < phi2)) throw ValidationError("cylinder sector requires phi1 < phi2");
  if (phi2 - phi1 > 2 * std::numbers::pi) throw ValidationError("cylinder sector opening exceeds 2*pi");
  if (!(radius > 0)) throw ValidationError("cylinder sector radius must be positive");
  if (!(z0 < z1)) throw ValidationError("cylinder sector requires z0 < z1");
  return AnalyticBoundary(BoundaryKind::CylinderSector, 3,
                          {{"phi1", phi1}, {"phi2", phi2}, {"radius", radius}, {"z0", z0}, {"z1", z1}});
}

AnalyticBoundary AnalyticBoundary::from_params(BoundaryKind kind, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw ValidationError("descriptor " + to_string(kind) + " is missing parameter '" + key + "'");
    return it->second;
  };
  switch (kind) {
    case BoundaryKind::Box: {
      const int dim = params.count(lo_key(2)) ? 3 : 2;
      Vec lo(dim), hi(dim);
      for (int i = 0; i < dim; ++i) {
        lo(i) = get(lo_key(i));
        hi(i) = get(hi_key(i));
      }
      return box(lo, hi);
    }
    case BoundaryKind::Disk: return disk(make_vec({get("cx"), get("cy")}), get("radius"));
    case BoundaryKind::Ball: return ball(make_vec({get("cx"), get("cy"), get("cz")}), get("radius"));
    case BoundaryKind::CylinderSector:
      return cylinder_sector(get("phi1"), get("phi2"), get("radius"), get("z0"), get("z1"));
  }
  throw ValidationError("unsupported descriptor kind");
}

int AnalyticBoundary::patch_count() const {
  switch (kind_) {
    case BoundaryKind::Box: return 2 * dim_;
    case BoundaryKind::Disk:
    case BoundaryKind::Ball: return 1;
    case BoundaryKind::CylinderSector: return 5;
  }
  return 0;
}

bool AnalyticBoundary::patch_is_planar(int patch) const {
  switch (kind_) {
    case BoundaryKind::Box: return true;
    case BoundaryKind::Disk:
    case BoundaryKind::Ball: return false;
    case BoundaryKind::CylinderSector: return patch != kLateral;
  }
  return false;
}

double AnalyticBoundary::patch_distance(int patch, const Vec& x) const {
  switch (kind_) {
    case BoundaryKind::Box: {
      const int axis = patch / 2;
      return patch % 2 == 0 ? param(lo_key(axis).c_str()) - x(axis) : x(axis) - param(hi_key(axis).c_str());
    }
    case BoundaryKind::Disk:
      return std::hypot(x(0) - param("cx"), x(1) - param("cy")) - param("radius");
    case BoundaryKind::Ball:
      return std::sqrt(std::pow(x(0) - param("cx"), 2) + std::pow(x(1) - param("cy"), 2) +
                       std::pow(x(2) - param("cz"), 2)) -
             param("radius");
    case BoundaryKind::CylinderSector:
      switch (patch) {
        case kLateral: return std::hypot(x(0), x(1)) - param("radius");
        case kBottom: return param("z0") - x(2);
        case kTop: return x(2) - param("z1");
        case kRadial1: {
          const double phi = param("phi1");
          return std::sin(phi) * x(0) - std::cos(phi) * x(1);
        }
        case kRadial2: {
          const double phi = param("phi2");
          return -std::sin(phi) * x(0) + std::cos(phi) * x(1);
        }
      }
  }
  throw ValidationError("patch index out of range");
}

int AnalyticBoundary::patch_at(const Vec& x) const {
  if (x.size() != dim_) throw ValidationError("point dimension does not match the boundary descriptor");
  if (kind_ == BoundaryKind::CylinderSector) {
    const double d1 = patch_distance(kRadial1, x);
    const double d2 = patch_distance(kRadial2, x);
    const bool convex_wedge = param("phi2") - param("phi1") <= std::numbers::pi;
    int best = convex_wedge ? (d2 > d1 ? kRadial2 : kRadial1) : (d2 < d1 ? kRadial2 : kRadial1);
    double best_d = patch_distance(best, x);
    for (int p : {kLateral, kBottom, kTop}) {
      const double d = patch_distance(p, x);
      if (d > best_d) {
        best = p;
        best_d = d;
      }
    }
    return best;
  }
  int best = 0;
  double best_d = patch_distance(0, x);
  for (int p = 1; p < patch_count(); ++p) {
    const double d = patch_distance(p, x);
    if (d > best_d) {
      best = p;
      best_d = d;
    }
  }
  return best;
}

double AnalyticBoundary::signed_distance(const Vec& x) const {
  if (x.size() != dim_) throw ValidationError("point dimension does not match the boundary descriptor");
  switch (kind_) {
    case BoundaryKind::Box: {
      double outside = 0.0;
      double inside = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < dim_; ++i) {
        const double q = std::max(patch_distance(2 * i, x), patch_distance(2 * i + 1, x));
        outside += std::pow(std::max(q, 0.0), 2);
        inside = std::max(inside, q);
      }
      return std::sqrt(outside) + std::min(inside, 0.0);
    }
    case BoundaryKind::Disk:
    case BoundaryKind::Ball: return patch_distance(0, x);
    case BoundaryKind::CylinderSector: return patch_distance(patch_at(x), x);
  }
  return 0.0;
}

Vec AnalyticBoundary::patch_normal(int patch, const Vec& x) const {
  if (x.size() != dim_) throw ValidationError("point dimension does not match the boundary descriptor");
  if (patch < 0 || patch >= patch_count()) throw ValidationError("patch index out of range");
  Vec n = Vec::Zero(dim_);
  switch (kind_) {
    case BoundaryKind::Box:
      n(patch / 2) = patch % 2 == 0 ? -1.0 : 1.0;
      return n;
    case BoundaryKind::Disk:
      n(0) = x(0) - param("cx");
      n(1) = x(1) - param("cy");
      break;
    case BoundaryKind::Ball:
      n(0) = x(0) - param("cx");
      n(1) = x(1) - param("cy");
      n(2) = x(2) - param("cz");
      break;
    case BoundaryKind::CylinderSector:
      switch (patch) {
        case kLateral:
          n(0) = x(0);
          n(1) = x(1);
          break;
        case kBottom: n(2) = -1.0; return n;
        case kTop: n(2) = 1.0; return n;
        case kRadial1:
          n(0) = std::sin(param("phi1"));
          n(1) = -std::cos(param("phi1"));
          break;
        case kRadial2:
          n(0) = -std::sin(param("phi2"));
          n(1) = std::cos(param("phi2"));
          break;
      }
      break;
  }
  const double len = n.norm();
  if (!(len > 0)) throw NumericalError("normal undefined at the requested point");
  return n / len;
}

AnalyticBoundary AnalyticBoundary::scaled(double s) const {
  if (!(s > 0)) throw ValidationError("scale factor must be positive");
  std::map<std::string, double> p = params_;
  for (auto& [key, value] : p) {
    if (key != "phi1" && key != "phi2") value *= s;
  }
  return AnalyticBoundary(kind_, dim_, std::move(p));
}

}  // namespace kornlab::geometry
