#pragma once

#include "kornlab/geometry/mesh.hpp"

#include <functional>
#include <numbers>
#include <optional>
#include <string>

namespace kornlab::geometry {

enum class DomainKind { UnitSquare, UnitCube, UnitDisk, UnitBall, HalfCylinder, CylinderSector };

DomainKind parse_domain(const std::string& name);
std::string to_string(DomainKind kind);

/// What a labeling rule sees of a boundary facet.
struct FacetInfo {
  Vec centroid;
  Vec normal;              // flat facet normal, outward
  std::optional<int> patch;  // analytic patch id at the centroid, if a descriptor exists
  bool planar = true;        // whether that patch is flat
};

// Geometric predicate assigning Γt / Γn to a facet.  Returning nullopt leaves
// the facet unlabeled, which mesh generation reports as an error.
struct LabelRule {
  std::string name;
  std::function<std::optional<BoundaryLabel>(const FacetInfo&)> assign;
};

/// Named rules:
///   all-t         every facet tangential (Γt = Γ)
///   all-n         every facet normal (Γt = ∅)
///   top-bottom-t  facets with |ν·e_N| > 0.5 tangential (square: y = 0, 1)
///   sides-t       complement of top-bottom-t
///   radial-t      flat facets with |ν·e_N| <= 0.5 tangential, curved and
///                 top/bottom facets normal (the sector's radial faces)
LabelRule label_rule(const std::string& name);

struct DomainSpec {
  DomainKind kind = DomainKind::UnitSquare;
  int n = 1;
  LabelRule labels = label_rule("all-t");
  // Cylinder sector only; the half cylinder fixes these to (-pi/2, pi/2, 1).
  double phi1 = -std::numbers::pi / 2;
  double phi2 = std::numbers::pi / 2;
  double radius = 1.0;
};

/// Meshes a catalog domain.  Edge lengths scale like 1/n.  Curved boundary
/// vertices are placed exactly on the analytic surface.
Mesh generate_mesh(const DomainSpec& spec);

/// Applies a labeling rule to every boundary facet of an existing mesh.
Mesh apply_labels(const Mesh& mesh, const LabelRule& rule);

enum class NormalMode { Facet, Analytic };

/// Outward unit normal of boundary facet `facet`.  Analytic mode evaluates the
/// descriptor's exact normal at the facet centroid.
Vec boundary_normal(const Mesh& mesh, std::size_t facet, NormalMode mode);

/// Normal used for boundary conditions at one vertex of a facet: the normal
/// of the facet's analytic patch evaluated at the vertex itself, or the flat
/// facet normal when the mesh has no descriptor.
Vec vertex_normal(const Mesh& mesh, std::size_t facet, std::size_t vertex);

// One pointwise linear boundary condition: direction · v(x_vertex) = 0.
// Γt facets contribute their N-1 tangent directions at each vertex, Γn facets
// the normal.  weight = sqrt(facet measure / N), the vertex's share.
struct PointConstraint {
  int vertex;
  int facet;
  BoundaryLabel label;
  Vec direction;
  double weight;
};

/// All boundary conditions of a labeled mesh, every adjacent facet of a
/// vertex contributing separately.
std::vector<PointConstraint> boundary_point_constraints(const Mesh& mesh);

}  // namespace kornlab::geometry
