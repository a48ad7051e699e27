#pragma once

#include "kornlab/core.hpp"
#include "kornlab/geometry/analytic_boundary.hpp"

#include <optional>
#include <span>
#include <vector>

namespace kornlab::geometry {

/// Γt facets carry a tangential condition (tangential trace vanishes),
/// Γn facets a normal one (normal trace vanishes).
enum class BoundaryLabel { Tangential, Normal };

struct BoundaryFacet {
  std::vector<int> vertices;
  BoundaryLabel label;

  bool operator==(const BoundaryFacet&) const = default;
};

// Simplicial mesh (triangles in 2D, tetrahedra in 3D) with labeled boundary.
//
// Immutable after construction.  The constructor validates every invariant:
// indices in range, no repeated vertex in a cell, positive signed volume,
// boundary facets exactly the facets owned by a single cell, each carrying
// exactly one label.  Violations throw ValidationError naming the offending
// cell or facet.
class Mesh {
 public:
  Mesh(int dim, std::vector<Vec> vertices, std::vector<std::vector<int>> cells,
       std::vector<BoundaryFacet> boundary, std::optional<AnalyticBoundary> descriptor = std::nullopt);

  int dim() const { return dim_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size() / (dim_ + 1); }
  std::size_t num_boundary_facets() const { return boundary_.size(); }

  const std::vector<Vec>& vertices() const { return vertices_; }
  const Vec& vertex(std::size_t i) const { return vertices_[i]; }
  std::span<const int> cell(std::size_t c) const {
    return {cells_.data() + c * (dim_ + 1), static_cast<std::size_t>(dim_ + 1)};
  }
  std::vector<std::vector<int>> cell_list() const;

  const std::vector<BoundaryFacet>& boundary() const { return boundary_; }
  const BoundaryFacet& facet(std::size_t f) const { return boundary_[f]; }
  /// The single cell incident to boundary facet f.
  std::size_t facet_cell(std::size_t f) const { return facet_cell_[f]; }
  /// Outward unit normal of the flat facet.
  const Vec& facet_normal(std::size_t f) const { return facet_normal_[f]; }
  double facet_measure(std::size_t f) const { return facet_measure_[f]; }
  Vec facet_centroid(std::size_t f) const;

  /// Boundary facets incident to vertex v (empty for interior vertices).
  const std::vector<int>& vertex_facets(std::size_t v) const { return vertex_facets_[v]; }
  bool is_boundary_vertex(std::size_t v) const { return !vertex_facets_[v].empty(); }

  double cell_volume(std::size_t c) const { return cell_volume_[c]; }
  Vec cell_centroid(std::size_t c) const;
  double volume() const;

  const std::optional<AnalyticBoundary>& descriptor() const { return descriptor_; }

  /// Copy with all vertices (and the descriptor) scaled by s about the origin.
  Mesh scaled(double s) const;
  /// Copy with new boundary labels, one per facet in boundary() order.
  Mesh relabeled(const std::vector<BoundaryLabel>& labels) const;

  bool operator==(const Mesh& other) const;

 private:
  void validate_and_index();

  int dim_;
  std::vector<Vec> vertices_;
  std::vector<int> cells_;
  std::vector<BoundaryFacet> boundary_;
  std::optional<AnalyticBoundary> descriptor_;

  std::vector<double> cell_volume_;
  std::vector<std::size_t> facet_cell_;
  std::vector<Vec> facet_normal_;
  std::vector<double> facet_measure_;
  std::vector<std::vector<int>> vertex_facets_;
};

/// Signed volume of the simplex spanned by the given points (dim+1 of them).
double simplex_signed_volume(std::span<const Vec> points);

/// Unit normal of the hyperplane through dim points (orientation arbitrary)
/// together with the facet measure.
std::pair<Vec, double> facet_normal_and_measure(std::span<const Vec> points);

/// Orthonormal basis of the plane orthogonal to unit vector n (dim-1 vectors).
std::vector<Vec> tangent_basis(const Vec& n);

}  // namespace kornlab::geometry
