#include "kornlab/geometry/domains.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace kornlab::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

struct RawMesh {
  int dim = 2;
  std::vector<Vec> vertices;
  std::vector<std::vector<int>> cells;
};

// Values within rounding of zero (cos(pi/2) and friends) are snapped so that
// points meant to lie on coordinate planes do so exactly.
double snap(double x) { return std::abs(x) < 1e-14 ? 0.0 : x; }

void orient(RawMesh& m) {
  std::vector<Vec> pts(m.dim + 1);
  for (auto& cell : m.cells) {
    for (int i = 0; i <= m.dim; ++i) pts[i] = m.vertices[cell[i]];
    if (simplex_signed_volume(pts) < 0) std::swap(cell[0], cell[1]);
  }
}

struct RawFacet {
  std::vector<int> vertices;
  std::size_t cell;
};

std::vector<RawFacet> extract_boundary(const RawMesh& m) {
  std::map<std::vector<int>, std::pair<int, RawFacet>> uses;
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& cell = m.cells[c];
    for (int skip = 0; skip <= m.dim; ++skip) {
      std::vector<int> f;
      for (int i = 0; i <= m.dim; ++i) {
        if (i != skip) f.push_back(cell[i]);
      }
      std::vector<int> key = f;
      std::sort(key.begin(), key.end());
      auto& entry = uses[key];
      if (entry.first++ == 0) entry.second = RawFacet{f, c};
    }
  }
  std::vector<RawFacet> out;
  for (auto& [key, entry] : uses) {
    if (entry.first == 1) out.push_back(entry.second);
  }
  return out;
}

Mesh finish(RawMesh raw, const LabelRule& rule, std::optional<AnalyticBoundary> descriptor) {
  orient(raw);
  const auto facets = extract_boundary(raw);
  std::vector<BoundaryFacet> boundary;
  boundary.reserve(facets.size());
  std::vector<Vec> pts(raw.dim);
  for (const auto& rf : facets) {
    for (int i = 0; i < raw.dim; ++i) pts[i] = raw.vertices[rf.vertices[i]];
    FacetInfo info;
    info.centroid = Vec::Zero(raw.dim);
    for (const auto& p : pts) info.centroid += p;
    info.centroid /= raw.dim;
    Vec cell_centroid = Vec::Zero(raw.dim);
    for (int v : raw.cells[rf.cell]) cell_centroid += raw.vertices[v];
    cell_centroid /= raw.dim + 1;
    info.normal = facet_normal_and_measure(pts).first;
    if (info.normal.dot(info.centroid - cell_centroid) < 0) info.normal = -info.normal;
    if (descriptor) {
      info.patch = descriptor->patch_at(info.centroid);
      info.planar = descriptor->patch_is_planar(*info.patch);
    }
    const auto label = rule.assign(info);
    if (!label) {
      std::string where;
      for (int v : rf.vertices) where += (where.empty() ? "" : ",") + std::to_string(v);
      throw ValidationError("labeling rule '" + rule.name + "' leaves boundary facet {" + where + "} unlabeled");
    }
    boundary.push_back({rf.vertices, *label});
  }
  return Mesh(raw.dim, std::move(raw.vertices), std::move(raw.cells), std::move(boundary), std::move(descriptor));
}

RawMesh unit_square(int n) {
  RawMesh m;
  m.dim = 2;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) m.vertices.push_back(make_vec({double(i) / n, double(j) / n}));
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v0 = id(i, j), v1 = id(i + 1, j), v2 = id(i, j + 1), v3 = id(i + 1, j + 1);
      m.cells.push_back({v0, v1, v3});
      m.cells.push_back({v0, v3, v2});
    }
  }
  return m;
}

// The six tetrahedra of a cube that all contain the diagonal from `origin`
// to the opposite corner; one per monotone lattice path.  Shared by every
// cube of a grid this gives a conforming, nested-under-bisection mesh.
void kuhn_split(std::vector<std::vector<int>>& cells, const std::array<int, 8>& corner) {
  static constexpr int kPaths[6][3] = {{1, 2, 4}, {1, 4, 2}, {2, 1, 4}, {2, 4, 1}, {4, 1, 2}, {4, 2, 1}};
  for (const auto& path : kPaths) {
    int mask = 0;
    std::vector<int> tet{corner[0]};
    for (int step : path) {
      mask |= step;
      tet.push_back(corner[mask]);
    }
    cells.push_back(std::move(tet));
  }
}

RawMesh unit_cube(int n) {
  RawMesh m;
  m.dim = 3;
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) m.vertices.push_back(make_vec({double(i) / n, double(j) / n, double(k) / n}));
    }
  }
  auto id = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        std::array<int, 8> corner{};
        for (int b = 0; b < 8; ++b) corner[b] = id(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
        kuhn_split(m.cells, corner);
      }
    }
  }
  return m;
}

// Cube [-1,1]^3 with 2n cells per axis, Kuhn split mirrored per octant so the
// diagonals point away from the center, then pushed radially onto the ball:
// x -> x |x|_inf / |x|_2 maps each cube shell onto a sphere.
RawMesh unit_ball(int n) {
  RawMesh m;
  m.dim = 3;
  const int s = 2 * n;
  for (int k = 0; k <= s; ++k) {
    for (int j = 0; j <= s; ++j) {
      for (int i = 0; i <= s; ++i) {
        Vec x = make_vec({-1.0 + double(i) / n, -1.0 + double(j) / n, -1.0 + double(k) / n});
        const double r2 = x.norm();
        if (r2 > 0) x *= x.cwiseAbs().maxCoeff() / r2;
        m.vertices.push_back(x);
      }
    }
  }
  auto id = [s](int i, int j, int k) { return (k * (s + 1) + j) * (s + 1) + i; };
  for (int k = 0; k < s; ++k) {
    for (int j = 0; j < s; ++j) {
      for (int i = 0; i < s; ++i) {
        // flip an axis when the cube lies on the negative side of it
        const int fi = i < n ? 1 : 0, fj = j < n ? 1 : 0, fk = k < n ? 1 : 0;
        std::array<int, 8> corner{};
        for (int b = 0; b < 8; ++b) {
          corner[b] = id(i + ((b & 1) ^ fi), j + (((b >> 1) & 1) ^ fj), k + (((b >> 2) & 1) ^ fk));
        }
        kuhn_split(m.cells, corner);
      }
    }
  }
  return m;
}

// Triangulates the band between two polar rings given as vertex ids with
// increasing angles (both rings spanning the same angular range).
void zip_rings(std::vector<std::vector<int>>& cells, const std::vector<int>& inner,
               const std::vector<double>& inner_angle, const std::vector<int>& outer,
               const std::vector<double>& outer_angle) {
  std::size_t i = 0, j = 0;
  const std::size_t mi = inner.size() - 1, mo = outer.size() - 1;
  while (i < mi || j < mo) {
    const bool advance_outer = i == mi || (j < mo && outer_angle[j + 1] <= inner_angle[i + 1]);
    if (advance_outer) {
      cells.push_back({inner[i], outer[j], outer[j + 1]});
      ++j;
    } else {
      cells.push_back({inner[i], outer[j], inner[i + 1]});
      ++i;
    }
  }
}

// Polar fan over angles [phi1, phi2] (periodic when the range is a full turn):
// apex at the origin, ring k at radius radius*k/n with k*per_ring segments.
RawMesh polar_fan(int n, double phi1, double phi2, double radius, int per_ring, bool periodic) {
  RawMesh m;
  m.dim = 2;
  m.vertices.push_back(make_vec({0.0, 0.0}));
  std::vector<int> prev{0};
  std::vector<double> prev_angle{phi1};
  for (int k = 1; k <= n; ++k) {
    const int segments = k * per_ring;
    const double r = radius * k / n;
    std::vector<int> ring;
    std::vector<double> angle;
    for (int s = 0; s <= segments; ++s) {
      const double phi = phi1 + (phi2 - phi1) * s / segments;
      angle.push_back(phi);
      if (periodic && s == segments) {
        ring.push_back(ring.front());
        continue;
      }
      ring.push_back(static_cast<int>(m.vertices.size()));
      m.vertices.push_back(make_vec({snap(r * std::cos(phi)), snap(r * std::sin(phi))}));
    }
    if (k == 1) {
      for (int s = 0; s < segments; ++s) m.cells.push_back({0, ring[s], ring[s + 1]});
    } else {
      zip_rings(m.cells, prev, prev_angle, ring, angle);
    }
    prev = std::move(ring);
    prev_angle = std::move(angle);
  }
  return m;
}

RawMesh extrude(const RawMesh& base, int layers, double z0, double z1) {
  RawMesh m;
  m.dim = 3;
  const auto nb = static_cast<int>(base.vertices.size());
  for (int l = 0; l <= layers; ++l) {
    const double z = z0 + (z1 - z0) * l / layers;
    for (const auto& p : base.vertices) m.vertices.push_back(make_vec({p(0), p(1), z}));
  }
  for (int l = 0; l < layers; ++l) {
    for (const auto& tri : base.cells) {
      std::array<int, 3> t{tri[0], tri[1], tri[2]};
      std::sort(t.begin(), t.end());
      const int a = l * nb + t[0], b = l * nb + t[1], c = l * nb + t[2];
      const int at = a + nb, bt = b + nb, ct = c + nb;
      // sorted-index prism split: quad-face diagonals agree between neighbors
      m.cells.push_back({a, b, c, at});
      m.cells.push_back({b, c, at, bt});
      m.cells.push_back({c, at, bt, ct});
    }
  }
  return m;
}

}  // namespace

DomainKind parse_domain(const std::string& name) {
  if (name == "square" || name == "unit-square") return DomainKind::UnitSquare;
  if (name == "cube" || name == "unit-cube") return DomainKind::UnitCube;
  if (name == "disk" || name == "unit-disk") return DomainKind::UnitDisk;
  if (name == "ball" || name == "unit-ball") return DomainKind::UnitBall;
  if (name == "halfcylinder" || name == "half-cylinder") return DomainKind::HalfCylinder;
  if (name == "sector" || name == "cylinder-sector") return DomainKind::CylinderSector;
  throw ValidationError("unknown domain name '" + name + "'");
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::UnitSquare: return "square";
    case DomainKind::UnitCube: return "cube";
    case DomainKind::UnitDisk: return "disk";
    case DomainKind::UnitBall: return "ball";
    case DomainKind::HalfCylinder: return "halfcylinder";
    case DomainKind::CylinderSector: return "sector";
  }
  return "?";
}

LabelRule label_rule(const std::string& name) {
  using L = BoundaryLabel;
  if (name == "all-t") return {name, [](const FacetInfo&) { return std::optional<L>(L::Tangential); }};
  if (name == "all-n") return {name, [](const FacetInfo&) { return std::optional<L>(L::Normal); }};
  if (name == "top-bottom-t" || name == "sides-t") {
    const bool top_bottom = name == "top-bottom-t";
    return {name, [top_bottom](const FacetInfo& f) {
              const bool vertical = std::abs(f.normal(f.normal.size() - 1)) > 0.5;
              return std::optional<L>(vertical == top_bottom ? L::Tangential : L::Normal);
            }};
  }
  if (name == "radial-t") {
    return {name, [](const FacetInfo& f) {
              const bool side = std::abs(f.normal(f.normal.size() - 1)) <= 0.5;
              return std::optional<L>(f.planar && side ? L::Tangential : L::Normal);
            }};
  }
  throw ValidationError("unknown labeling rule '" + name + "'");
}

Mesh generate_mesh(const DomainSpec& spec) {
  if (spec.n < 1) throw ValidationError("refinement level must be at least 1");
  switch (spec.kind) {
    case DomainKind::UnitSquare:
      return finish(unit_square(spec.n), spec.labels,
                    AnalyticBoundary::box(make_vec({0.0, 0.0}), make_vec({1.0, 1.0})));
    case DomainKind::UnitCube:
      return finish(unit_cube(spec.n), spec.labels,
                    AnalyticBoundary::box(make_vec({0.0, 0.0, 0.0}), make_vec({1.0, 1.0, 1.0})));
    case DomainKind::UnitDisk:
      return finish(polar_fan(spec.n, 0.0, 2 * kPi, 1.0, 8, true), spec.labels,
                    AnalyticBoundary::disk(make_vec({0.0, 0.0}), 1.0));
    case DomainKind::UnitBall:
      return finish(unit_ball(spec.n), spec.labels, AnalyticBoundary::ball(make_vec({0.0, 0.0, 0.0}), 1.0));
    case DomainKind::HalfCylinder:
    case DomainKind::CylinderSector: {
      const bool half = spec.kind == DomainKind::HalfCylinder;
      const double phi1 = half ? -kPi / 2 : spec.phi1;
      const double phi2 = half ? kPi / 2 : spec.phi2;
      const double radius = half ? 1.0 : spec.radius;
      auto descriptor = AnalyticBoundary::cylinder_sector(phi1, phi2, radius, 0.0, 1.0);
      const int per_ring = std::max(1, static_cast<int>(std::ceil(4.0 * (phi2 - phi1) / kPi - 1e-9)));
      const bool periodic = phi2 - phi1 >= 2 * kPi - 1e-12;
      const RawMesh base = polar_fan(spec.n, phi1, phi2, radius, per_ring, periodic);
      return finish(extrude(base, spec.n, 0.0, 1.0), spec.labels, std::move(descriptor));
    }
  }
  throw ValidationError("unsupported domain");
}

Mesh apply_labels(const Mesh& mesh, const LabelRule& rule) {
  std::vector<BoundaryLabel> labels;
  labels.reserve(mesh.num_boundary_facets());
  for (std::size_t f = 0; f < mesh.num_boundary_facets(); ++f) {
    FacetInfo info{mesh.facet_centroid(f), mesh.facet_normal(f), std::nullopt, true};
    if (mesh.descriptor()) {
      info.patch = mesh.descriptor()->patch_at(info.centroid);
      info.planar = mesh.descriptor()->patch_is_planar(*info.patch);
    }
    const auto label = rule.assign(info);
    if (!label) throw ValidationError("labeling rule '" + rule.name + "' leaves boundary facet " + std::to_string(f) + " unlabeled");
    labels.push_back(*label);
  }
  return mesh.relabeled(labels);
}

Vec boundary_normal(const Mesh& mesh, std::size_t facet, NormalMode mode) {
  if (facet >= mesh.num_boundary_facets()) throw ValidationError("facet index " + std::to_string(facet) + " is not a boundary facet");
  if (mode == NormalMode::Facet) return mesh.facet_normal(facet);
  if (!mesh.descriptor()) throw ValidationError("analytic normal requested but the mesh has no boundary descriptor");
  return mesh.descriptor()->exact_normal(mesh.facet_centroid(facet));
}

Vec vertex_normal(const Mesh& mesh, std::size_t facet, std::size_t vertex) {
  if (!mesh.descriptor()) return mesh.facet_normal(facet);
  const auto& desc = *mesh.descriptor();
  const int patch = desc.patch_at(mesh.facet_centroid(facet));
  return desc.patch_normal(patch, mesh.vertex(vertex));
}

std::vector<PointConstraint> boundary_point_constraints(const Mesh& mesh) {
  std::vector<PointConstraint> out;
  const int dim = mesh.dim();
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    for (int f : mesh.vertex_facets(v)) {
      const auto& facet = mesh.facet(f);
      const Vec n = vertex_normal(mesh, f, v);
      const double w = std::sqrt(mesh.facet_measure(f) / dim);
      if (facet.label == BoundaryLabel::Tangential) {
        for (const Vec& t : tangent_basis(n)) out.push_back({static_cast<int>(v), f, facet.label, t, w});
      } else {
        out.push_back({static_cast<int>(v), f, facet.label, n, w});
      }
    }
  }
  return out;
}

}  // namespace kornlab::geometry
