#include "kornlab/geometry/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace kornlab::geometry {

namespace {

using FacetKey = std::array<int, 3>;

FacetKey make_key(std::span<const int> idx) {
  FacetKey key{-1, -1, -1};
  std::copy(idx.begin(), idx.end(), key.begin());
  std::sort(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(idx.size()));
  return key;
}

std::string describe(std::span<const int> idx) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << '}';
  return os.str();
}

struct FacetUse {
  int count = 0;
  std::size_t cell = 0;
};

}  // namespace

double simplex_signed_volume(std::span<const Vec> points) {
  const auto dim = static_cast<int>(points.size()) - 1;
  Mat J(dim, dim);
  for (int k = 0; k < dim; ++k) J.col(k) = points[k + 1] - points[0];
  return J.determinant() / (dim == 2 ? 2.0 : 6.0);
}

std::pair<Vec, double> facet_normal_and_measure(std::span<const Vec> points) {
  if (points.size() == 2) {
    const Vec t = points[1] - points[0];
    const double len = t.norm();
    return {make_vec({t(1) / len, -t(0) / len}), len};
  }
  const Eigen::Vector3d a = points[1] - points[0];
  const Eigen::Vector3d b = points[2] - points[0];
  const Eigen::Vector3d c = a.cross(b);
  const double len = c.norm();
  return {Vec(c / len), 0.5 * len};
}

std::vector<Vec> tangent_basis(const Vec& n) {
  if (n.size() == 2) return {make_vec({-n(1), n(0)})};
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e(axis) = 1.0;
  const Eigen::Vector3d nn = n;
  Eigen::Vector3d t1 = e - e.dot(nn) * nn;
  t1.normalize();
  const Eigen::Vector3d t2 = nn.cross(t1);
  return {Vec(t1), Vec(t2)};
}

Mesh::Mesh(int dim, std::vector<Vec> vertices, std::vector<std::vector<int>> cells,
           std::vector<BoundaryFacet> boundary, std::optional<AnalyticBoundary> descriptor)
    : dim_(dim), vertices_(std::move(vertices)), boundary_(std::move(boundary)), descriptor_(std::move(descriptor)) {
  if (dim_ != 2 && dim_ != 3) throw ValidationError("mesh dimension must be 2 or 3, got " + std::to_string(dim_));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    if (static_cast<int>(cell.size()) != dim_ + 1) {
      throw ValidationError("cell " + std::to_string(c) + " has " + std::to_string(cell.size()) +
                            " vertices, expected " + std::to_string(dim_ + 1));
    }
    cells_.insert(cells_.end(), cell.begin(), cell.end());
  }
  validate_and_index();
}

void Mesh::validate_and_index() {
  const auto nv = static_cast<int>(vertices_.size());
  if (nv == 0 || cells_.empty()) throw ValidationError("mesh has no vertices or no cells");
  if (descriptor_ && descriptor_->dim() != dim_) throw ValidationError("descriptor dimension does not match mesh");

  for (int v = 0; v < nv; ++v) {
    if (vertices_[v].size() != dim_) throw ValidationError("vertex " + std::to_string(v) + " has wrong dimension");
    if (!vertices_[v].allFinite()) throw ValidationError("vertex " + std::to_string(v) + " is not finite");
  }

  const std::size_t ncells = num_cells();
  cell_volume_.resize(ncells);
  std::map<FacetKey, FacetUse> facets;
  std::vector<Vec> pts(dim_ + 1);
  for (std::size_t c = 0; c < ncells; ++c) {
    const auto idx = cell(c);
    for (int i = 0; i <= dim_; ++i) {
      if (idx[i] < 0 || idx[i] >= nv) {
        throw ValidationError("cell " + std::to_string(c) + " references vertex " + std::to_string(idx[i]) +
                              " out of range");
      }
      for (int j = 0; j < i; ++j) {
        if (idx[i] == idx[j]) throw ValidationError("cell " + std::to_string(c) + " repeats vertex " + std::to_string(idx[i]));
      }
      pts[i] = vertices_[idx[i]];
    }
    cell_volume_[c] = simplex_signed_volume(pts);
    if (!(cell_volume_[c] > 0)) {
      throw ValidationError("cell " + std::to_string(c) + " " + describe(idx) +
                            " has non-positive signed volume (orientation error)");
    }
    for (int skip = 0; skip <= dim_; ++skip) {
      std::array<int, 3> f{};
      int k = 0;
      for (int i = 0; i <= dim_; ++i) {
        if (i != skip) f[k++] = idx[i];
      }
      auto& use = facets[make_key({f.data(), static_cast<std::size_t>(dim_)})];
      if (++use.count > 2) {
        throw ValidationError("facet " + describe({f.data(), static_cast<std::size_t>(dim_)}) +
                              " is shared by more than two cells");
      }
      use.cell = c;
    }
  }

  std::map<FacetKey, std::size_t> labeled;
  facet_cell_.resize(boundary_.size());
  facet_normal_.resize(boundary_.size());
  facet_measure_.resize(boundary_.size());
  vertex_facets_.assign(nv, {});
  std::vector<Vec> fpts(dim_);
  for (std::size_t f = 0; f < boundary_.size(); ++f) {
    const auto& bf = boundary_[f];
    if (static_cast<int>(bf.vertices.size()) != dim_) {
      throw ValidationError("boundary facet " + std::to_string(f) + " has wrong vertex count");
    }
    for (int v : bf.vertices) {
      if (v < 0 || v >= nv) throw ValidationError("boundary facet " + std::to_string(f) + " references vertex out of range");
    }
    const FacetKey key = make_key(bf.vertices);
    const auto it = facets.find(key);
    if (it == facets.end() || it->second.count != 1) {
      throw ValidationError("boundary facet " + std::to_string(f) + " " + describe(bf.vertices) +
                            " is not a facet owned by exactly one cell");
    }
    if (!labeled.emplace(key, f).second) {
      throw ValidationError("boundary facet " + std::to_string(f) + " " + describe(bf.vertices) + " is listed twice");
    }
    facet_cell_[f] = it->second.cell;
    for (int i = 0; i < dim_; ++i) fpts[i] = vertices_[bf.vertices[i]];
    auto [n, measure] = facet_normal_and_measure(fpts);
    if (!(measure > 0)) throw ValidationError("boundary facet " + std::to_string(f) + " is degenerate");
    if (n.dot(facet_centroid(f) - cell_centroid(facet_cell_[f])) < 0) n = -n;
    facet_normal_[f] = n;
    facet_measure_[f] = measure;
    for (int v : bf.vertices) vertex_facets_[v].push_back(static_cast<int>(f));
  }
  for (const auto& [key, use] : facets) {
    if (use.count == 1 && !labeled.count(key)) {
      throw ValidationError("boundary facet " + describe({key.data(), static_cast<std::size_t>(dim_)}) +
                            " is unlabeled");
    }
  }
}

std::vector<std::vector<int>> Mesh::cell_list() const {
  std::vector<std::vector<int>> out(num_cells());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto idx = cell(c);
    out[c].assign(idx.begin(), idx.end());
  }
  return out;
}

Vec Mesh::facet_centroid(std::size_t f) const {
  Vec c = Vec::Zero(dim_);
  for (int v : boundary_[f].vertices) c += vertices_[v];
  return c / dim_;
}

Vec Mesh::cell_centroid(std::size_t c) const {
  Vec x = Vec::Zero(dim_);
  for (int v : cell(c)) x += vertices_[v];
  return x / (dim_ + 1);
}

double Mesh::volume() const {
  double total = 0.0;
  for (double v : cell_volume_) total += v;
  return total;
}

Mesh Mesh::scaled(double s) const {
  if (!(s > 0)) throw ValidationError("scale factor must be positive");
  std::vector<Vec> verts = vertices_;
  for (auto& v : verts) v *= s;
  std::optional<AnalyticBoundary> desc;
  if (descriptor_) desc = descriptor_->scaled(s);
  return Mesh(dim_, std::move(verts), cell_list(), boundary_, std::move(desc));
}

Mesh Mesh::relabeled(const std::vector<BoundaryLabel>& labels) const {
  if (labels.size() != boundary_.size()) throw ValidationError("label count does not match boundary facet count");
  std::vector<BoundaryFacet> b = boundary_;
  for (std::size_t f = 0; f < b.size(); ++f) b[f].label = labels[f];
  return Mesh(dim_, vertices_, cell_list(), std::move(b), descriptor_);
}

bool Mesh::operator==(const Mesh& other) const {
  if (dim_ != other.dim_ || vertices_.size() != other.vertices_.size()) return false;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] != other.vertices_[i]) return false;
  }
  return cells_ == other.cells_ && boundary_ == other.boundary_ && descriptor_ == other.descriptor_;
}

}  // namespace kornlab::geometry
