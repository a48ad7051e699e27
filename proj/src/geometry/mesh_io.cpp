#include "kornlab/geometry/mesh_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace kornlab::geometry {

namespace {

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using nlohmann::json;

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(std::string("mesh file: missing field '") + key + "'");
  return obj.at(key);
}

std::vector<int> index_list(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw ValidationError("mesh file: " + what + " must be an array of integers");
  std::vector<int> out;
  for (const auto& x : arr) {
    if (!x.is_number_integer()) throw ValidationError("mesh file: " + what + " must contain integers only");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

std::string save_mesh(const Mesh& mesh) {
  std::ostringstream os;
  os << "{\n  \"dim\": " << mesh.dim() << ",\n  \"vertices\": [";
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    os << (v ? ",\n    [" : "\n    [");
    for (int i = 0; i < mesh.dim(); ++i) os << (i ? ", " : "") << number(mesh.vertex(v)(i));
    os << ']';
  }
  os << "\n  ],\n  \"cells\": [";
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    os << (c ? ",\n    [" : "\n    [");
    const auto idx = mesh.cell(c);
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? ", " : "") << idx[i];
    os << ']';
  }
  os << "\n  ],\n  \"boundary\": [";
  for (std::size_t f = 0; f < mesh.num_boundary_facets(); ++f) {
    const auto& bf = mesh.facet(f);
    os << (f ? ",\n    {\"facet\": [" : "\n    {\"facet\": [");
    for (std::size_t i = 0; i < bf.vertices.size(); ++i) os << (i ? ", " : "") << bf.vertices[i];
    os << "], \"label\": \"" << (bf.label == BoundaryLabel::Tangential ? 't' : 'n') << "\"}";
  }
  os << "\n  ]";
  if (const auto& d = mesh.descriptor()) {
    os << ",\n  \"descriptor\": {\"kind\": \"" << to_string(d->kind()) << "\", \"params\": {";
    bool first = true;
    for (const auto& [key, value] : d->params()) {
      os << (first ? "" : ", ") << '"' << key << "\": " << number(value);
      first = false;
    }
    os << "}}";
  }
  os << "\n}\n";
  return os.str();
}

Mesh load_mesh(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("mesh file: not valid structured text: ") + e.what());
  }
  const auto& jdim = require(doc, "dim");
  if (!jdim.is_number_integer()) throw ValidationError("mesh file: 'dim' must be an integer");
  const int dim = jdim.get<int>();
  if (dim != 2 && dim != 3) throw ValidationError("mesh file: 'dim' must be 2 or 3");

  const auto& jverts = require(doc, "vertices");
  if (!jverts.is_array()) throw ValidationError("mesh file: 'vertices' must be an array");
  std::vector<Vec> vertices;
  vertices.reserve(jverts.size());
  for (std::size_t v = 0; v < jverts.size(); ++v) {
    const auto& p = jverts[v];
    if (!p.is_array() || static_cast<int>(p.size()) != dim) {
      throw ValidationError("mesh file: vertex " + std::to_string(v) + " must have " + std::to_string(dim) + " coordinates");
    }
    Vec x(dim);
    for (int i = 0; i < dim; ++i) {
      if (!p[i].is_number()) throw ValidationError("mesh file: vertex " + std::to_string(v) + " has a non-numeric coordinate");
      x(i) = p[i].get<double>();
    }
    vertices.push_back(x);
  }

  const auto& jcells = require(doc, "cells");
  if (!jcells.is_array()) throw ValidationError("mesh file: 'cells' must be an array");
  std::vector<std::vector<int>> cells;
  cells.reserve(jcells.size());
  for (std::size_t c = 0; c < jcells.size(); ++c) cells.push_back(index_list(jcells[c], "cell " + std::to_string(c)));

  const auto& jbnd = require(doc, "boundary");
  if (!jbnd.is_array()) throw ValidationError("mesh file: 'boundary' must be an array");
  std::vector<BoundaryFacet> boundary;
  for (std::size_t f = 0; f < jbnd.size(); ++f) {
    const auto& rec = jbnd[f];
    const std::string where = "boundary record " + std::to_string(f);
    if (!rec.is_object()) throw ValidationError("mesh file: " + where + " must be a record");
    auto verts = index_list(require(rec, "facet"), where + " facet");
    const auto& jl = require(rec, "label");
    if (!jl.is_string() || (jl.get<std::string>() != "t" && jl.get<std::string>() != "n")) {
      throw ValidationError("mesh file: " + where + " has label other than \"t\" or \"n\"");
    }
    boundary.push_back({std::move(verts), jl.get<std::string>() == "t" ? BoundaryLabel::Tangential : BoundaryLabel::Normal});
  }

  std::optional<AnalyticBoundary> descriptor;
  if (doc.contains("descriptor") && !doc.at("descriptor").is_null()) {
    const auto& jd = doc.at("descriptor");
    const auto& jk = require(jd, "kind");
    if (!jk.is_string()) throw ValidationError("mesh file: descriptor kind must be a string");
    const auto& jp = require(jd, "params");
    if (!jp.is_object()) throw ValidationError("mesh file: descriptor params must be a record");
    std::map<std::string, double> params;
    for (const auto& [key, value] : jp.items()) {
      if (!value.is_number()) throw ValidationError("mesh file: descriptor parameter '" + key + "' must be a number");
      params[key] = value.get<double>();
    }
    descriptor = AnalyticBoundary::from_params(parse_boundary_kind(jk.get<std::string>()), params);
  }
  return Mesh(dim, std::move(vertices), std::move(cells), std::move(boundary), std::move(descriptor));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open mesh file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_mesh(ss.str());
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write mesh file '" + path + "'");
  out << save_mesh(mesh);
}

}  // namespace kornlab::geometry
