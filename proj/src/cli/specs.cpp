#include "kornlab/cli/specs.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>

namespace kornlab::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  if (s.empty()) throw ValidationError("empty number in " + what);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ValidationError("invalid number '" + s + "' in " + what);
  }
  return x;
}

struct Spec {
  std::string kind;
  std::string body;
};

Spec split_kind(const std::string& spec, const std::string& what) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ValidationError(what + " '" + spec + "' lacks a '<kind>:' prefix");
  Spec s{trim(spec.substr(0, colon)), spec.substr(colon + 1)};
  std::transform(s.kind.begin(), s.kind.end(), s.kind.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::map<std::string, std::string> key_values(const std::string& body, const std::string& what,
                                              std::initializer_list<const char*> allowed) {
  std::map<std::string, std::string> kv;
  for (const std::string& item : split(body, ';')) {
    if (trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("expected key=value in " + what + ", got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ValidationError("unknown key '" + key + "' in " + what);
    }
    if (!kv.emplace(key, item.substr(eq + 1)).second) throw ValidationError("duplicate key '" + key + "' in " + what);
  }
  return kv;
}

Vec sized(const std::vector<double>& xs, const std::string& what) {
  if (xs.size() != 2 && xs.size() != 3) {
    throw ValidationError(what + " must have 2 or 3 components, got " + std::to_string(xs.size()));
  }
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

}  // namespace

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_double(item, what));
  return out;
}

Vec parse_point(const std::string& text, const std::string& what) { return sized(parse_numbers(text, what), what); }

rigid::RigidMotion parse_field(const std::string& spec, std::optional<int> dim) {
  const Spec s = split_kind(spec, "field spec");
  if (s.kind == "const") {
    const Vec a = parse_point(s.body, "const field");
    if (dim && a.size() != *dim) throw ValidationError("const field has dimension " + std::to_string(a.size()) +
                                                      ", expected " + std::to_string(*dim));
    return rigid::RigidMotion::constant(a);
  }
  if (s.kind != "rot") throw ValidationError("unknown field kind '" + s.kind + "' (expected const or rot)");

  const auto kv = key_values(s.body, "rot field", {"sigma", "b", "omega", "center"});
  if (!kv.count("omega")) throw ValidationError("rot field needs omega=<w>");
  const double omega = parse_double(kv.at("omega"), "rot field omega");
  if (kv.count("sigma")) {
    if (kv.count("center")) throw ValidationError("rot field: center is a 2D key, sigma a 3D key");
    const Vec sigma = parse_point(kv.at("sigma"), "rot field sigma");
    const Vec b = kv.count("b") ? parse_point(kv.at("b"), "rot field b") : Vec(Vec::Zero(3));
    if (sigma.size() != 3 || b.size() != 3) throw ValidationError("rot field with sigma needs 3D sigma and b");
    if (dim && *dim != 3) throw ValidationError("rot field with sigma is 3D, expected dimension " + std::to_string(*dim));
    return rigid::RigidMotion::from_axis(omega, sigma, b);
  }
  if (kv.count("b") && kv.count("center")) throw ValidationError("rot field: give either b or center, not both");
  if (dim && *dim != 2) throw ValidationError("3D rot field needs sigma=<x,y,z>");
  if (kv.count("center")) {
    const Vec c = parse_point(kv.at("center"), "rot field center");
    if (c.size() != 2) throw ValidationError("rot field center must be 2D");
    return rigid::RigidMotion::rotation_2d(omega, c);
  }
  const Vec b = kv.count("b") ? parse_point(kv.at("b"), "rot field b") : Vec(Vec::Zero(2));
  if (b.size() != 2) throw ValidationError("3D rot field needs sigma=<x,y,z>");
  return rigid::RigidMotion(make_vec({omega}), b);
}

VectorField parse_load(const std::string& spec, int dim) {
  const Spec s = split_kind(spec, "load spec");
  if (s.kind != "affine") {
    const rigid::RigidMotion r = parse_field(spec, dim);
    return [r](const Vec& x) { return r(x); };
  }
  const auto kv = key_values(s.body, "affine load", {"A", "b"});
  const std::size_t n = static_cast<std::size_t>(dim);
  Mat A = Mat::Zero(dim, dim);
  if (kv.count("A")) {
    const auto a = parse_numbers(kv.at("A"), "affine load A");
    if (a.size() != n * n) {
      throw ValidationError("affine load A needs " + std::to_string(n * n) + " entries, got " + std::to_string(a.size()));
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = a[i * n + j];
  }
  Vec b = Vec::Zero(dim);
  if (kv.count("b")) {
    b = parse_point(kv.at("b"), "affine load b");
    if (b.size() != dim) throw ValidationError("affine load b must have dimension " + std::to_string(dim));
  }
  return [A, b](const Vec& x) { return Vec(A * x + b); };
}

geometry::AnalyticBoundary parse_boundary(const std::string& spec) {
  Spec s = split_kind(spec, "boundary spec");
  std::transform(s.kind.begin(), s.kind.end(), s.kind.begin(), [](unsigned char c) { return std::toupper(c); });
  std::map<std::string, double> params;
  for (const std::string& item : split(s.body, ';')) {
    if (trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("expected key=value in boundary spec, got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    params[key] = parse_double(item.substr(eq + 1), "boundary parameter '" + key + "'");
  }
  auto boundary = geometry::AnalyticBoundary::from_params(geometry::parse_boundary_kind(s.kind), params);
  for (const auto& [key, value] : params) {
    if (!boundary.params().count(key)) throw ValidationError("unknown key '" + key + "' in boundary spec");
  }
  return boundary;
}

}  // namespace kornlab::cli
