#include <doctest.h>

#include "kornlab/geometry/domains.hpp"
#include "kornlab/geometry/mesh_io.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace kornlab;
using namespace kornlab::geometry;

namespace {

Mesh make(DomainKind kind, int n, const std::string& rule = "all-t") {
  DomainSpec s;
  s.kind = kind;
  s.n = n;
  s.labels = label_rule(rule);
  return generate_mesh(s);
}

std::vector<std::array<double, 3>> cell_points(const Mesh& m, std::size_t c) {
  std::vector<std::array<double, 3>> p;
  for (int v : m.cell(c)) {
    std::array<double, 3> x{0, 0, 0};
    for (int i = 0; i < m.dim(); ++i) x[i] = m.vertex(v)(i);
    p.push_back(x);
  }
  return p;
}

}  // namespace

TEST_CASE("unit square n=1 is two triangles") {
  const Mesh m = make(DomainKind::UnitSquare, 1);
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_cells() == 2);
  CHECK(m.num_boundary_facets() == 4);
}

TEST_CASE("unit cube n=1 is six tetrahedra with twelve boundary triangles") {
  const Mesh m = make(DomainKind::UnitCube, 1);
  CHECK(m.num_vertices() == 8);
  CHECK(m.num_cells() == 6);
  CHECK(m.num_boundary_facets() == 12);
  CHECK(oracle::count_boundary_facets(m.cell_list()) == 12);
}

TEST_CASE("boundary facet count agrees with brute-force enumeration") {
  for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitCube, DomainKind::UnitDisk, DomainKind::UnitBall,
                    DomainKind::HalfCylinder}) {
    for (int n : {1, 2, 3}) {
      const Mesh m = make(kind, n, kind == DomainKind::HalfCylinder ? "radial-t" : "all-t");
      CHECK(oracle::count_boundary_facets(m.cell_list()) == m.num_boundary_facets());
    }
  }
}

TEST_CASE("disk boundary vertices lie on the unit circle") {
  const Mesh m = make(DomainKind::UnitDisk, 8, "all-n");
  REQUIRE(m.descriptor());
  CHECK(m.descriptor()->kind() == BoundaryKind::Disk);
  int count = 0;
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    if (!m.is_boundary_vertex(v)) continue;
    CHECK(std::abs(m.vertex(v).norm() - 1.0) <= 1e-12);
    ++count;
  }
  CHECK(count == 64);
}

TEST_CASE("cell volumes are positive and match an independent determinant") {
  for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitCube, DomainKind::UnitDisk, DomainKind::UnitBall,
                    DomainKind::HalfCylinder}) {
    const Mesh m = make(kind, 2, kind == DomainKind::HalfCylinder ? "radial-t" : "all-t");
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      const double ref = oracle::simplex_volume(cell_points(m, c), m.dim());
      CHECK(ref > 0);
      CHECK(m.cell_volume(c) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("polyhedral volumes are exact") {
  for (int n : {1, 2, 4}) {
    CHECK(std::abs(make(DomainKind::UnitSquare, n).volume() - 1.0) <= 1e-12);
    CHECK(std::abs(make(DomainKind::UnitCube, n).volume() - 1.0) <= 1e-12);
  }
}

TEST_CASE("disk volume converges at second order") {
  const double e1 = std::abs(make(DomainKind::UnitDisk, 4).volume() - std::numbers::pi);
  const double e2 = std::abs(make(DomainKind::UnitDisk, 8).volume() - std::numbers::pi);
  const double e3 = std::abs(make(DomainKind::UnitDisk, 16).volume() - std::numbers::pi);
  CHECK(e1 / e2 > 3.5);
  CHECK(e2 / e3 > 3.5);
  CHECK(e1 / e2 < 4.5);
}

TEST_CASE("half cylinder volume converges to pi/2") {
  const double e1 = std::abs(make(DomainKind::HalfCylinder, 2, "radial-t").volume() - std::numbers::pi / 2);
  const double e2 = std::abs(make(DomainKind::HalfCylinder, 4, "radial-t").volume() - std::numbers::pi / 2);
  CHECK(e2 < e1);
  CHECK(e1 / e2 > 3.0);
}

TEST_CASE("outward normals hold on every boundary facet") {
  for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitCube, DomainKind::UnitDisk, DomainKind::UnitBall,
                    DomainKind::HalfCylinder}) {
    const Mesh m = make(kind, 2, kind == DomainKind::HalfCylinder ? "radial-t" : "all-t");
    for (std::size_t f = 0; f < m.num_boundary_facets(); ++f) {
      const Vec d = m.facet_centroid(f) - m.cell_centroid(m.facet_cell(f));
      CHECK(m.facet_normal(f).dot(d) > 0);
      CHECK(std::abs(m.facet_normal(f).norm() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("facet normals on flat faces") {
  const Mesh sq = make(DomainKind::UnitSquare, 2);
  int hits = 0;
  for (std::size_t f = 0; f < sq.num_boundary_facets(); ++f) {
    if (std::abs(sq.facet_centroid(f)(1)) < 1e-14) {
      const Vec nu = boundary_normal(sq, f, NormalMode::Facet);
      CHECK(nu(0) == doctest::Approx(0.0));
      CHECK(nu(1) == doctest::Approx(-1.0));
      ++hits;
    }
  }
  CHECK(hits == 2);

  const Mesh cube = make(DomainKind::UnitCube, 2);
  hits = 0;
  for (std::size_t f = 0; f < cube.num_boundary_facets(); ++f) {
    if (std::abs(cube.facet_centroid(f)(2) - 1.0) < 1e-14) {
      const Vec nu = boundary_normal(cube, f, NormalMode::Facet);
      CHECK((nu - make_vec({0, 0, 1})).norm() <= 1e-12);
      CHECK((boundary_normal(cube, f, NormalMode::Analytic) - nu).norm() <= 1e-12);
      ++hits;
    }
  }
  CHECK(hits == 8);
}

TEST_CASE("analytic disk normal points along the centroid angle") {
  const Mesh m = make(DomainKind::UnitDisk, 5, "all-n");
  for (std::size_t f = 0; f < m.num_boundary_facets(); ++f) {
    const Vec c = m.facet_centroid(f);
    const double theta = std::atan2(c(1), c(0));
    const Vec nu = boundary_normal(m, f, NormalMode::Analytic);
    CHECK(std::abs(nu(0) - std::cos(theta)) <= 1e-12);
    CHECK(std::abs(nu(1) - std::sin(theta)) <= 1e-12);
  }
}

TEST_CASE("analytic normal without a descriptor is rejected") {
  const Mesh m = make(DomainKind::UnitSquare, 1);
  const Mesh bare(m.dim(), m.vertices(), m.cell_list(), m.boundary());
  CHECK_THROWS_AS(boundary_normal(bare, 0, NormalMode::Analytic), ValidationError);
  CHECK_NOTHROW(boundary_normal(bare, 0, NormalMode::Facet));
}

TEST_CASE("mesh text round trip") {
  for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitCube, DomainKind::UnitDisk, DomainKind::HalfCylinder}) {
    const Mesh m = make(kind, kind == DomainKind::UnitSquare ? 1 : 2, kind == DomainKind::HalfCylinder ? "radial-t" : "all-t");
    const Mesh back = load_mesh(save_mesh(m));
    CHECK(back == m);
    for (std::size_t v = 0; v < m.num_vertices(); ++v) CHECK(back.vertex(v) == m.vertex(v));
  }
}

TEST_CASE("negative cell volume names the cell") {
  const std::string text = R"({"dim": 2, "vertices": [[0,0],[1,0],[0,1]],
    "cells": [[0,2,1]],
    "boundary": [{"facet":[0,1],"label":"t"},{"facet":[1,2],"label":"t"},{"facet":[0,2],"label":"t"}]})";
  try {
    load_mesh(text);
    FAIL("expected an orientation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cell 0") != std::string::npos);
    CHECK(msg.find("orientation") != std::string::npos);
  }
}

TEST_CASE("unlabeled boundary facet is rejected") {
  const std::string missing = R"({"dim": 2, "vertices": [[0,0],[1,0],[0,1]],
    "cells": [[0,1,2]],
    "boundary": [{"facet":[0,1],"label":"t"},{"facet":[1,2],"label":"t"}]})";
  CHECK_THROWS_WITH_AS(load_mesh(missing), doctest::Contains("unlabeled"), ValidationError);
  const std::string bad_label = R"({"dim": 2, "vertices": [[0,0],[1,0],[0,1]],
    "cells": [[0,1,2]],
    "boundary": [{"facet":[0,1],"label":"t"},{"facet":[1,2],"label":"x"},{"facet":[0,2],"label":"n"}]})";
  CHECK_THROWS_AS(load_mesh(bad_label), ValidationError);
}

TEST_CASE("schema violations") {
  CHECK_THROWS_AS(load_mesh("not json"), ValidationError);
  CHECK_THROWS_AS(load_mesh(R"({"dim": 4, "vertices": [], "cells": [], "boundary": []})"), ValidationError);
  CHECK_THROWS_AS(load_mesh(R"({"dim": 2, "cells": [], "boundary": []})"), ValidationError);
  CHECK_THROWS_AS(load_mesh(R"({"dim": 2, "vertices": [[0,0],[1,0],[0,1]], "cells": [[0,1,7]], "boundary": []})"),
                  ValidationError);
  CHECK_THROWS_AS(load_mesh(R"({"dim": 2, "vertices": [[0,0],[1,0],[0,1]], "cells": [[0,1,1]], "boundary": []})"),
                  ValidationError);
}

TEST_CASE("unknown domain name") {
  CHECK_THROWS_AS(parse_domain("torus"), ValidationError);
  CHECK(parse_domain("cube") == DomainKind::UnitCube);
}

TEST_CASE("a rule that leaves facets unlabeled fails generation") {
  DomainSpec s;
  s.kind = DomainKind::UnitSquare;
  s.n = 2;
  s.labels = LabelRule{"only-bottom", [](const FacetInfo& f) -> std::optional<BoundaryLabel> {
                         if (f.normal(1) < -0.5) return BoundaryLabel::Tangential;
                         return std::nullopt;
                       }};
  CHECK_THROWS_WITH_AS(generate_mesh(s), doctest::Contains("unlabeled"), ValidationError);
}

TEST_CASE("labels on flat faces survive refinement") {
  // A facet's label depends only on which face it lies on.
  for (int n : {1, 2, 3, 4}) {
    const Mesh m = make(DomainKind::UnitCube, n, "top-bottom-t");
    for (std::size_t f = 0; f < m.num_boundary_facets(); ++f) {
      const Vec c = m.facet_centroid(f);
      const bool topbottom = std::abs(c(2)) < 1e-12 || std::abs(c(2) - 1.0) < 1e-12;
      CHECK((m.facet(f).label == BoundaryLabel::Tangential) == topbottom);
    }
  }
}

TEST_CASE("half cylinder radial-t labels the flat x1 = 0 face tangential") {
  const Mesh m = make(DomainKind::HalfCylinder, 3, "radial-t");
  for (std::size_t f = 0; f < m.num_boundary_facets(); ++f) {
    const Vec c = m.facet_centroid(f);
    const bool flat_side = std::abs(c(0)) < 1e-12;
    CHECK((m.facet(f).label == BoundaryLabel::Tangential) == flat_side);
  }
}

TEST_CASE("cube refinement is nested") {
  // Every coarse vertex reappears among the fine vertices.
  const Mesh coarse = make(DomainKind::UnitCube, 1);
  const Mesh fine = make(DomainKind::UnitCube, 2);
  for (const Vec& x : coarse.vertices()) {
    bool found = false;
    for (const Vec& y : fine.vertices()) found = found || (x - y).norm() < 1e-14;
    CHECK(found);
  }
}

TEST_CASE("analytic boundary signed distance") {
  const auto disk = AnalyticBoundary::disk(make_vec({0, 0}), 1.0);
  CHECK(disk.signed_distance(make_vec({0, 0})) == doctest::Approx(-1.0));
  CHECK(disk.signed_distance(make_vec({2, 0})) == doctest::Approx(1.0));
  const auto box = AnalyticBoundary::box(make_vec({0, 0, 0}), make_vec({1, 1, 1}));
  CHECK(box.signed_distance(make_vec({0.5, 0.5, 0.5})) == doctest::Approx(-0.5));
  CHECK(box.signed_distance(make_vec({0.5, 0.5, 1.0})) == doctest::Approx(0.0));
  const auto hc = AnalyticBoundary::cylinder_sector(-std::numbers::pi / 2, std::numbers::pi / 2, 1.0);
  CHECK(hc.signed_distance(make_vec({0.5, 0.0, 0.5})) < 0);
  CHECK(hc.signed_distance(make_vec({-0.5, 0.0, 0.5})) > 0);
  CHECK(std::abs(hc.signed_distance(make_vec({std::cos(0.3), std::sin(0.3), 0.5}))) < 1e-15);
}

TEST_CASE("ball surrogate boundary vertices lie on the sphere") {
  const Mesh m = make(DomainKind::UnitBall, 2);
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    if (m.is_boundary_vertex(v)) CHECK(std::abs(m.vertex(v).norm() - 1.0) <= 1e-12);
}
