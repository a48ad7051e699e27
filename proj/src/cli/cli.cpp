#include "kornlab/cli/cli.hpp"

#include "kornlab/calculus/poly_field.hpp"
#include "kornlab/cli/report.hpp"
#include "kornlab/cli/specs.hpp"
#include "kornlab/elasticity/equilibrium.hpp"
#include "kornlab/flow/flow.hpp"
#include "kornlab/geometry/domains.hpp"
#include "kornlab/geometry/mesh_io.hpp"
#include "kornlab/rigid/kernel.hpp"
#include "kornlab/spectra/estimators.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace kornlab::cli {

namespace {

using geometry::Mesh;

// Thrown after a report was written whose checks failed.
struct ContractMissed {
  std::string what;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << text)) throw ValidationError("cannot write '" + path + "'");
}

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json vec_json(const Eigen::Ref<const Vector>& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json motion_json(const rigid::RigidMotion& r) {
  return {{"rotation", vec_json(r.rotation())}, {"translation", vec_json(r.translation())}};
}

// Options that name output files do not take part in the input digest.
bool is_output_option(const std::string& a) {
  for (const char* o : {"-o", "--output", "--csv", "--trace", "--table", "--report"}) {
    if (a == o) return true;
  }
  return false;
}

std::string argv_digest(const std::vector<std::string>& args) {
  std::string canon;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (is_output_option(args[i])) {
      ++i;
      continue;
    }
    const auto eq = args[i].find('=');
    if (eq != std::string::npos && args[i].rfind("--", 0) == 0 && is_output_option(args[i].substr(0, eq))) continue;
    canon += args[i];
    canon.push_back('\0');
  }
  return sha256_hex(canon);
}

struct LoadedMesh {
  std::string path;
  std::string digest;
  Mesh mesh;
};

LoadedMesh load(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return {path, sha256_hex(text), geometry::load_mesh(text)};
  } catch (const ValidationError& e) {
    throw ValidationError("mesh '" + path + "': " + e.what());
  }
}

Json mesh_summary(const LoadedMesh& m) {
  return {{"file", m.path},
          {"digest", "sha256:" + m.digest},
          {"dim", m.mesh.dim()},
          {"vertices", m.mesh.num_vertices()},
          {"cells", m.mesh.num_cells()},
          {"boundary_facets", m.mesh.num_boundary_facets()}};
}

bool all_checks_pass(const Json& j) {
  if (j.is_object()) {
    if (j.contains("pass") && j["pass"].is_boolean() && j.contains("tolerance") && !j["pass"].get<bool>()) return false;
    for (const auto& [k, v] : j.items())
      if (!all_checks_pass(v)) return false;
  } else if (j.is_array()) {
    for (const auto& v : j)
      if (!all_checks_pass(v)) return false;
  }
  return true;
}

struct Context {
  std::vector<std::string> argv;
  std::ostream& out;
  std::string output;  // -o target, empty for `out`
};

// Wraps a command body: times it, assembles and validates the report, emits it.
void emit(Context& ctx, const std::string& name, const std::string& digest,
          const std::function<Json()>& body, bool fail_on_checks) {
  const auto t0 = std::chrono::steady_clock::now();
  Json results = body();
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const Json report = make_report(name, ctx.argv, digest, std::move(results), ms);
  const auto problems = validate_report(report);
  if (!problems.empty()) throw NumericalError("invalid report: " + problems.front());
  if (ctx.output.empty()) {
    ctx.out << dump_report(report);
  } else {
    write_file(ctx.output, dump_report(report));
  }
  if (fail_on_checks && !all_checks_pass(report["results"])) throw ContractMissed{name + ": a check exceeded its tolerance"};
}

spectra::SpectralResult estimate(const std::string& which, const Mesh& m, const spectra::EstimatorOptions& o) {
  if (which == "korn1") return spectra::korn_first_constant(m, o);
  if (which == "korn1-nobc") return spectra::korn_nobc_constant(m, o);
  if (which == "korn2") return spectra::korn_second_constant(m, o);
  if (which == "poincare") return spectra::poincare_mixed_constant(m, o);
  if (which == "poincare-ela") return spectra::poincare_elasticity_constant(m, o);
  if (which == "infsup") return spectra::infsup_constant(m, o);
  throw ValidationError("unknown estimator '" + which + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kornlab: Korn, Poincare and inf-sup constants on simplicial meshes"};
  app.name("kornlab");
  app.require_subcommand(1);
  Context ctx{args, out, {}};
  std::function<void()> action;

  // mesh gen
  auto* mesh_cmd = app.add_subcommand("mesh", "mesh utilities");
  mesh_cmd->require_subcommand(1);
  auto* gen = mesh_cmd->add_subcommand("gen", "generate a catalog mesh");
  std::string domain, labels = "all-t", report_path;
  int n = 0;
  double phi1 = -std::numbers::pi / 2, phi2 = std::numbers::pi / 2, radius = 1.0;
  gen->add_option("--domain", domain, "square|cube|disk|ball|halfcylinder|sector")->required();
  gen->add_option("--n", n, "refinement level")->required()->check(CLI::PositiveNumber);
  gen->add_option("--labels", labels, "all-t|all-n|top-bottom-t|sides-t|radial-t");
  gen->add_option("--phi1", phi1, "sector start angle");
  gen->add_option("--phi2", phi2, "sector end angle");
  gen->add_option("--radius", radius, "sector radius");
  gen->add_option("-o,--output", ctx.output, "mesh file")->required();
  gen->add_option("--report", report_path, "report file (default: stdout)");
  gen->callback([&] {
    action = [&] {
      geometry::DomainSpec spec;
      spec.kind = geometry::parse_domain(domain);
      spec.n = n;
      spec.labels = geometry::label_rule(labels);
      spec.phi1 = phi1;
      spec.phi2 = phi2;
      spec.radius = radius;
      const Mesh m = geometry::generate_mesh(spec);
      const std::string text = geometry::save_mesh(m);
      write_file(ctx.output, text);
      const std::string digest = sha256_hex(text);
      const std::string mesh_path = ctx.output;
      ctx.output = report_path;
      emit(ctx, "mesh gen", digest, [&] {
        int nt = 0;
        for (const auto& f : m.boundary()) nt += f.label == geometry::BoundaryLabel::Tangential;
        return Json{{"domain", geometry::to_string(spec.kind)},
                    {"n", n},
                    {"labels", labels},
                    {"mesh", mesh_summary({mesh_path, digest, m})},
                    {"tangential_facets", nt},
                    {"normal_facets", static_cast<int>(m.num_boundary_facets()) - nt},
                    {"volume", m.volume()}};
      }, false);
    };
  });

  // constants
  auto* constants = app.add_subcommand("constants", "estimate an inequality constant");
  std::vector<std::string> mesh_files;
  std::string which, csv_path;
  spectra::EstimatorOptions eo;
  bool no_deflate = false;
  constants->add_option("--mesh", mesh_files, "mesh file (repeatable)")->required();
  constants->add_option("--which", which, "estimator")
      ->required()
      ->check(CLI::IsMember({"korn1", "korn1-nobc", "korn2", "poincare", "poincare-ela", "infsup"}));
  constants->add_option("--tol", eo.eig.tol, "eigensolver residual tolerance")->check(CLI::PositiveNumber);
  constants->add_option("--kernel-tol", eo.kernel_tol, "kernel detection tolerance")->check(CLI::PositiveNumber);
  constants->add_option("--seed", eo.eig.seed, "eigensolver start-block seed");
  constants->add_flag("--no-deflate", no_deflate, "korn1: do not orthogonalize against K");
  constants->add_flag("--full-norm", eo.full_norm, "infsup: full H1 velocity norm");
  constants->add_option("--csv", csv_path, "table of constants per mesh");
  constants->add_option("-o,--output", ctx.output, "report file");
  constants->callback([&] {
    action = [&] {
      eo.deflate = !no_deflate;
      std::vector<LoadedMesh> meshes;
      std::string digests;
      for (const auto& f : mesh_files) {
        meshes.push_back(load(f));
        digests += meshes.back().digest;
      }
      const std::string digest = meshes.size() == 1 ? meshes[0].digest : sha256_hex(digests);
      std::string csv = "mesh,dim,vertices,cells,size,constant,lambda,residual,iterations\n";
      emit(ctx, "constants", digest, [&] {
        Json rows = Json::array();
        for (const auto& lm : meshes) {
          spectra::SpectralResult r;
          try {
            r = estimate(which, lm.mesh, eo);
          } catch (const NumericalError& e) {
            throw NumericalError("mesh '" + lm.path + "': " + e.what());
          }
          Json extras = Json::object();
          for (const auto& [k, v] : r.extras) extras[k] = v;
          rows.push_back({{"mesh", mesh_summary(lm)},
                          {"constant", r.constant},
                          {"lambda", r.lambda},
                          {"size", r.size},
                          {"iterations", r.iterations},
                          {"residual", check(r.residual, spectra::kResidualContract)},
                          {"extras", extras}});
          csv += lm.path + "," + std::to_string(lm.mesh.dim()) + "," + std::to_string(lm.mesh.num_vertices()) + "," +
                 std::to_string(lm.mesh.num_cells()) + "," + std::to_string(r.size) + "," + number(r.constant) + "," +
                 number(r.lambda) + "," + number(r.residual) + "," + std::to_string(r.iterations) + "\n";
        }
        return Json{{"which", which},
                    {"options",
                     {{"tol", eo.eig.tol},
                      {"kernel_tol", eo.kernel_tol},
                      {"seed", eo.eig.seed},
                      {"deflate", eo.deflate},
                      {"full_norm", eo.full_norm}}},
                    {"estimates", rows}};
      }, true);
      if (!csv_path.empty()) write_file(csv_path, csv);
    };
  });

  // kernel
  auto* kernel = app.add_subcommand("kernel", "rigid-motion kernel, axis and boundary classification");
  std::string kernel_mesh;
  double kernel_tol = 1e-8, classify_tol = 1e-9;
  kernel->add_option("--mesh", kernel_mesh, "mesh file")->required();
  kernel->add_option("--tol", kernel_tol, "relative singular-value threshold")->check(CLI::PositiveNumber);
  kernel->add_option("--classify-tol", classify_tol, "facet classification tolerance")->check(CLI::PositiveNumber);
  kernel->add_option("-o,--output", ctx.output, "report file");
  kernel->callback([&] {
    action = [&] {
      const LoadedMesh lm = load(kernel_mesh);
      emit(ctx, "kernel", lm.digest, [&] {
        const Mesh& m = lm.mesh;
        const auto K = rigid::compute_kernel_K(m, kernel_tol);
        Json basis = Json::array();
        for (std::size_t k = 0; k < K.basis.size(); ++k) {
          Json b = motion_json(K.basis[k]);
          b["residual"] = K.residuals[k];
          basis.push_back(b);
        }
        Json consts = Json::array();
        for (const Vec& c : rigid::compute_constant_kernel(m, kernel_tol)) consts.push_back(vec_json(c));
        Json res{{"mesh", mesh_summary(lm)},
                 {"kernel_dim", K.gradient_basis.size()},
                 {"rigid_dim", K.basis.size()},
                 {"tolerance", K.tolerance},
                 {"singular_values", vec_json(K.singular_values)},
                 {"basis", basis},
                 {"constant_kernel", {{"dim", consts.size()}, {"basis", consts}}}};
        if (!K.gradient_basis.empty()) {
          // the admissible motion with the largest rotational part
          rigid::RigidMotion r = K.basis.front();
          for (const auto& b : K.basis)
            if (b.rotation().norm() > r.rotation().norm()) r = b;
          if (m.dim() == 3 && !r.is_constant()) {
            // sign fixed so that the axis direction's largest entry is positive
            Eigen::Index imax;
            r.sigma().cwiseAbs().maxCoeff(&imax);
            if (r.sigma()(imax) < 0) r = r * -1.0;
            const auto axis = rigid::detect_axis(r);
            const auto mixed = rigid::classify_mixed(m, r, classify_tol);
            double worst = 0.0;
            for (const auto& f : mixed.facets) worst = std::max(worst, f.residual);
            res["axis"] = {{"direction", vec_json(axis.direction)},
                           {"point", vec_json(axis.point)},
                           {"omega", axis.omega},
                           {"pitch", axis.pitch},
                           {"valid", axis.valid}};
            res["classification"] = {{"facets", mixed.facets.size()},
                                     {"failures", mixed.failures},
                                     {"all_pass", mixed.all_pass},
                                     {"max_residual", worst}};
          } else if (m.dim() == 2 && !r.is_constant()) {
            const double w = r.omega();
            res["center"] = vec_json(make_vec({-r.translation()(1) / w, r.translation()(0) / w}));
          }
        }
        return res;
      }, false);
    };
  });

  // flow
  auto* flow_cmd = app.add_subcommand("flow", "integrate the flow of a rigid motion");
  std::string field_spec, start_spec, boundary_spec, trace_path;
  double T = 0, dt = 0, inv_tol = 1e-8;
  flow_cmd->add_option("--field", field_spec, "const:<x,y,z> | rot:sigma=..;b=..;omega=..")->required();
  flow_cmd->add_option("--start", start_spec, "start point x,y[,z]")->required();
  flow_cmd->add_option("--T", T, "horizon")->required();
  flow_cmd->add_option("--dt", dt, "step size")->required();
  flow_cmd->add_option("--boundary", boundary_spec, "kind:key=value;...");
  flow_cmd->add_option("--tol", inv_tol, "invariance tolerance")->check(CLI::PositiveNumber);
  flow_cmd->add_option("--trace", trace_path, "trajectory CSV");
  flow_cmd->add_option("-o,--output", ctx.output, "report file");
  flow_cmd->callback([&] {
    action = [&] {
      const Vec start = parse_point(start_spec, "start point");
      const auto r = parse_field(field_spec, static_cast<int>(start.size()));
      std::optional<geometry::AnalyticBoundary> boundary;
      if (!boundary_spec.empty()) boundary = parse_boundary(boundary_spec);
      flow::FlowTrace tr;
      emit(ctx, "flow", argv_digest(args), [&] {
        tr = flow::integrate_flow(r, start, T, dt, boundary ? &*boundary : nullptr);
        Json res{{"field", motion_json(r)},
                 {"omega", r.omega()},
                 {"start", vec_json(start)},
                 {"T", T},
                 {"dt", dt},
                 {"steps", tr.points.size() - 1},
                 {"endpoint", vec_json(tr.points.back())},
                 {"analytic_endpoint", vec_json(flow::analytic_flow(r, start, T))},
                 {"closure_error", tr.closure_error}};
        if (boundary) res["invariance"] = check(*tr.max_deviation, inv_tol);
        if (!r.is_constant()) {
          res["axis_distance"] = {{"start", flow::distance_to_axis(r, start)},
                                  {"end", flow::distance_to_axis(r, tr.points.back())}};
        }
        return res;
      }, false);
      if (!trace_path.empty()) write_file(trace_path, flow::trace_csv(tr));
    };
  });

  // identity
  auto* identity = app.add_subcommand("identity", "second-derivative identity on random polynomial fields");
  int id_dim = 0, id_degree = 0, trials = 100;
  std::uint64_t id_seed = 1;
  double id_tol = 1e-12;
  identity->add_option("--dim", id_dim, "2 or 3")->required()->check(CLI::Range(2, 3));
  identity->add_option("--degree", id_degree, "polynomial degree")->required()->check(CLI::Range(0, calculus::kMaxDegree));
  identity->add_option("--trials", trials, "random fields")->check(CLI::PositiveNumber);
  identity->add_option("--seed", id_seed, "random seed");
  identity->add_option("--tol", id_tol, "coefficient tolerance")->check(CLI::PositiveNumber);
  identity->add_option("-o,--output", ctx.output, "report file");
  identity->callback([&] {
    action = [&] {
      emit(ctx, "identity", argv_digest(args), [&] {
        std::mt19937_64 rng(id_seed);
        double worst = 0.0, worst_lap = 0.0;
        for (int t = 0; t < trials; ++t) {
          const auto v = calculus::random_poly_field(id_dim, id_degree, rng);
          worst = std::max(worst, calculus::check_identity(v));
          worst_lap = std::max(worst_lap, calculus::check_laplacian_identity(v));
        }
        return Json{{"dim", id_dim},
                    {"degree", id_degree},
                    {"trials", trials},
                    {"seed", id_seed},
                    {"identity", check(worst, id_tol)},
                    {"laplacian", check(worst_lap, id_tol)}};
      }, true);
    };
  });

  // solve
  auto* solve = app.add_subcommand("solve", "pure-traction elasticity solve");
  std::string solve_mesh, load_spec, table_path;
  solve->add_option("--mesh", solve_mesh, "mesh file")->required();
  solve->add_option("--load", load_spec, "const:.. | rot:.. | affine:A=..;b=..")->required();
  solve->add_option("--table", table_path, "displacement CSV");
  solve->add_option("-o,--output", ctx.output, "report file");
  solve->callback([&] {
    action = [&] {
      const LoadedMesh lm = load(solve_mesh);
      const auto f = parse_load(load_spec, lm.mesh.dim());
      std::optional<elasticity::EquilibriumSolution> held;
      emit(ctx, "solve", sha256_hex(lm.digest + '\0' + load_spec), [&] {
        const auto& sol = held.emplace(elasticity::solve_equilibrium(lm.mesh, fem::interpolate(lm.mesh, f)));
        return Json{{"mesh", mesh_summary(lm)},
                    {"load", load_spec},
                    {"dofs", sol.displacement.size()},
                    {"energy", sol.energy},
                    {"residual", check(sol.residual, 1e-8)},
                    {"removed_rigid", motion_json(sol.removed_rigid)},
                    {"removed_norm", sol.removed_norm},
                    {"rigid_orthogonality", sol.rigid_orthogonality},
                    {"max_displacement", sol.displacement.size() ? sol.displacement.cwiseAbs().maxCoeff() : 0.0}};
      }, true);
      if (!table_path.empty()) write_file(table_path, elasticity::displacement_table(lm.mesh, held->displacement));
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  try {
    if (action) action();
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const ContractMissed& e) {
    err << "numerical failure: " << e.what << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace kornlab::cli
