#include "kornlab/flow/flow.hpp"

#include "kornlab/rigid/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace kornlab::flow {

using rigid::RigidMotion;

namespace {

// Positive orthonormal frame (σ1, σ2, σ).
std::pair<Eigen::Vector3d, Eigen::Vector3d> complete_frame(const Eigen::Vector3d& s) {
  const Eigen::Vector3d trial = std::abs(s.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d s1 = (trial - trial.dot(s) * s).normalized();
  return {s1, s.cross(s1)};
}

}  // namespace

Vec analytic_flow(const RigidMotion& r, const Vec& start, double t) {
  if (start.size() != r.dim()) throw ValidationError("start point dimension does not match the field");
  const Vec& b = r.translation();
  if (r.is_constant()) return start + t * b;
  const double w = r.omega();
  const double c = std::cos(w * t), s = std::sin(w * t);
  if (r.dim() == 2) {
    const double c1 = start(0) + b(1) / w;
    const double c2 = start(1) - b(0) / w;
    return make_vec({c1 * c - c2 * s - b(1) / w, c1 * s + c2 * c + b(0) / w});
  }
  const Eigen::Vector3d sigma = r.sigma();
  const auto [s1, s2] = complete_frame(sigma);
  const Eigen::Vector3d p = start, bb = b;
  const double b1 = bb.dot(s1), b2 = bb.dot(s2);
  const double c1 = p.dot(s1) + b2 / w;
  const double c2 = p.dot(s2) - b1 / w;
  const double x1 = c1 * c - c2 * s - b2 / w;
  const double x2 = c1 * s + c2 * c + b1 / w;
  const double x3 = p.dot(sigma) + t * bb.dot(sigma);
  return Vec(x1 * s1 + x2 * s2 + x3 * sigma);
}

FlowTrace integrate_flow(const RigidMotion& r, const Vec& start, double T, double dt,
                         const geometry::AnalyticBoundary* boundary) {
  if (!(T > 0)) throw ValidationError("flow horizon T must be positive");
  if (!(dt > 0)) throw ValidationError("flow step dt must be positive");
  if (start.size() != r.dim()) throw ValidationError("start point dimension does not match the field");
  if (!start.allFinite()) throw ValidationError("start point is not finite");
  if (boundary && boundary->dim() != r.dim()) throw ValidationError("boundary dimension does not match the field");

  const long steps = std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
  const double h = T / static_cast<double>(steps);
  auto f = [&](const Vec& x) {
    Vec y = r(x);
    if (!y.allFinite()) throw NumericalError("field evaluation produced a non-finite value");
    return y;
  };

  FlowTrace tr;
  tr.times.reserve(steps + 1);
  tr.points.reserve(steps + 1);
  tr.times.push_back(0.0);
  tr.points.push_back(start);
  Vec x = start;
  for (long k = 1; k <= steps; ++k) {
    const Vec k1 = f(x);
    const Vec k2 = f(x + 0.5 * h * k1);
    const Vec k3 = f(x + 0.5 * h * k2);
    const Vec k4 = f(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw NumericalError("flow trajectory left the finite range");
    tr.times.push_back(k == steps ? T : k * h);
    tr.points.push_back(x);
  }
  if (boundary) {
    double worst = 0.0;
    for (const Vec& p : tr.points) {
      const double d = boundary->signed_distance(p);
      tr.signed_distances.push_back(d);
      worst = std::max(worst, std::abs(d));
    }
    tr.max_deviation = worst;
  }
  tr.closure_error = (x - analytic_flow(r, start, T)).norm();
  return tr;
}

InvarianceReport invariance_report(const FlowTrace& trace, const geometry::AnalyticBoundary& boundary, double tol) {
  InvarianceReport rep;
  rep.tolerance = tol;
  for (const Vec& p : trace.points) {
    if (p.size() != boundary.dim()) throw ValidationError("trace and boundary dimensions differ");
    rep.max_deviation = std::max(rep.max_deviation, std::abs(boundary.signed_distance(p)));
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

double distance_to_axis(const RigidMotion& r, const Vec& x) {
  if (r.dim() == 2) {
    const double w = r.omega();
    if (w == 0.0) throw ValidationError("constant field has no center");
    // r(x) = w J (x − c) with w J c = −b  ⇒  c = (−b2, b1)/w
    const Vec c = make_vec({-r.translation()(1) / w, r.translation()(0) / w});
    return (x - c).norm();
  }
  const auto axis = rigid::detect_axis(r);
  const Vec d = x - axis.point;
  return (d - d.dot(axis.direction) * axis.direction).norm();
}

std::string trace_csv(const FlowTrace& trace) {
  std::ostringstream os;
  const int n = trace.points.empty() ? 0 : static_cast<int>(trace.points[0].size());
  os << 't';
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  os << ",signed_distance\n";
  char buf[40];
  for (std::size_t k = 0; k < trace.points.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", trace.times[k]);
    os << buf;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", trace.points[k](i));
      os << buf;
    }
    os << ',';
    if (k < trace.signed_distances.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", trace.signed_distances[k]);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace kornlab::flow
