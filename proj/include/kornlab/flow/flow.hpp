#pragma once

#include "kornlab/geometry/analytic_boundary.hpp"
#include "kornlab/rigid/rigid_motion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kornlab::flow {

struct FlowTrace {
  std::vector<double> times;  // strictly increasing, times[0] = 0
  std::vector<Vec> points;
  // Filled when a boundary is supplied: signed distance per sample and
  // the maximum of its absolute value.
  std::vector<double> signed_distances;
  std::optional<double> max_deviation;
  // |γ(T) − analytic_flow(r, p, T)|
  double closure_error = 0.0;
};

/// Classical RK4 with steps = ceil(T/dt) equal steps of size T/steps.
/// Throws ValidationError unless T > 0 and dt > 0, NumericalError when the
/// field produces non-finite values.
FlowTrace integrate_flow(const rigid::RigidMotion& r, const Vec& start, double T, double dt,
                         const geometry::AnalyticBoundary* boundary = nullptr);

/// Closed-form solution of γ' = r(γ), γ(0) = start.  With σ1, σ2 completing
/// σ to a positive orthonormal frame and b_i = <b, σ_i>:
///   s1 = c1 cos ωt − c2 sin ωt − b2/ω,  s2 = c1 sin ωt + c2 cos ωt + b1/ω,
///   s3 = <p, σ> + t <b, σ>.
/// 2D uses the first two with the signed ω.  ω = 0 gives start + t b.
Vec analytic_flow(const rigid::RigidMotion& r, const Vec& start, double t);

struct InvarianceReport {
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// max |signed_distance| over the trace points.
InvarianceReport invariance_report(const FlowTrace& trace, const geometry::AnalyticBoundary& boundary, double tol = 1e-8);

/// Distance of x from the axis of a 3D rotation (or from the center in 2D).
double distance_to_axis(const rigid::RigidMotion& r, const Vec& x);

/// CSV "t,x1,..,xN,signed_distance"; the last column is empty without a boundary.
std::string trace_csv(const FlowTrace& trace);

}  // namespace kornlab::flow
