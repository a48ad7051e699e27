#pragma once

#include "kornlab/geometry/analytic_boundary.hpp"
#include "kornlab/rigid/rigid_motion.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kornlab::cli {

/// "x,y,z" -> numbers.  Every entry must parse completely and be finite.
std::vector<double> parse_numbers(const std::string& text, const std::string& what);
Vec parse_point(const std::string& text, const std::string& what);

// Field grammar:
//   const:<x,y[,z]>
//   rot:sigma=<x,y,z>;b=<x,y,z>;omega=<w>     3D, b defaults to 0
//   rot:omega=<w>[;b=<x,y>|;center=<x,y>]     2D
// dim is needed only when the spec itself does not fix it.
rigid::RigidMotion parse_field(const std::string& spec, std::optional<int> dim = std::nullopt);

// Load grammar: the field grammar plus
//   affine:A=<a11,a12,..>;b=<..>              f(x) = A x + b, A row-major
using VectorField = std::function<Vec(const Vec&)>;
VectorField parse_load(const std::string& spec, int dim);

// Boundary grammar: <kind>:<key>=<value>;...  with the descriptor keys
//   box:lo_x=..;hi_x=..;lo_y=..;hi_y=..[;lo_z=..;hi_z=..]
//   disk:cx=..;cy=..;radius=..    ball:cx=..;cy=..;cz=..;radius=..
//   cylinder_sector:phi1=..;phi2=..;radius=..;z0=..;z1=..
geometry::AnalyticBoundary parse_boundary(const std::string& spec);

}  // namespace kornlab::cli
