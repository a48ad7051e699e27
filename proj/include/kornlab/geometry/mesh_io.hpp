#pragma once

#include "kornlab/geometry/mesh.hpp"

#include <string>

namespace kornlab::geometry {

// Mesh file: a JSON document
//
//   { "dim": 2,
//     "vertices": [[0, 0], [1, 0], ...],
//     "cells": [[0, 1, 3], ...],                       (0-based)
//     "boundary": [{"facet": [0, 1], "label": "t"}, ...],
//     "descriptor": {"kind": "BOX", "params": {"lo_x": 0, ...}} }   (optional)
//
// Coordinates are written with 17 significant digits so that a save/load
// round trip reproduces every vertex bit for bit.

std::string save_mesh(const Mesh& mesh);

/// Parses and re-validates.  Schema problems and invariant violations both
/// throw ValidationError naming the offending entry.
Mesh load_mesh(const std::string& text);

Mesh read_mesh_file(const std::string& path);
void write_mesh_file(const Mesh& mesh, const std::string& path);

}  // namespace kornlab::geometry
