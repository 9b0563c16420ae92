#pragma once

#include <array>
#include <optional>
#include <vector>

#include "phedra/construction.hpp"
#include "phedra/geometry.hpp"
#include "phedra/grid.hpp"

// Independent reference computations. None of these call into the library's
// numerical code paths.
namespace phedra::oracle {

// Image under the homology with center (0, zc), axis z = (zp + zn) / 2 and
// the characteristic chosen so that (0, zp) goes to (0, zn); built from the
// generic form I + (mu - 1) c a^T / (a^T c).
std::array<double, 2> homology_image(double zp, double zc, double zn, double r, double z);

// Central scaling about (0, zc) with the ratio fixed by (0, zp) -> (0, zn).
std::array<double, 2> scaling_image(double zp, double zc, double zn, double r, double z);

// Classic trilateration in the frame spanned by the three centers.
std::optional<std::array<Point3, 2>> trilaterate(const Point3& p1, double r1, const Point3& p2, double r2,
                                                 const Point3& p3, double r3);

double point_line_distance(const Point3& p, const Point3& a, const Point3& b);

// |det(B-A, C-A, D-A)| over the cube of the largest distance from A.
double tetra_defect(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

// Every edge length of a column-major quad grid, vertical edges first.
std::vector<double> grid_edge_lengths(const VertexGrid& g);

// Checks every structural assumption of the input from scratch.
bool input_assumptions_hold(const ControlPolylines& cp);

}  // namespace phedra::oracle
