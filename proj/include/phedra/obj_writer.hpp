#pragma once

#include <array>
#include <string>
#include <vector>

#include "phedra/grid.hpp"

namespace phedra {

/// Indexed face list of a quad grid. Coincident vertices of the two
/// boundary rows are shared, so degenerate quads become triangles.
struct IndexedMesh {
  std::vector<Point3> vertices;          // row-major: row 0 first, columns inside a row
  std::vector<std::vector<int>> faces;   // zero-based, 3 or 4 corners
};

IndexedMesh index_grid(const VertexGrid& grid);

// Axial grid (m+1) x n extended by the apex rows S_0 and S_n.
VertexGrid with_apex_rows(const VertexGrid& axial, double z_first, double z_last);

// Fixed 9-decimal formatting; byte-identical output for identical input.
std::string format_obj(const VertexGrid& grid);

// Throws IoError.
void write_obj(const VertexGrid& grid, const std::string& path);

}  // namespace phedra
