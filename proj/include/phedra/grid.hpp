#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "phedra/geometry.hpp"

namespace phedra {

/// Column-major vertex grid: column i (one profile plane), row r.
class VertexGrid {
 public:
  VertexGrid() = default;
  VertexGrid(std::size_t cols, std::size_t rows) : cols_(cols), rows_(rows), points_(cols * rows, Point3::Zero()) {}

  std::size_t cols() const { return cols_; }
  std::size_t rows() const { return rows_; }
  bool empty() const { return points_.empty(); }

  Point3& at(std::size_t col, std::size_t row) { return points_[col * rows_ + row]; }
  const Point3& at(std::size_t col, std::size_t row) const { return points_[col * rows_ + row]; }

  const std::vector<Point3>& points() const { return points_; }

  // Diagonal of the axis-aligned bounding box.
  double scale() const;

  double max_deviation(const VertexGrid& other) const;

 private:
  std::size_t cols_ = 0;
  std::size_t rows_ = 0;
  std::vector<Point3> points_;
};

struct GridEdge {
  std::size_t col_a, row_a, col_b, row_b;
};

// Vertical edges (inside a column) first, then transversal edges.
std::vector<GridEdge> grid_edges(std::size_t cols, std::size_t rows);

std::vector<double> edge_lengths(const VertexGrid& grid);

/// Quad [col, col+1] x [row, row+1]; corners in cyclic order.
struct GridQuad {
  std::size_t col;
  std::size_t row;
  std::array<std::pair<std::size_t, std::size_t>, 4> corners() const {
    return {{{col, row}, {col + 1, row}, {col + 1, row + 1}, {col, row + 1}}};
  }
};

std::vector<GridQuad> grid_quads(std::size_t cols, std::size_t rows);

// |det(B-A, C-A, D-A)| divided by the cube of the largest corner distance.
double quad_planarity_defect(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

}  // namespace phedra
