#include "phedra/grid.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "phedra/errors.hpp"

namespace phedra {

double VertexGrid::scale() const {
  if (points_.empty()) return 0.0;
  Vec3 lo = points_.front();
  Vec3 hi = points_.front();
  for (const auto& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

double VertexGrid::max_deviation(const VertexGrid& other) const {
  if (cols_ != other.cols_ || rows_ != other.rows_) {
    throw Error(ErrorCode::GridMismatch, "vertex grids differ in size");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    worst = std::max(worst, (points_[k] - other.points_[k]).norm());
  }
  return worst;
}

std::vector<GridEdge> grid_edges(std::size_t cols, std::size_t rows) {
  std::vector<GridEdge> edges;
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t r = 0; r + 1 < rows; ++r) edges.push_back({i, r, i, r + 1});
  }
  for (std::size_t i = 0; i + 1 < cols; ++i) {
    for (std::size_t r = 0; r < rows; ++r) edges.push_back({i, r, i + 1, r});
  }
  return edges;
}

std::vector<double> edge_lengths(const VertexGrid& grid) {
  std::vector<double> lengths;
  for (const auto& e : grid_edges(grid.cols(), grid.rows())) {
    lengths.push_back((grid.at(e.col_a, e.row_a) - grid.at(e.col_b, e.row_b)).norm());
  }
  return lengths;
}

std::vector<GridQuad> grid_quads(std::size_t cols, std::size_t rows) {
  std::vector<GridQuad> quads;
  for (std::size_t i = 0; i + 1 < cols; ++i) {
    for (std::size_t r = 0; r + 1 < rows; ++r) quads.push_back({i, r});
  }
  return quads;
}

double quad_planarity_defect(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  const std::array<const Point3*, 4> q{&a, &b, &c, &d};
  double size = 0.0;
  for (int s = 0; s < 4; ++s) {
    for (int t = s + 1; t < 4; ++t) size = std::max(size, (*q[s] - *q[t]).norm());
  }
  if (size == 0.0) return 0.0;
  Eigen::Matrix3d m;
  m.col(0) = b - a;
  m.col(1) = c - a;
  m.col(2) = d - a;
  return std::abs(m.determinant()) / (size * size * size);
}

}  // namespace phedra
