#include "phedra/obj_writer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string_view>

#include "phedra/errors.hpp"

namespace phedra {

namespace {

void append_coord(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string_view s(buf);
  if (s.find_first_not_of("-0.") == std::string_view::npos && s.front() == '-') s.remove_prefix(1);
  out += s;
}

}  // namespace

IndexedMesh index_grid(const VertexGrid& grid) {
  IndexedMesh mesh;
  const std::size_t cols = grid.cols();
  const std::size_t rows = grid.rows();
  const double merge = 1e-12 * std::max(grid.scale(), 1.0);
  std::vector<int> index(cols * rows, -1);

  for (std::size_t r = 0; r < rows; ++r) {
    const bool boundary = r == 0 || r + 1 == rows;
    for (std::size_t c = 0; c < cols; ++c) {
      const Point3& p = grid.at(c, r);
      int shared = -1;
      if (boundary) {
        for (std::size_t k = 0; k < c && shared < 0; ++k) {
          if ((grid.at(k, r) - p).norm() <= merge) shared = index[k * rows + r];
        }
      }
      if (shared < 0) {
        shared = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(p);
      }
      index[c * rows + r] = shared;
    }
  }

  for (const GridQuad& q : grid_quads(cols, rows)) {
    std::vector<int> face;
    for (const auto& [c, r] : q.corners()) {
      const int id = index[c * rows + r];
      if (face.empty() || (face.back() != id && face.front() != id)) face.push_back(id);
    }
    if (face.size() >= 3) mesh.faces.push_back(std::move(face));
  }
  return mesh;
}

VertexGrid with_apex_rows(const VertexGrid& axial, double z_first, double z_last) {
  VertexGrid out(axial.cols(), axial.rows() + 2);
  for (std::size_t c = 0; c < axial.cols(); ++c) {
    out.at(c, 0) = axis_point(z_first);
    for (std::size_t r = 0; r < axial.rows(); ++r) out.at(c, r + 1) = axial.at(c, r);
    out.at(c, axial.rows() + 1) = axis_point(z_last);
  }
  return out;
}

std::string format_obj(const VertexGrid& grid) {
  const IndexedMesh mesh = index_grid(grid);
  std::string out = "# phedra quad mesh\n";
  for (const Point3& p : mesh.vertices) {
    out += "v ";
    append_coord(out, p.x());
    out += ' ';
    append_coord(out, p.y());
    out += ' ';
    append_coord(out, p.z());
    out += '\n';
  }
  for (const auto& face : mesh.faces) {
    out += 'f';
    for (int id : face) out += ' ' + std::to_string(id + 1);
    out += '\n';
  }
  return out;
}

void write_obj(const VertexGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << format_obj(grid);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace phedra
