#pragma once

#include <string>
#include <vector>

#include "phedra/construction.hpp"
#include "phedra/deformation.hpp"

namespace phedra {

struct ArchivedFrame {
  double t = 0.0;
  VertexGrid vertices;
  double isometry = 0.0;   // max relative edge-length deviation
  double planarity = 0.0;  // max normalized quad defect
};

struct FrameArchive {
  double t_star = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<int> branch;
  std::vector<ArchivedFrame> frames;
};

FrameArchive record_sweep(const PHedronMesh& mesh, const DeformationPlan& plan, const FlexionInterval& interval,
                          int frames);

// archive.json: t values, branch vector and per-frame diagnostics.
std::string archive_json(const FrameArchive& archive);

// Writes frame_0000.obj, frame_0001.obj, ... and archive.json into dir,
// creating it when needed. Throws IoError.
void write_archive(const FrameArchive& archive, const std::string& dir);

}  // namespace phedra
