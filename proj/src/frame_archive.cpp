#include "phedra/frame_archive.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "phedra/analysis.hpp"
#include "phedra/errors.hpp"
#include "phedra/obj_writer.hpp"

namespace phedra {

namespace {

std::string frame_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.obj", k);
  return buf;
}

}  // namespace

FrameArchive record_sweep(const PHedronMesh& mesh, const DeformationPlan& plan, const FlexionInterval& interval,
                          int frames) {
  FrameArchive archive;
  archive.t_star = plan.t_star;
  archive.lower = interval.lower.t;
  archive.upper = interval.upper.t;
  archive.branch = plan.branch;
  for (FlexState& state : sweep(plan, interval, frames)) {
    ArchivedFrame frame;
    frame.t = state.t;
    frame.isometry = check_isometry(state, mesh);
    frame.planarity = check_planarity(state.general);
    frame.vertices = std::move(state.general);
    archive.frames.push_back(std::move(frame));
  }
  return archive;
}

std::string archive_json(const FrameArchive& archive) {
  nlohmann::ordered_json doc;
  doc["t_star"] = archive.t_star;
  doc["interval"] = {archive.lower, archive.upper};
  doc["branch"] = archive.branch;
  doc["frames"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < archive.frames.size(); ++k) {
    const ArchivedFrame& f = archive.frames[k];
    doc["frames"].push_back({{"file", frame_name(k)},
                             {"t", f.t},
                             {"max_isometry_deviation", f.isometry},
                             {"max_planarity_defect", f.planarity}});
  }
  return doc.dump(2) + "\n";
}

void write_archive(const FrameArchive& archive, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
  const std::filesystem::path root(dir);
  for (std::size_t k = 0; k < archive.frames.size(); ++k) {
    write_obj(archive.frames[k].vertices, (root / frame_name(k)).string());
  }
  const std::string path = (root / "archive.json").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << archive_json(archive);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace phedra
