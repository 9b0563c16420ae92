// Command line front end: validate, construct, deform and analyze models.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phedra/analysis.hpp"
#include "phedra/construction.hpp"
#include "phedra/deformation.hpp"
#include "phedra/frame_archive.hpp"
#include "phedra/model_file.hpp"
#include "phedra/obj_writer.hpp"
#include "phedra/service.hpp"

namespace {

using namespace phedra;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Loaded {
  ModelFile file;
  Construction construction;
};

Loaded load(const std::string& path) {
  Loaded out;
  out.file = read_model_file(path);
  out.construction = construct(out.file.polylines(), out.file.construction_options());
  return out;
}

DeformationPlan plan_for(const Loaded& model, const std::vector<std::size_t>& flips) {
  DeformationPlan plan = build_plan(model.construction.axial, model.file.deformation_options());
  for (std::size_t strip : flips) plan = flip_strip(plan, strip);
  return plan;
}

void print_report(const ValidationReport& report) {
  std::printf("classification: %s\n", std::string(to_string(report.classification)).c_str());
  for (const Violation& w : report.warnings) std::printf("warning %s: %s\n", std::string(to_string(w.kind)).c_str(), w.message.c_str());
  for (const Violation& v : report.violations) {
    std::printf("error %s", std::string(to_string(v.kind)).c_str());
    if (v.index >= 0) std::printf("[%d]", v.index);
    std::printf(": %s\n", v.message.c_str());
  }
}

std::string owners_text(const FlexionLimit& l) {
  if (l.domain_endpoint) return "domain endpoint";
  std::string s = "owners=";
  for (std::size_t k = 0; k < l.owners.size(); ++k) s += (k ? "," : "") + std::to_string(l.owners[k]);
  return s;
}

int cmd_validate(const std::string& path) {
  const ModelFile file = read_model_file(path);
  const ValidationReport report = validate(file.polylines(), file.construction_options());
  print_report(report);
  std::printf("%s\n", report.ok() ? "valid" : "invalid");
  return report.ok() ? kExitOk : kExitValidation;
}

int cmd_construct(const std::string& path, const std::string& out, bool axial) {
  const Loaded model = load(path);
  const Construction& c = model.construction;
  if (axial) {
    write_obj(with_apex_rows(c.axial.grid, c.axial.apexes.front().z, c.axial.apexes.back().z), out);
  } else {
    write_obj(c.mesh.vertices, out);
  }
  std::printf("wrote %s: %zu faces, max planarity defect %.3g\n", out.c_str(), c.mesh.face_count(),
              c.mesh.max_planarity_defect());
  return kExitOk;
}

int cmd_limits(const std::string& path) {
  const Loaded model = load(path);
  const DeformationPlan plan = plan_for(model, {});
  const FlexionInterval iv = flexion_limits(plan);
  std::printf("t_* = %.12g\n", plan.t_star);
  std::printf("t_lambda = %.12g (%s)\n", iv.lower.t, owners_text(iv.lower).c_str());
  std::printf("t_mu = %.12g (%s)\n", iv.upper.t, owners_text(iv.upper).c_str());
  if (iv.zero_length) std::printf("note: a discriminant vanishes at t_* (flat configuration)\n");
  for (const FlexionLimit& l : iv.limits) std::printf("root t = %.12g %s\n", l.t, owners_text(l).c_str());
  return kExitOk;
}

int cmd_deform(const std::string& path, double t, const std::vector<std::size_t>& flips, const std::string& out) {
  const Loaded model = load(path);
  const DeformationPlan plan = plan_for(model, flips);
  const FlexState state = general_state_at(plan, t, plan.branch);
  write_obj(state.general, out);
  std::printf("wrote %s at t = %.12g, isometry deviation %.3g, planarity defect %.3g\n", out.c_str(), t,
              check_isometry(state, model.construction.mesh), check_planarity(state.general));
  return kExitOk;
}

int cmd_sweep(const std::string& path, int frames, const std::vector<std::size_t>& flips, const std::string& dir) {
  const Loaded model = load(path);
  const DeformationPlan plan = plan_for(model, flips);
  const FlexionInterval iv = flexion_limits(plan);
  const FrameArchive archive = record_sweep(model.construction.mesh, plan, iv, frames);
  write_archive(archive, dir);
  std::printf("wrote %zu frames over [%.12g, %.12g] to %s\n", archive.frames.size(), archive.lower, archive.upper,
              dir.c_str());
  return kExitOk;
}

int cmd_flatcheck(const std::string& path) {
  const Loaded model = load(path);
  const LinkageVelocityField field = first_order_flex(model.construction.axial);
  const ExpansionReport report = non_expansion_check(field, model.construction.axial);
  for (std::size_t i = 0; i < report.rates.size(); ++i) {
    for (std::size_t j = 0; j < report.rates[i].size(); ++j) {
      std::printf("e[%zu][%zu] = %.6g\n", i, j, report.rates[i][j]);
    }
  }
  std::printf("verdict: %s\n", to_string(report.verdict));
  return kExitOk;
}

int cmd_tube(const std::string& path) {
  const Loaded model = load(path);
  const TubeReport r = tube_check(model.construction.axial, model.file.deformation_options());
  std::printf("closed: %s\n", r.closed ? "yes" : "no");
  std::printf("class: %s\n", to_string(r.tube_class));
  if (r.tube_class == TubeClass::anti_parallelogram) {
    std::printf("symmetry line orthogonal to axis: %s\n", r.symmetry_orthogonal ? "yes" : "no");
  }
  return kExitOk;
}

int cmd_serve(int port) {
  DesignService service;
  ServiceHost host(service);
  const int bound = host.bind("127.0.0.1", port);
  std::printf("listening on http://127.0.0.1:%d/api/models\n", bound);
  std::fflush(stdout);
  host.listen();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct and flex P-hedral quad meshes"};
  app.require_subcommand(1);

  std::string file, out, dir;
  bool axial = false;
  double t = 0.0;
  int frames = 24;
  int port = phedra::default_port();
  std::vector<std::size_t> flips;

  auto* validate = app.add_subcommand("validate", "check a model file against all construction rules");
  validate->add_option("file", file, "model file")->required();

  auto* construct = app.add_subcommand("construct", "build the mesh and write it as OBJ");
  construct->add_option("file", file, "model file")->required();
  construct->add_option("-o,--output", out, "OBJ output path")->required();
  construct->add_flag("--axial", axial, "write the axial mesh instead of the general one");

  auto* limits = app.add_subcommand("limits", "print t_*, the flexion interval and all limits");
  limits->add_option("file", file, "model file")->required();

  auto* deform = app.add_subcommand("deform", "evaluate the deformation at a parameter");
  deform->add_option("file", file, "model file")->required();
  deform->add_option("--t", t, "deformation parameter")->required();
  deform->add_option("--flip-strip", flips, "toggle the branch of a strip (repeatable)");
  deform->add_option("-o,--output", out, "OBJ output path")->required();

  auto* sweep = app.add_subcommand("sweep", "write an animation of the flexion interval");
  sweep->add_option("file", file, "model file")->required();
  sweep->add_option("--frames", frames, "frame count")->check(CLI::Range(2, 100000));
  sweep->add_option("--flip-strip", flips, "toggle the branch of a strip (repeatable)");
  sweep->add_option("--out", dir, "output directory")->required();

  auto* flatcheck = app.add_subcommand("flatcheck", "first-order flexibility of a flat pattern");
  flatcheck->add_option("file", file, "model file")->required();

  auto* tube = app.add_subcommand("tube", "tube closure and classification");
  tube->add_option("file", file, "model file")->required();

  auto* serve = app.add_subcommand("serve", "run the JSON service");
  serve->add_option("--port", port, "listen port (PHEDRA_PORT overrides the default)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(file);
    if (*construct) return cmd_construct(file, out, axial);
    if (*limits) return cmd_limits(file);
    if (*deform) return cmd_deform(file, t, flips, out);
    if (*sweep) return cmd_sweep(file, frames, flips, dir);
    if (*flatcheck) return cmd_flatcheck(file);
    if (*tube) return cmd_tube(file);
    if (*serve) return cmd_serve(port);
  } catch (const phedra::ValidationError& e) {
    print_report(e.report());
    std::fprintf(stderr, "invalid model\n");
    return kExitValidation;
  } catch (const phedra::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    if (e.code() == phedra::ErrorCode::SchemaError || e.code() == phedra::ErrorCode::ValidationFailed ||
        e.code() == phedra::ErrorCode::ScissorRequiresAllPlus) {
      return kExitValidation;
    }
    return phedra::is_numeric_domain(e.code()) ? kExitNumeric : kExitOther;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  return kExitOther;
}
