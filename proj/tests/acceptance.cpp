// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "phedra/analysis.hpp"
#include "phedra/model_file.hpp"
#include "phedra/obj_writer.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace phedra;
using namespace phedra::testing;
namespace fs = std::filesystem;

namespace {

constexpr int kModels = 20;
constexpr int kSamples = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

char buffer[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buffer, sizeof buffer, f, args...);
  return buffer;
}

std::vector<RandomModel>& random_models() {
  static std::vector<RandomModel> models = [] {
    ModelGenerator gen(20240607);
    std::vector<RandomModel> out;
    for (int k = 0; k < kModels; ++k) out.push_back(gen.next());
    return out;
  }();
  return models;
}

// Samples strictly inside the open flexion interval.
std::vector<double> interior_samples(const FlexionInterval& iv, int count) {
  std::vector<double> t;
  for (int k = 0; k < count; ++k) t.push_back(iv.lower.t + iv.length() * (k + 0.5) / count);
  return t;
}

Outcome reference_reproduction() {
  const Construction c = construct(fix1());
  const DeformationPlan plan = build_plan(c.axial);
  const FlexState s = state_at(plan, plan.t_star);
  double dev = 0.0;
  for (std::size_t i = 0; i < s.general.cols(); ++i) {
    for (std::size_t j = 0; j < s.general.rows(); ++j) {
      dev = std::max(dev, (s.general.at(i, j) - c.mesh.vertices.at(i, j)).norm());
    }
  }
  // By hand: the central scaling about S_1 = 2 with ratio (4 - 2) / (-1 - 2)
  // sends S_0 to S_2 = 4 and V_00 = (2, 0, 0) to (-4/3, 0, 10/3).
  const Point3 v01(-4.0 / 3.0, 0.0, 10.0 / 3.0);
  const double dv = (s.axial.at(0, 1) - v01).norm();
  const double ds = std::abs(s.apex_z[2] - 4.0);
  Outcome o;
  o.pass = plan.t_star == -1.0 && dev < 1e-10 && dv < 1e-12 && ds < 1e-12;
  o.detail = fmt("t_*=%.3g mesh deviation %.2e, V01 %.2e, S2 %.2e", plan.t_star, dev, dv, ds);
  return o;
}

Outcome isometry_sweep() {
  double worst = 0.0;
  for (const RandomModel& m : random_models()) {
    const std::vector<double> ref = oracle::grid_edge_lengths(m.construction.mesh.vertices);
    for (double t : interior_samples(m.interval, kSamples)) {
      const std::vector<double> now = oracle::grid_edge_lengths(state_at(m.plan, t).general);
      double longest = 0.0;
      for (double l : ref) longest = std::max(longest, l);
      for (std::size_t e = 0; e < ref.size(); ++e) {
        const double base = ref[e] > 1e-9 * longest ? ref[e] : longest;
        worst = std::max(worst, std::abs(now[e] - ref[e]) / base);
      }
    }
  }
  return {worst < 1e-8, fmt("%d models x %d samples, max relative drift %.2e", kModels, kSamples, worst)};
}

Outcome planarity_sweep() {
  double worst = 0.0;
  for (const RandomModel& m : random_models()) {
    for (double t : interior_samples(m.interval, kSamples)) {
      const VertexGrid g = state_at(m.plan, t).general;
      for (const GridQuad& q : grid_quads(g.cols(), g.rows())) {
        const auto c = q.corners();
        worst = std::max(worst, oracle::tetra_defect(g.at(c[0].first, c[0].second), g.at(c[1].first, c[1].second),
                                                     g.at(c[2].first, c[2].second), g.at(c[3].first, c[3].second)));
      }
    }
  }
  return {worst < 1e-8, fmt("max normalized quad defect %.2e", worst)};
}

Outcome cone_apexes() {
  double worst = 0.0;
  for (const RandomModel& m : random_models()) {
    for (double t : interior_samples(m.interval, kSamples)) {
      const FlexState s = state_at(m.plan, t);
      const double scale = s.axial.scale();
      for (std::size_t i = 0; i < s.axial.cols(); ++i) {
        for (std::size_t j = 0; j + 1 < s.axial.rows(); ++j) {
          const double d = oracle::point_line_distance(axis_point(s.apex_z[j + 1]), s.axial.at(i, j), s.axial.at(i, j + 1));
          worst = std::max(worst, d / scale);
        }
      }
    }
  }
  return {worst < 1e-9, fmt("max apex-to-edge-line distance %.2e x scale", worst)};
}

Outcome flexion_limits_criterion() {
  double worst = 0.0;
  int checked = 0, complex_raised = 0, endpoints = 0;
  std::vector<DeformationPlan> plans;
  plans.push_back(build_plan(construct(fix1()).axial));
  plans.push_back(build_plan(construct(fix1_three_columns()).axial));
  for (const RandomModel& m : random_models()) plans.push_back(m.plan);
  for (const DeformationPlan& plan : plans) {
    const FlexionInterval iv = flexion_limits(plan);
    for (const FlexionLimit* l : {&iv.lower, &iv.upper}) {
      if (l->domain_endpoint) {
        ++endpoints;
        continue;
      }
      const std::vector<double> delta = discriminant_profile(plan, l->t, plan.branch);
      worst = std::max(worst, std::abs(delta[l->owners.front()]));
      ++checked;
      const double outside = l == &iv.lower ? l->t - 1e-4 * iv.length() : l->t + 1e-4 * iv.length();
      try {
        state_at(plan, outside);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ComplexBranch) ++complex_raised;
      }
    }
  }
  Outcome o;
  o.pass = checked > 0 && worst < 1e-9 && complex_raised == checked;
  o.detail = fmt("%d limits, max |owner discriminant| %.2e, ComplexBranch outside %d/%d (%d domain endpoints skipped)",
                 checked, worst, complex_raised, checked, endpoints);
  return o;
}

Outcome branch_switching() {
  std::vector<DeformationPlan> plans;
  plans.push_back(build_plan(construct(fix1_three_columns()).axial));
  for (const RandomModel& m : random_models()) plans.push_back(m.plan);
  int switched = 0, good = 0;
  double worst_chart = 0.0;
  for (const DeformationPlan& plan : plans) {
    const FlexionInterval iv = flexion_limits(plan);
    for (LimitSide side : {LimitSide::lower, LimitSide::upper}) {
      const FlexionLimit& l = side == LimitSide::lower ? iv.lower : iv.upper;
      if (l.domain_endpoint) continue;
      ++switched;
      const DeformationPlan other = switch_branch(plan, iv, side);
      const FlexState a = state_at(plan, plan.t_star);
      const FlexState b = state_at(other, plan.t_star);
      double chart = 0.0;
      for (std::size_t j = 0; j < a.apex_z.size(); ++j) chart = std::max(chart, std::abs(a.apex_z[j] - b.apex_z[j]));
      const auto ca = linkage_chart(a), cb = linkage_chart(b);
      for (std::size_t i = 0; i < ca.size(); ++i) {
        for (std::size_t j = 0; j < ca[i].size(); ++j) {
          chart = std::max({chart, std::abs(ca[i][j].r - cb[i][j].r), std::abs(ca[i][j].z - cb[i][j].z)});
        }
      }
      double moved = 0.0;
      for (std::size_t i = 0; i < a.general.cols(); ++i) {
        for (std::size_t j = 0; j < a.general.rows(); ++j) {
          moved = std::max(moved, (a.general.at(i, j) - b.general.at(i, j)).norm());
        }
      }
      worst_chart = std::max(worst_chart, chart);
      if (chart < 1e-8 && moved > 1e-3 * a.general.scale()) ++good;
    }
  }
  return {switched > 0 && good == switched,
          fmt("%d/%d switches keep the linkage (max %.2e) and move a vertex", good, switched, worst_chart)};
}

Outcome scissor_rule() {
  struct Case {
    std::vector<double> z;
    std::vector<Column> cols;
  };
  // Column 0 sits level with the midpoint of two consecutive apexes.
  const std::vector<Case> cases = {{{-1.0, 1.0, 3.0}, {{0.0, 2.0, 0.0}, {1.0, 2.0, 0.0}}},
                                   {{-2.0, 0.5, 2.0, -1.0}, {{0.0, 1.5, -0.75}, {0.8, 2.0, 0.2}}},
                                   {{4.0, 1.0, -1.0}, {{0.0, 2.5, 2.5}, {1.1, 1.5, 0.4}, {2.0, 2.0, -0.3}}}};
  int rejected = 0, flexes = 0;
  for (const Case& k : cases) {
    const ControlPolylines minus = axial_input(k.z, ApexSign::minus, k.cols);
    bool minus_rejected = validate(minus).has(ViolationKind::ScissorRequiresAllPlus);
    try {
      construct(minus);
      minus_rejected = false;
    } catch (const Error&) {
    }
    rejected += minus_rejected ? 1 : 0;

    try {
      const Construction c = construct(axial_input(k.z, ApexSign::plus, k.cols));
      const DeformationPlan plan = build_plan(c.axial);
      const FlexionInterval iv = flexion_limits(plan);
      const FlexState s = state_at(plan, iv.lower.t + 0.25 * iv.length());
      if (iv.length() > 0.0 && check_isometry(s, c.mesh) < 1e-8) ++flexes;
    } catch (const Error&) {
    }
  }
  const int total = static_cast<int>(cases.size());
  return {rejected == total && flexes == total,
          fmt("minus rejected %d/%d, all-plus constructs and flexes %d/%d", rejected, total, flexes, total)};
}

Outcome branch_symmetry() {
  double residual = 0.0, mirror = 0.0;
  int solves = 0;
  for (const RandomModel& m : random_models()) {
    if (m.plan.m == 0) continue;
    for (double t : interior_samples(m.interval, 25)) {
      const FlexState s = state_at(m.plan, t);
      const LinkageState l = linkage_L0_at(m.plan, t);
      for (std::size_t i = 1; i <= m.plan.m; ++i) {
        const Point3 prev = s.axial.at(i - 1, 0);
        const TrajectorySolve sol = trajectory_point_at(m.plan, i, l, prev);
        for (const Point3& p : {sol.positive, sol.negative}) {
          residual = std::max({residual, std::abs((p - prev).norm() - m.plan.trajectory_edges[i]),
                               std::abs((p - axis_point(l.apex_z[0])).norm() - m.plan.bar_to_prev[i][0]),
                               std::abs((p - axis_point(l.apex_z[1])).norm() - m.plan.bar_to_next[i][0])});
        }
        const Vec3 normal = Vec3(-prev.y(), prev.x(), 0.0).normalized();
        const Point3 reflected = sol.positive - 2.0 * sol.positive.dot(normal) * normal;
        mirror = std::max(mirror, (reflected - sol.negative).norm());
        ++solves;
      }
    }
  }
  return {residual < 1e-10 && mirror < 1e-10,
          fmt("%d solves, max distance residual %.2e, mirror defect %.2e", solves, residual, mirror)};
}

Outcome flat_foldability() {
  ConstructionOptions developable;
  developable.developable = true;
  const Construction par = construct(flat_parallelogram(3), developable);
  const ExpansionReport pr = non_expansion_check(first_order_flex(par.axial), par.axial);
  const DeformationPlan plan = build_plan(par.axial);
  bool folds = false;
  for (double side : {1e-4, -1e-4}) {
    try {
      const FlexState s = state_at(plan, plan.t_star + side);
      folds = folds || (check_isometry(s, par.mesh) < 1e-8 && check_planarity(s.general) < 1e-8);
    } catch (const Error&) {
    }
  }

  const Construction blk = construct(flat_blocked(), developable);
  const ExpansionReport br = non_expansion_check(first_order_flex(blk.axial), blk.axial);
  bool negative = false, positive = false;
  for (const auto& col : br.rates) {
    for (double e : col) {
      negative = negative || e < -br.tolerance;
      positive = positive || e > br.tolerance;
    }
  }
  return {pr.verdict == FlatVerdict::flexes && folds && br.verdict == FlatVerdict::blocked && negative && positive,
          fmt("parallelogram %s (finite fold %s), hand-built pattern %s with mixed signs %s", to_string(pr.verdict),
              folds ? "yes" : "no", to_string(br.verdict), negative && positive ? "yes" : "no")};
}

Outcome tube_persistence() {
  const Construction par = construct(parallelogram_tube());
  const TubeReport pr = tube_check(par.axial);
  const DeformationPlan plan = build_plan(par.axial);
  const FlexionInterval iv = flexion_limits(plan);
  double gap = 0.0;
  for (double t : interior_samples(iv, 16)) {
    const FlexState s = state_at(plan, t);
    for (std::size_t i = 0; i < s.axial.cols(); ++i) gap = std::max(gap, (s.axial.at(i, 0) - s.axial.at(i, 4)).norm());
  }

  const Construction anti = construct(anti_parallelogram_tube());
  const TubeReport ar = tube_check(anti.axial);
  // Independent symmetry check: rows 2, 3 mirror rows 0, 1 in a plane
  // orthogonal to the axis.
  const VertexGrid& g = anti.axial.grid;
  const double mid = 0.5 * (g.at(0, 0).z() + g.at(0, 2).z());
  double sym = 0.0;
  for (std::size_t i = 0; i < g.cols(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const Point3& p = g.at(i, j);
      sym = std::max(sym, (g.at(i, j + 2) - Point3(p.x(), p.y(), 2.0 * mid - p.z())).norm());
    }
  }
  const bool ok = pr.closed && pr.samples_checked == 16 && gap < 1e-8 && pr.tube_class == TubeClass::parallelogram &&
                  ar.closed && ar.tube_class == TubeClass::anti_parallelogram && ar.symmetry_orthogonal && sym < 1e-8;
  return {ok, fmt("parallelogram closed over 16 samples (gap %.2e), anti-parallelogram class %s, orthogonal symmetry "
                  "%s (mirror defect %.2e)",
                  gap, to_string(ar.tube_class), ar.symmetry_orthogonal ? "yes" : "no", sym)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + PHEDRA_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "phedra_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  bool round_trip = true;
  std::vector<ControlPolylines> inputs = {fix1(), fix1_three_columns()};
  for (int k = 0; k < 5; ++k) inputs.push_back(random_models()[static_cast<std::size_t>(k)].input);
  for (const ControlPolylines& cp : inputs) {
    const ModelFile f = model_from_polylines(cp);
    const std::string text = write_model(f);
    const ModelFile back = parse_model(text);
    round_trip = round_trip && back == f && write_model(back) == text;
  }

  const fs::path model = dir / "fix1.json";
  write_model_file(model_from_polylines(fix1_three_columns()), model.string());
  const bool built = run_cli("construct " + model.string() + " -o " + (dir / "a.obj").string(), dir / "log1") == 0 &&
                     run_cli("construct " + model.string() + " -o " + (dir / "b.obj").string(), dir / "log2") == 0;
  const bool same_obj = built && slurp(dir / "a.obj") == slurp(dir / "b.obj") && !slurp(dir / "a.obj").empty();

  write_model_file(model_from_polylines(fix1()), model.string());
  const int code = run_cli("limits " + model.string(), dir / "limits.txt");
  const bool prints = code == 0 && slurp(dir / "limits.txt").rfind("t_* = -1\n", 0) == 0;
  fs::remove_all(dir);
  return {round_trip && same_obj && prints,
          fmt("round trip %s, OBJ identical %s, limits prints t_* = -1 %s", round_trip ? "yes" : "no",
              same_obj ? "yes" : "no", prints ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"reference reproduction", reference_reproduction},
      {"isometry sweep", isometry_sweep},
      {"planarity sweep", planarity_sweep},
      {"cone apex property", cone_apexes},
      {"flexion limits", flexion_limits_criterion},
      {"branch switching", branch_switching},
      {"equal-bar sign rule", scissor_rule},
      {"branch symmetry", branch_symmetry},
      {"flat foldability", flat_foldability},
      {"tube persistence", tube_persistence},
      {"cli and format determinism", cli_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
