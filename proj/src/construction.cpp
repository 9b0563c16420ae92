#include "phedra/construction.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace phedra {

namespace {

constexpr double kTol = 1e-9;
constexpr double kPlanarity = 1e-8;

std::string fmt_index(const char* what, int index) {
  std::ostringstream s;
  s << what << " " << index;
  return s.str();
}

void add(std::vector<Violation>& list, ViolationKind kind, int index, std::string message) {
  list.push_back({kind, index, std::move(message)});
}

Vec3 horizontal_unit(const Point3& v, const Point3& d) {
  Vec3 h = d - v;
  h.z() = 0.0;
  return h.normalized();
}

double cross2(const Vec3& a, const Vec3& b) { return a.x() * b.y() - a.y() * b.x(); }

Point3 rotate_z(const Point3& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z()};
}

bool all_finite(const ControlPolylines& cp) {
  auto finite = [](const Point3& p) { return p.allFinite(); };
  return std::all_of(cp.trajectory.begin(), cp.trajectory.end(), finite) &&
         std::all_of(cp.directions.begin(), cp.directions.end(), finite) &&
         std::all_of(cp.apexes.begin(), cp.apexes.end(), [](const Apex& a) { return std::isfinite(a.z); });
}

// Structural and per-plane checks that need no frame.
void check_structure(const ControlPolylines& cp, const ConstructionOptions& options,
                     ValidationReport& report) {
  auto& v = report.violations;
  if (cp.trajectory.size() < 2) add(v, ViolationKind::CountMismatch, -1, "trajectory needs at least 2 points");
  if (cp.directions.size() != cp.trajectory.size()) {
    add(v, ViolationKind::CountMismatch, -1, "directions must match the trajectory point count");
  }
  if (cp.apexes.size() < 3) add(v, ViolationKind::CountMismatch, -1, "apex polyline needs at least 3 points");
  if (!v.empty()) return;
  if (!all_finite(cp)) {
    add(v, ViolationKind::NonFinite, -1, "all coordinates must be finite");
    return;
  }

  const std::size_t n = cp.n();
  for (std::size_t j = 0; j <= n; ++j) {
    const bool end = j == 0 || j == n;
    const bool signed_apex = cp.apexes[j].sign != ApexSign::none;
    if (end == signed_apex) {
      add(v, ViolationKind::ApexSignPlacement, static_cast<int>(j),
          end ? "end apexes carry no sign" : "interior apexes need a + or - sign");
    }
  }
  for (std::size_t j = 0; j + 2 <= n; ++j) {
    const double a = cp.apexes[j].z, b = cp.apexes[j + 1].z, c = cp.apexes[j + 2].z;
    const double s = kTol * (1.0 + std::max({std::abs(a), std::abs(b), std::abs(c)}));
    if (std::abs(a - b) <= s || std::abs(b - c) <= s || std::abs(a - c) <= s) {
      add(v, ViolationKind::ConsecutiveApexesEqual, static_cast<int>(j),
          fmt_index("apexes must be pairwise distinct in the triple starting at", static_cast<int>(j)));
    }
  }

  bool directions_ok = true;
  for (std::size_t i = 0; i < cp.trajectory.size(); ++i) {
    const Vec3 d = cp.directions[i] - cp.trajectory[i];
    if (d.norm() <= kTol * (1.0 + cp.trajectory[i].norm())) {
      add(v, ViolationKind::DirectionCoincident, static_cast<int>(i), "direction point equals trajectory point");
      directions_ok = false;
    } else if (std::abs(d.z()) > kTol * d.norm()) {
      add(v, ViolationKind::DirectionNotHorizontal, static_cast<int>(i),
          "direction vector must be orthogonal to the z-direction");
      directions_ok = false;
    }
  }
  if (!directions_ok) return;

  for (std::size_t i = 0; i + 1 < cp.trajectory.size(); ++i) {
    const Vec3 h0 = horizontal_unit(cp.trajectory[i], cp.directions[i]);
    const Vec3 h1 = horizontal_unit(cp.trajectory[i + 1], cp.directions[i + 1]);
    const bool parallel = std::abs(cross2(h0, h1)) <= kTol;
    const ProfilePlane plane = ProfilePlane::through(cp.trajectory[i], h0);
    const bool same =
        parallel && std::abs(plane.signed_distance(cp.trajectory[i + 1])) <= kTol * (1.0 + cp.scale());
    if (options.developable) {
      if (!same) {
        add(v, ViolationKind::PlanesNotCoincident, static_cast<int>(i + 1),
            "a developable pattern needs all profile planes to coincide");
      }
    } else if (same) {
      add(v, ViolationKind::IdenticalProfilePlanes, static_cast<int>(i + 1),
          fmt_index("profile plane coincides with its predecessor at", static_cast<int>(i + 1)));
    } else if (parallel) {
      add(v, ViolationKind::TranslationalStrip, static_cast<int>(i + 1),
          "parallel consecutive profile planes give a translational strip (not supported)");
    }
  }
}

// Frame invariants for input that is used as given.
void check_frame(const ControlPolylines& cp, const ConstructionOptions& options, ValidationReport& report) {
  auto& v = report.violations;
  const Point3& v0 = cp.trajectory[0];
  const double tol = kTol * (1.0 + v0.norm());
  if (std::abs(v0.y()) > tol || std::abs(v0.z()) > tol) {
    add(v, ViolationKind::FrameNotNormalized, 0, "V_{0,0} must lie on the x-axis");
    return;
  }
  if (v0.x() <= tol) {
    add(v, ViolationKind::DegenerateFrame, 0, "V_{0,0} must lie on the positive x-axis");
    return;
  }
  if (options.developable) {
    for (std::size_t i = 0; i < cp.trajectory.size(); ++i) {
      if (std::abs(cp.trajectory[i].y()) > kTol * (1.0 + cp.trajectory[i].norm())) {
        add(v, ViolationKind::PlanesNotCoincident, static_cast<int>(i),
            "developable input must lie in the xz-plane");
      }
    }
    return;
  }
  const Vec3 h0 = horizontal_unit(cp.trajectory[0], cp.directions[0]);
  if (std::abs(h0.y()) > kTol) {
    add(v, ViolationKind::FrameNotNormalized, 0, "the first profile plane must be the xz-plane");
  }
  const ProfilePlane p1 = ProfilePlane::through(cp.trajectory[1], horizontal_unit(cp.trajectory[1], cp.directions[1]));
  if (!p1.is_axial(kTol * (1.0 + cp.scale()))) {
    add(v, ViolationKind::FrameNotNormalized, 1, "the second profile plane must contain the z-axis");
  }
}

bool any_minus(const ControlPolylines& cp) {
  return std::any_of(cp.apexes.begin(), cp.apexes.end(), [](const Apex& a) { return a.sign == ApexSign::minus; });
}

Classification classify(const std::vector<Point3>& trajectory, const TranslationLedger& ledger, double scale) {
  const bool flat_trajectory = std::all_of(trajectory.begin(), trajectory.end(),
                                           [&](const Point3& p) { return std::abs(p.z()) <= kTol * (1.0 + scale); });
  if (flat_trajectory) return Classification::t_hedral;
  const bool no_offsets = std::all_of(ledger.magnitudes.begin(), ledger.magnitudes.end(),
                                      [&](double d) { return std::abs(d) <= kTol * (1.0 + scale); });
  return no_offsets ? Classification::axial : Classification::general;
}

// Runs the pipeline, recording problems in the report. Returns the
// construction when every stage succeeded.
std::optional<Construction> run_pipeline(const ControlPolylines& raw, const ConstructionOptions& options,
                                         ValidationReport& report) {
  check_structure(raw, options, report);
  if (!report.ok()) return std::nullopt;

  Construction out;
  if (options.normalize && !options.developable) {
    try {
      out.input = normalize_frame(raw);
    } catch (const Error& e) {
      add(report.violations, ViolationKind::DegenerateFrame, 0, e.detail());
      return std::nullopt;
    }
  } else {
    out.input.polylines = raw;
    for (std::size_t i = 0; i < raw.trajectory.size(); ++i) {
      out.input.polylines.directions[i] =
          raw.trajectory[i] + horizontal_unit(raw.trajectory[i], raw.directions[i]);
    }
    check_frame(out.input.polylines, options, report);
    if (!report.ok()) return std::nullopt;
  }
  const ControlPolylines& cp = out.input.polylines;
  const double scale = cp.scale();

  try {
    out.axial = axialize(cp);
  } catch (const Error& e) {
    const auto kind = e.code() == ErrorCode::TranslationUndefined ? ViolationKind::TranslationUndefined
                                                                  : ViolationKind::VertexOnAxis;
    add(report.violations, kind, -1, e.detail());
    return std::nullopt;
  }
  const AxialModel& ax = out.axial;

  report.classification = classify(cp.trajectory, ax.ledger, scale);
  if (report.classification == Classification::t_hedral) {
    add(report.warnings, ViolationKind::THedral, -1,
        "trajectory lies in the xy-plane: the P-hedron is also a T-hedron");
  }

  // Scissor-like layers: equal bars force all-plus apexes.
  for (std::size_t i = 0; i <= ax.m(); ++i) {
    const Point3& p = ax.trajectory[i];
    const double d0 = (ax.apex(0) - p).norm();
    const double d1 = (ax.apex(1) - p).norm();
    if (std::abs(d0 - d1) <= kTol * (1.0 + p.norm()) && any_minus(cp)) {
      add(report.violations, ViolationKind::ScissorRequiresAllPlus, static_cast<int>(i),
          fmt_index("|S_0 - V_{i,0}| = |S_1 - V_{i,0}| (scissor layer) requires only plus signs; layer",
                    static_cast<int>(i)));
      break;
    }
  }

  if (any_minus(cp) && report.classification == Classification::general) {
    for (std::size_t i = 2; i <= ax.m(); ++i) {
      if (std::abs(ax.ledger.magnitudes[i]) > kTol * (1.0 + scale)) {
        add(report.violations, ViolationKind::MinusApexOnTranslatedStrip, static_cast<int>(i),
            fmt_index("minus-signed apexes need an axial strip, but strip has a nonzero offset:",
                      static_cast<int>(i)));
      }
    }
  }

  for (std::size_t j = 1; j < cp.n(); ++j) {
    if (cp.apexes[j].sign != ApexSign::minus) continue;
    const double mid = 0.5 * (cp.apexes[j - 1].z + cp.apexes[j + 1].z);
    if (std::abs(cp.apexes[j].z - mid) <= kTol * (1.0 + std::abs(mid))) {
      add(report.violations, ViolationKind::ElationApex, static_cast<int>(j),
          "a minus apex may not sit on the bisector of its neighbours");
    }
  }
  if (!report.ok()) return std::nullopt;

  try {
    out.axial = propagate_rows(std::move(out.axial));
  } catch (const Error& e) {
    add(report.violations, ViolationKind::PointAtInfinity, -1, e.detail());
    return std::nullopt;
  }

  out.mesh = deaxialize(out.axial);
  out.mesh.classification = report.classification;
  const auto quads = grid_quads(out.mesh.vertices.cols(), out.mesh.vertices.rows());
  for (std::size_t f = 0; f < quads.size(); ++f) {
    if (out.mesh.planarity_defects[f] > kPlanarity) {
      std::ostringstream msg;
      msg << "quad (" << quads[f].col << ", " << quads[f].row << ") has planarity defect "
          << out.mesh.planarity_defects[f];
      add(report.violations, ViolationKind::NonPlanarQuad, static_cast<int>(f), msg.str());
    }
  }
  if (!report.ok()) return std::nullopt;
  out.report = report;
  return out;
}

}  // namespace

double ControlPolylines::scale() const {
  double s = 0.0;
  for (const auto& p : trajectory) s = std::max(s, p.norm());
  for (const auto& a : apexes) s = std::max(s, std::abs(a.z));
  return s;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::CountMismatch: return "CountMismatch";
    case ViolationKind::NonFinite: return "NonFinite";
    case ViolationKind::ApexSignPlacement: return "ApexSignPlacement";
    case ViolationKind::DirectionNotHorizontal: return "DirectionNotHorizontal";
    case ViolationKind::DirectionCoincident: return "DirectionCoincident";
    case ViolationKind::IdenticalProfilePlanes: return "IdenticalProfilePlanes";
    case ViolationKind::TranslationalStrip: return "TranslationalStrip";
    case ViolationKind::PlanesNotCoincident: return "PlanesNotCoincident";
    case ViolationKind::ConsecutiveApexesEqual: return "ConsecutiveApexesEqual";
    case ViolationKind::DegenerateFrame: return "DegenerateFrame";
    case ViolationKind::FrameNotNormalized: return "FrameNotNormalized";
    case ViolationKind::TranslationUndefined: return "TranslationUndefined";
    case ViolationKind::VertexOnAxis: return "VertexOnAxis";
    case ViolationKind::ScissorRequiresAllPlus: return "ScissorRequiresAllPlus";
    case ViolationKind::MinusApexOnTranslatedStrip: return "MinusApexOnTranslatedStrip";
    case ViolationKind::ElationApex: return "ElationApex";
    case ViolationKind::PointAtInfinity: return "PointAtInfinity";
    case ViolationKind::NonPlanarQuad: return "NonPlanarQuad";
    case ViolationKind::THedral: return "THedral";
  }
  return "Unknown";
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::general: return "general";
    case Classification::t_hedral: return "t_hedral";
    case Classification::axial: return "axial";
  }
  return "general";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::ostringstream s;
  for (const auto& v : violations) {
    s << to_string(v.kind);
    if (v.index >= 0) s << "[" << v.index << "]";
    s << ": " << v.message << "\n";
  }
  return s.str();
}

Point3 RigidTransform::apply(const Point3& p) const { return rotate_z(p + shift, angle); }

Point3 RigidTransform::inverse(const Point3& p) const { return rotate_z(p, -angle) - shift; }

bool TranslationLedger::empty() const {
  return std::all_of(magnitudes.begin(), magnitudes.end(), [](double d) { return d == 0.0; });
}

ApexTriple AxialModel::triple(std::size_t j) const {
  return ApexTriple(apexes[j].z, apexes[j + 1].z, apexes[j + 2].z, apexes[j + 1].sign);
}

std::size_t PHedronMesh::face_count() const {
  return grid_quads(vertices.cols(), vertices.rows()).size();
}

double PHedronMesh::max_planarity_defect() const {
  return planarity_defects.empty() ? 0.0 : *std::max_element(planarity_defects.begin(), planarity_defects.end());
}

ValidationError::ValidationError(ValidationReport report)
    : Error(ErrorCode::ValidationFailed, report.summary()), report_(std::move(report)) {}

ValidationReport validate(const ControlPolylines& raw, const ConstructionOptions& options) {
  ValidationReport report;
  run_pipeline(raw, options, report);
  return report;
}

NormalizedInput normalize_frame(const ControlPolylines& raw) {
  if (raw.trajectory.size() < 2 || raw.directions.size() < 2) {
    throw Error(ErrorCode::DegenerateFrame, "need two profile planes to fix the axis");
  }
  const Point3& v0 = raw.trajectory[0];
  const Point3& v1 = raw.trajectory[1];
  const Vec3 h0 = horizontal_unit(v0, raw.directions[0]);
  const Vec3 h1 = horizontal_unit(v1, raw.directions[1]);
  const double det = cross2(h0, h1);
  if (!(std::abs(det) > kTol)) {
    throw Error(ErrorCode::DegenerateFrame, "the first two profile planes do not meet in a line");
  }
  // v0 + a h0 = v1 + b h1 in the xy-plane.
  const Vec3 diff = v1 - v0;
  const double a = cross2(diff, h1) / det;
  const Vec3 axis = v0 + a * h0;

  RigidTransform tf;
  tf.shift = Vec3(-axis.x(), -axis.y(), -v0.z());
  const Vec3 radial = v0 + tf.shift;
  if (std::hypot(radial.x(), radial.y()) <= kTol * (1.0 + v0.norm())) {
    throw Error(ErrorCode::DegenerateFrame, "V_{0,0} lies on the intersection line of the first two planes");
  }
  tf.angle = -std::atan2(radial.y(), radial.x());

  NormalizedInput out;
  out.transform = tf;
  ControlPolylines& cp = out.polylines;
  for (std::size_t i = 0; i < raw.trajectory.size(); ++i) {
    const Point3 v = tf.apply(raw.trajectory[i]);
    const Point3 d = tf.apply(raw.directions[i]);
    cp.trajectory.push_back(v);
    cp.directions.push_back(v + horizontal_unit(v, d));
  }
  // Snap the exact frame invariants of V_{0,0} and pi_0.
  const double along_x = cp.directions[0].x() >= cp.trajectory[0].x() ? 1.0 : -1.0;
  cp.trajectory[0] = Point3(cp.trajectory[0].x(), 0.0, 0.0);
  cp.directions[0] = cp.trajectory[0] + Vec3(along_x, 0.0, 0.0);
  for (const Apex& s : raw.apexes) cp.apexes.push_back({s.z + tf.shift.z(), s.sign});
  return out;
}

AxialModel axialize(const ControlPolylines& cp) {
  const std::size_t m = cp.m();
  AxialModel model;
  model.apexes = cp.apexes;
  model.trajectory = cp.trajectory;
  model.directions = cp.directions;
  auto& moved = model.trajectory;
  auto& moved_dirs = model.directions;

  for (std::size_t i = 2; i <= m; ++i) {
    const Vec3 edge = moved[i] - moved[i - 1];
    if (edge.norm() <= kTol * (1.0 + moved[i].norm())) {
      throw Error(ErrorCode::TranslationUndefined, fmt_index("zero-length trajectory edge before point", static_cast<int>(i)));
    }
    const Vec3 u = edge.normalized();
    const ProfilePlane plane = ProfilePlane::through(moved[i], horizontal_unit(moved[i], moved_dirs[i]));
    if (plane.is_axial(kTol * (1.0 + moved[i].norm()))) continue;
    const double denom = u.dot(plane.normal());
    if (std::abs(denom) <= 1e-12) {
      throw Error(ErrorCode::TranslationUndefined,
                  fmt_index("trajectory edge is parallel to the profile plane", static_cast<int>(i)));
    }
    const double s = -plane.offset / denom;
    for (std::size_t k = i; k <= m; ++k) {
      moved[k] += s * u;
      moved_dirs[k] += s * u;
    }
  }

  TranslationLedger& ledger = model.ledger;
  ledger.directions.assign(m + 1, Vec3::Zero());
  ledger.magnitudes.assign(m + 1, 0.0);
  ledger.offsets.assign(m + 1, Vec3::Zero());
  for (std::size_t i = 2; i <= m; ++i) {
    const Vec3 axial_edge = moved[i] - moved[i - 1];
    if (axial_edge.norm() <= kTol * (1.0 + moved[i].norm())) {
      throw Error(ErrorCode::TranslationUndefined,
                  fmt_index("translation collapses the trajectory edge before point", static_cast<int>(i)));
    }
    const Vec3 u = axial_edge.normalized();
    const Vec3 general_edge = cp.trajectory[i] - cp.trajectory[i - 1];
    ledger.directions[i] = u;
    ledger.magnitudes[i] = (general_edge - axial_edge).dot(u);
    ledger.offsets[i] = ledger.offsets[i - 1] + ledger.magnitudes[i] * u;
  }

  for (std::size_t i = 0; i <= m; ++i) {
    const Point3& p = moved[i];
    if (std::hypot(p.x(), p.y()) <= kTol * (1.0 + p.norm())) {
      throw Error(ErrorCode::InvalidInput, fmt_index("axial trajectory point lies on the axis:", static_cast<int>(i)));
    }
    model.planes.push_back(ProfilePlane::axial(i == 0 ? 0.0 : std::atan2(p.y(), p.x())));
    model.general_planes.push_back(
        ProfilePlane::through(cp.trajectory[i], horizontal_unit(cp.trajectory[i], cp.directions[i])));
  }
  return model;
}

AxialModel propagate_rows(AxialModel model) {
  const std::size_t m = model.m();
  const std::size_t n = model.n();
  model.grid = VertexGrid(m + 1, n);
  for (std::size_t i = 0; i <= m; ++i) {
    const ProfilePlane& plane = model.planes[i];
    // Snap onto the plane; the chart is exact by construction.
    PlanePoint q{plane.horizontal().dot(model.trajectory[i]), model.trajectory[i].z()};
    model.grid.at(i, 0) = model.trajectory[i];
    for (std::size_t j = 0; j + 2 <= n; ++j) {
      q = apex_map(model.triple(j), q);
      model.grid.at(i, j + 1) = from_plane_coords(q, plane);
    }
  }
  return model;
}

PHedronMesh deaxialize(const AxialModel& model) {
  const std::size_t m = model.m();
  const std::size_t n = model.n();
  PHedronMesh mesh;
  mesh.vertices = VertexGrid(m + 1, n + 2);
  for (std::size_t i = 0; i <= m; ++i) {
    const Vec3& w = model.ledger.offsets[i];
    mesh.vertices.at(i, 0) = model.apex(0) + w;
    for (std::size_t j = 0; j < n; ++j) mesh.vertices.at(i, j + 1) = model.grid.at(i, j) + w;
    mesh.vertices.at(i, n + 1) = model.apex(n) + w;
  }
  for (const auto& q : grid_quads(mesh.vertices.cols(), mesh.vertices.rows())) {
    const auto c = q.corners();
    mesh.planarity_defects.push_back(quad_planarity_defect(
        mesh.vertices.at(c[0].first, c[0].second), mesh.vertices.at(c[1].first, c[1].second),
        mesh.vertices.at(c[2].first, c[2].second), mesh.vertices.at(c[3].first, c[3].second)));
  }
  mesh.reference_lengths = edge_lengths(mesh.vertices);
  std::vector<Point3> general;
  double scale = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    general.push_back(model.trajectory[i] + model.ledger.offsets[i]);
    scale = std::max(scale, general.back().norm());
  }
  mesh.classification = classify(general, model.ledger, scale);
  return mesh;
}

Construction construct(const ControlPolylines& raw, const ConstructionOptions& options) {
  ValidationReport report;
  auto result = run_pipeline(raw, options, report);
  if (!result) throw ValidationError(std::move(report));
  return std::move(*result);
}

ControlPolylines extract_polylines(const AxialModel& model, const PHedronMesh& mesh) {
  ControlPolylines cp;
  for (std::size_t i = 0; i < mesh.vertices.cols(); ++i) {
    const Point3& v = mesh.vertices.at(i, 1);
    cp.trajectory.push_back(v);
    cp.directions.push_back(v + model.general_planes[i].horizontal());
  }
  cp.apexes = model.apexes;
  return cp;
}

}  // namespace phedra
