#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "phedra/errors.hpp"
#include "phedra/geometry.hpp"
#include "phedra/grid.hpp"

namespace phedra {

struct Apex {
  double z = 0.0;
  ApexSign sign = ApexSign::none;

  bool operator==(const Apex&) const = default;
};

/// The three user polylines: trajectory V_{0,0}..V_{m,0}, direction points
/// D_0..D_m, and the signed apex heights S_0, S_1^±, .., S_{n-1}^±, S_n.
struct ControlPolylines {
  std::vector<Point3> trajectory;
  std::vector<Point3> directions;
  std::vector<Apex> apexes;

  std::size_t m() const { return trajectory.empty() ? 0 : trajectory.size() - 1; }
  std::size_t n() const { return apexes.empty() ? 0 : apexes.size() - 1; }
  double scale() const;
};

enum class ViolationKind {
  CountMismatch,
  NonFinite,
  ApexSignPlacement,
  DirectionNotHorizontal,
  DirectionCoincident,
  IdenticalProfilePlanes,
  TranslationalStrip,
  PlanesNotCoincident,
  ConsecutiveApexesEqual,
  DegenerateFrame,
  FrameNotNormalized,
  TranslationUndefined,
  VertexOnAxis,
  ScissorRequiresAllPlus,
  MinusApexOnTranslatedStrip,
  ElationApex,
  PointAtInfinity,
  NonPlanarQuad,
  THedral,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int index;  // -1 when the violation is not tied to an index
  std::string message;
};

enum class Classification { general, t_hedral, axial };

std::string_view to_string(Classification c);

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<Violation> warnings;
  Classification classification = Classification::general;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string summary() const;
};

struct ConstructionOptions {
  bool normalize = true;
  // Flat (developed or flat-folded) input: all profile planes coincide with
  // the xz-plane and the apex axis is the input z-axis.
  bool developable = false;
};

/// Rotation about the z-axis applied after a translation.
struct RigidTransform {
  double angle = 0.0;
  Vec3 shift = Vec3::Zero();

  Point3 apply(const Point3& p) const;
  Point3 inverse(const Point3& p) const;
};

struct NormalizedInput {
  ControlPolylines polylines;
  RigidTransform transform;
};

/// Per-strip translations linking the axial and the general P-hedron.
/// Entries 0 and 1 are zero; offsets[i] = sum_{k<=i} magnitudes[k]*directions[k].
struct TranslationLedger {
  std::vector<Vec3> directions;
  std::vector<double> magnitudes;
  std::vector<Vec3> offsets;

  bool empty() const;
};

struct AxialModel {
  std::vector<ProfilePlane> planes;          // axial planes, offset 0
  std::vector<ProfilePlane> general_planes;  // planes of the input
  std::vector<Point3> trajectory;            // axial trajectory
  std::vector<Point3> directions;            // translated direction points
  std::vector<Apex> apexes;
  VertexGrid grid;  // (m+1) x n, filled by propagate_rows
  TranslationLedger ledger;

  std::size_t m() const { return trajectory.empty() ? 0 : trajectory.size() - 1; }
  std::size_t n() const { return apexes.empty() ? 0 : apexes.size() - 1; }
  ApexTriple triple(std::size_t j) const;
  Point3 apex(std::size_t j) const { return axis_point(apexes[j].z); }
};

/// Quad grid of the P-hedron. Row 0 carries the translated S_0, rows 1..n
/// the vertices V_{i,0..n-1}, row n+1 the translated S_n.
struct PHedronMesh {
  VertexGrid vertices;
  std::vector<double> planarity_defects;  // one per face, grid_quads order
  std::vector<double> reference_lengths;  // grid_edges order
  Classification classification = Classification::general;

  std::size_t face_count() const;
  double max_planarity_defect() const;
};

struct Construction {
  NormalizedInput input;
  AxialModel axial;
  PHedronMesh mesh;
  ValidationReport report;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

ValidationReport validate(const ControlPolylines& raw, const ConstructionOptions& options = {});

// Throws DegenerateFrame if the first two profile planes do not meet in a
// line or V_{0,0} lies on that line.
NormalizedInput normalize_frame(const ControlPolylines& raw);

// Translations of step 1. Throws TranslationUndefined.
AxialModel axialize(const ControlPolylines& cp);

// Fills the axial grid by iterating the apex maps in every plane.
AxialModel propagate_rows(AxialModel model);

PHedronMesh deaxialize(const AxialModel& model);

// Validates, then runs the full pipeline; throws ValidationError.
Construction construct(const ControlPolylines& raw, const ConstructionOptions& options = {});

// Control polylines read back from a constructed model.
ControlPolylines extract_polylines(const AxialModel& model, const PHedronMesh& mesh);

}  // namespace phedra
