#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "phedra/construction.hpp"
#include "phedra/deformation.hpp"
#include "phedra/grid.hpp"

namespace phedra {

// Largest |L - L0| / L0 over all grid edges; edges with a vanishing
// reference length are measured relative to the longest reference edge.
// Throws GridMismatch when the edge counts differ.
double check_isometry(const VertexGrid& grid, const std::vector<double>& reference);
double check_isometry(const FlexState& state, const PHedronMesh& mesh);

// Largest normalized planarity defect over all quads.
double check_planarity(const VertexGrid& grid);

// Largest distance of S_{j+1} to the line V_ij V_{i,j+1}, divided by the
// scale of the axial grid.
double check_cone_apexes(const FlexState& state);

// True when sigma+ and sigma- of the triple centered at apex j send every
// V_{i,j-1} to the same point in its plane chart.
bool sigma_maps_agree(const FlexState& state, std::size_t j, double tol = 1e-9);

/// Infinitesimal motion of the planar linkage of a flat configuration.
struct LinkageVelocityField {
  std::vector<double> apex_rates;                   // dz_j/dt, j = 0..n
  std::vector<std::vector<Eigen::Vector2d>> velocity;  // [i][j], (dr, dz)
  std::size_t normalization_index = 0;  // unknown made positive (apex rates first)
  std::size_t nullity = 1;
};

/// Common-plane chart of a flat configuration.
struct FlatChart {
  std::vector<double> apex_z;
  std::vector<std::vector<Eigen::Vector2d>> points;  // [i][j], (r, z)
  double scale = 1.0;
};

// Throws InvalidInput unless every vertex lies in the plane of column 0.
FlatChart flat_chart(const AxialModel& model);

// Throws Rigid for a zero-dimensional and Indeterminate for a
// higher-dimensional null space of the velocity constraints.
LinkageVelocityField first_order_flex(const AxialModel& model);

// Largest |bar rate| of the field, including the rod constraints.
double bar_rate_residual(const LinkageVelocityField& field, const AxialModel& model);

enum class FlatVerdict { flexes, blocked };

struct ExpansionReport {
  FlatVerdict verdict = FlatVerdict::blocked;
  std::vector<std::vector<double>> rates;  // [i][j] for pairs (V_ij, V_{i+1,j})
  double tolerance = 0.0;
};

ExpansionReport non_expansion_check(const LinkageVelocityField& field, const AxialModel& model);

enum class TubeClass { parallelogram, anti_parallelogram, other };

struct TubeReport {
  bool closed = false;
  double closure_gap = 0.0;       // largest |V_00 - V_0,n-1| seen, relative to scale
  std::size_t samples_checked = 0;
  TubeClass tube_class = TubeClass::other;
  bool symmetry_orthogonal = false;  // anti-parallelogram symmetry line is horizontal
};

TubeReport tube_check(const AxialModel& model, const DeformationOptions& options = {});

const char* to_string(FlatVerdict v);
const char* to_string(TubeClass c);

}  // namespace phedra
